"""Squarefree-decomposition oracles, success boosting, and special-integer factoring.

An oracle maps ``N = A**2 * B`` to a guess that is hopefully ``B`` or a prime
factor of ``N``. :func:`boosted_decompose` filters ``T`` guesses so that a
wrong one can never win against a right one; :func:`special_factor` turns
that into a complete factorization when all prime exponents of ``N`` are
distinct.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Protocol

import numpy as np

from .circuit import SimParams, outcome_distribution, postprocess, squarefree_parts
from .numtheory import (
    Factorization,
    factorize,
    gcd,
    integer_sqrt,
    is_probable_prime,
    prime_power,
    small_prime_divisor,
)

log = logging.getLogger(__name__)

__all__ = [
    "SquarefreeOracle",
    "ClassicalOracle",
    "InjectedOracle",
    "QuantumSimOracle",
    "BoostOutcome",
    "SpecialFactorReport",
    "default_repetitions",
    "squarefree_decompose_classical",
    "select_candidate",
    "boost",
    "boosted_decompose",
    "bmax_search",
    "special_factor",
    "validate_factorization",
    "is_special",
    "failure_bound",
]


class SquarefreeOracle(Protocol):
    kind: str

    def __call__(self, N: int) -> int: ...


def squarefree_decompose_classical(N: int) -> tuple[int, int]:
    """``(A, B)`` with ``N = A**2 * B``, B squarefree, by trial division and rho."""
    if N < 1:
        raise ValueError("N must be positive")
    return squarefree_parts(N)


@lru_cache(maxsize=4096)
def _true_B(N: int) -> int:
    return squarefree_decompose_classical(N)[1]


class ClassicalOracle:
    """Always returns the exact squarefree part."""

    kind = "classical_trial"

    def __call__(self, N: int) -> int:
        return _true_B(N)


class InjectedOracle:
    """Returns the true B with probability ``success_rate``, garbage otherwise.

    Garbage is drawn from values that the boosting filter must reject or that
    lose to B: non-divisors, divisors with a non-square cofactor, and N itself.
    """

    kind = "injected"

    def __init__(self, success_rate: float, seed: int = 0):
        if not 0.0 <= success_rate <= 1.0:
            raise ValueError("success_rate must be in [0, 1]")
        self.success_rate = success_rate
        self.failure_prob = 1.0 - success_rate
        self.rng = random.Random(seed)

    def _garbage(self, N: int, B: int) -> int:
        choice = self.rng.randrange(3)
        if choice == 0:
            return N
        if choice == 1:
            # N + 1 never divides N (for N > 1)
            return N + 1 + self.rng.randrange(N)
        for d in range(2, N + 1):
            if N % d == 0 and d != B and not integer_sqrt(N // d)[1] and not is_probable_prime(d):
                return d
        return N

    def __call__(self, N: int) -> int:
        B = _true_B(N)
        if self.rng.random() < self.success_rate:
            return B
        return self._garbage(N, B)


class QuantumSimOracle:
    """One shot of the simulated circuit per call.

    The outcome distribution for each N is computed once (exactly) and then
    sampled. Even N are answered with the prime 2 by the classical small-prime
    step, since the Jacobi symbol needs an odd modulus.
    """

    kind = "quantum_sim"

    def __init__(
        self,
        B_max: Optional[int] = None,
        seed: int = 0,
        small_prime_cutoff: int = 2,
        zero_phase: int = 1,
    ):
        self.B_max = B_max
        self.small_prime_cutoff = small_prime_cutoff
        self.zero_phase = zero_phase
        self.rng = np.random.default_rng(seed)
        self._dists: dict[int, tuple[SimParams, np.ndarray]] = {}

    def _dist(self, N: int) -> tuple[SimParams, np.ndarray]:
        if N not in self._dists:
            bmax = min(self.B_max or N, N)
            params = SimParams(N, bmax, zero_phase=self.zero_phase)
            probs = outcome_distribution(params)
            self._dists[N] = (params, probs / probs.sum())
        return self._dists[N]

    def __call__(self, N: int) -> int:
        p = small_prime_divisor(N, self.small_prime_cutoff)
        if p is not None:
            return p
        params, probs = self._dist(N)
        y = int(self.rng.choice(params.M, p=probs))
        return postprocess(y, params.M, params.B_max)


def default_repetitions(N: int) -> int:
    """Repetition count used when none is given: ceil(log2 N) + 10."""
    return max(1, (N - 1).bit_length()) + 10


def _is_prime_divisor(v: int, N: int) -> bool:
    return 1 < v and N % v == 0 and is_probable_prime(v)


def select_candidate(N: int, outputs: list[int]) -> tuple[int, list[int]]:
    """Pick the answer from a batch of oracle outputs.

    A prime divisor wins outright. Otherwise the smallest ``B'`` with
    ``B' | N`` and ``N / B'`` a perfect square is chosen, or ``N`` itself
    when there is none. Returns the choice and the candidate set.
    """
    for v in outputs:
        if _is_prime_divisor(v, N):
            return v, []
    cands = sorted({v for v in outputs if 0 < v and N % v == 0 and integer_sqrt(N // v)[1]})
    return (cands[0] if cands else N), cands


@dataclass
class BoostOutcome:
    value: int
    outputs: list[int] = field(default_factory=list)
    candidates: list[int] = field(default_factory=list)
    shortcut: Optional[str] = None  # "prime" / "square" when the oracle was skipped


def boost(N: int, oracle: SquarefreeOracle, T: int) -> BoostOutcome:
    """:func:`boosted_decompose` with the intermediate sets kept."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if T < 1:
        raise ValueError("T must be >= 1")
    if is_probable_prime(N):
        return BoostOutcome(N, shortcut="prime")
    if integer_sqrt(N)[1]:
        return BoostOutcome(1, shortcut="square")
    outputs = []
    for _ in range(T):
        v = oracle(N)
        outputs.append(v)
        if _is_prime_divisor(v, N):
            return BoostOutcome(v, outputs)
    value, cands = select_candidate(N, outputs)
    return BoostOutcome(value, outputs, cands)


def boosted_decompose(N: int, oracle: SquarefreeOracle, T: Optional[int] = None) -> int:
    """Return B or a prime divisor of N with failure probability ~ (1-p)^T."""
    return boost(N, oracle, T or default_repetitions(N)).value


def _halts(value: int, N: int) -> bool:
    if value == 1 or _is_prime_divisor(value, N):
        return True
    return 1 < value < N and N % value == 0 and integer_sqrt(N // value)[1]


def bmax_search(
    N: int,
    oracle_for: Callable[[int], SquarefreeOracle],
    T: Optional[int] = None,
) -> tuple[int, list[int]]:
    """Find B without knowing a bound on it: B_max = 2, 4, 16, 256, ...

    Each level squares B_max (doubling its bit length) and runs the boosted
    decomposition with ``oracle_for(B_max)``. Stops at the first level whose
    answer is 1 (square), a prime divisor, or a proper B with square
    cofactor; gives up with N once B_max reaches N. Returns the answer and
    the list of B_max levels tried.
    """
    T = T or default_repetitions(N)
    levels = []
    bmax = 2
    while True:
        level = min(bmax, N)
        levels.append(level)
        value = boosted_decompose(N, oracle_for(level), T)
        if _halts(value, N):
            return value, levels
        if level >= N:
            return N, levels
        bmax = bmax * bmax


@dataclass
class SpecialFactorReport:
    factorization: Factorization
    oracle_calls: int = 0
    oracle_invocations: int = 0
    aborted: bool = False
    reason: str = ""


class _CountingOracle:
    def __init__(self, inner: SquarefreeOracle):
        self.inner = inner
        self.kind = inner.kind
        self.invocations = 0

    def __call__(self, N: int) -> int:
        self.invocations += 1
        return self.inner(N)


class _Abort(Exception):
    pass


def _strip(M: int, p: int) -> tuple[int, int]:
    e = 0
    while M % p == 0:
        M //= p
        e += 1
    return M, e


def _special_factor(N: int, oracle: _CountingOracle, T: Optional[int], calls: list[int]) -> dict[int, int]:
    M, F = N, {}
    while M > 1:
        pp = prime_power(M)
        if pp is not None:
            F[pp[0]] = F.get(pp[0], 0) + pp[1]
            break
        root, square = integer_sqrt(M)
        if square:
            for p, e in _special_factor(root, oracle, T, calls).items():
                F[p] = F.get(p, 0) + 2 * e
            break
        calls[0] += 1
        B = boosted_decompose(M, oracle, T or default_repetitions(N))
        if B > 1 and is_probable_prime(B):
            M, e = _strip(M, B)
            if e == 0:
                raise _Abort(f"oracle returned prime {B} not dividing {M}")
            F[B] = F.get(B, 0) + e
            continue
        if B < 2 or M % B or not integer_sqrt(M // B)[1]:
            raise _Abort(f"oracle output {B} is not a valid squarefree part of {M}")
        k, _gamma = _strip(M, B)
        p = B // gcd(k, B)
        if not is_probable_prime(p):
            raise _Abort(f"B/gcd(k, B) = {p} is not prime (M={M}, B={B})")
        M, e = _strip(M, p)
        F[p] = F.get(p, 0) + e
    return F


def special_factor(N: int, oracle: SquarefreeOracle, T: Optional[int] = None) -> SpecialFactorReport:
    """Completely factor N when its prime exponents are pairwise distinct.

    Non-special input is not rejected up front; it surfaces as an abort,
    either mid-run or afterwards through a repeated exponent.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    counting = _CountingOracle(oracle)
    calls = [0]
    try:
        F = _special_factor(N, counting, T, calls)
    except _Abort as exc:
        log.info("special_factor(%d) aborted: %s", N, exc)
        return SpecialFactorReport(Factorization(), calls[0], counting.invocations, True, str(exc))
    fact = Factorization.from_dict(F)
    report = SpecialFactorReport(fact, calls[0], counting.invocations)
    if len(set(fact.exponents)) != len(fact.exponents):
        report.aborted = True
        report.reason = "repeated exponent: input is not special"
    elif not validate_factorization(N, fact):
        report.aborted = True
        report.reason = "factorization does not validate"
    return report


def validate_factorization(N: int, F: Factorization) -> bool:
    if any(e < 1 for _, e in F.entries):
        return False
    if not all(is_probable_prime(p) for p, _ in F.entries):
        return False
    return F.value() == N


def is_special(N: int) -> bool:
    """True if all prime exponents of N are distinct (by full factorization)."""
    exps = factorize(N).exponents
    return len(set(exps)) == len(exps)


def failure_bound(p: float, T: int, trials: int, sigmas: float = 3.0) -> float:
    """(1-p)^T plus ``sigmas`` binomial standard errors over ``trials``."""
    q = (1.0 - p) ** T
    return q + sigmas * math.sqrt(q * (1.0 - q) / trials)
