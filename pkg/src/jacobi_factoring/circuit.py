"""Exact statevector simulation of the Jacobi factoring circuit.

The register holds ``M = 2**ell`` amplitudes. Basis index ``x mod M`` carries
the phase ``j_N(x)`` for ``x`` in ``[1, M]`` (so ``x = M`` lives at index 0).
After a unitary DFT, each outcome ``y`` is post-processed into the
denominator of the best approximation to ``y/M`` with denominator at most
``B_max``.

Also here: numeric checkers for the Gauss-sum, geometric phase-sum and
trace-distance facts the success analysis rests on.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .engine import EngineConfig, jacobi_streamed
from .numtheory import (
    best_rational_approx,
    count_in_class,
    euler_phi,
    factorize,
    gcd,
    is_probable_prime,
    is_squarefree,
    jacobi_reference,
    small_prime_divisor,
)

__all__ = [
    "DEFAULT_ELL_CAP",
    "ell_cap",
    "auto_ell",
    "SimParams",
    "SimReport",
    "squarefree_parts",
    "jacobi_table",
    "build_phase_state",
    "qft_mod_2l",
    "outcome_distribution",
    "direct_sum_distribution",
    "postprocess",
    "run_algorithm1",
    "successful_y_map",
    "successful_y_set",
    "amplitude_lower_bound_check",
    "jacobi_character_dft",
    "geometric_phase_sum",
    "geometric_closed_form",
    "trace_distance_check",
]

DEFAULT_ELL_CAP = 24


def ell_cap() -> int:
    """Simulator register cap, overridable with ``JACOBI_ELL_CAP``."""
    return int(os.environ.get("JACOBI_ELL_CAP", DEFAULT_ELL_CAP))


def auto_ell(B_max: int) -> int:
    """floor(2*log2(B_max)) + 1, computed exactly."""
    if B_max < 1:
        raise ValueError("B_max must be positive")
    return (B_max * B_max).bit_length()


@dataclass(frozen=True)
class SimParams:
    N: int
    B_max: int
    ell: Optional[int] = None
    small_prime_cutoff: int = 0
    zero_phase: int = 1
    mode: str = "exact"
    shots: int = 0
    seed: int = 0
    ell_cap: int = field(default_factory=ell_cap)
    block_bits: Optional[int] = None

    def __post_init__(self):
        if self.N < 3 or self.N % 2 == 0:
            raise ValueError(f"N must be odd and >= 3, got {self.N}")
        if self.B_max < 1:
            raise ValueError("B_max must be >= 1")
        if self.ell is None:
            object.__setattr__(self, "ell", auto_ell(self.B_max))
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if self.ell > self.ell_cap:
            raise ValueError(f"ell={self.ell} exceeds the simulator cap {self.ell_cap}")
        if self.zero_phase not in (1, -1):
            raise ValueError("zero_phase must be +1 or -1")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled mode needs shots >= 1")

    @property
    def M(self) -> int:
        return 1 << self.ell


@dataclass
class SimReport:
    N: int
    A: int
    B: int
    B_max: int
    ell: int
    mode: str
    success_prob: float
    useful_prob: float
    recovered: dict[int, float]
    successful_y_count: int
    min_successful_amp_ratio: Optional[float]
    early_prime: Optional[int] = None
    samples: Optional[list[tuple[int, int]]] = None

    @property
    def squarefull(self) -> bool:
        """True when the run is in the regime with a success guarantee (A, B > 1)."""
        return self.A > 1 and self.B > 1


def squarefree_parts(N: int) -> tuple[int, int]:
    """``(A, B)`` with ``N = A**2 * B`` and B squarefree, by full factorization."""
    A = B = 1
    for p, e in factorize(N).entries:
        A *= p ** (e // 2)
        if e % 2:
            B *= p
    return A, B


def jacobi_table(N: int, upto: int, block_bits: Optional[int] = None) -> np.ndarray:
    """Jacobi symbols (x/N) for x in [0, upto], via the streamed engine.

    Values repeat with period N, so at most ``min(N, upto + 1)`` symbols are
    actually computed.
    """
    cfg = EngineConfig(block_bits=block_bits or max(upto.bit_length(), 1), runtime_checks=False)
    period = min(N, upto + 1)
    base = np.zeros(period, dtype=np.int8)
    for r in range(1, period):
        base[r], _ = jacobi_streamed(r, N, cfg)
    if period > upto:
        return base[: upto + 1]
    reps = -(-(upto + 1) // period)
    return np.tile(base, reps)[: upto + 1]


def _phases(N: int, M: int, zero_phase: int, block_bits: Optional[int]) -> np.ndarray:
    """``j_N(x)`` laid out by basis index ``x mod M`` for x in [1, M]."""
    vals = jacobi_table(N, M, block_bits)
    j = vals[1:].astype(np.float64)
    j[j == 0] = zero_phase
    # x = 1..M-1 sit at their own index; x = M wraps to index 0.
    return np.concatenate(([j[-1]], j[:-1]))


def build_phase_state(params: SimParams) -> np.ndarray:
    phases = _phases(params.N, params.M, params.zero_phase, params.block_bits)
    return phases.astype(np.complex128) / math.sqrt(params.M)


def qft_mod_2l(state: np.ndarray) -> np.ndarray:
    """Unitary DFT with kernel exp(-2*pi*i*x*y/M)."""
    size = len(state)
    if size < 1 or size & (size - 1):
        raise ValueError("register length must be a power of two")
    return np.fft.fft(state, norm="ortho")


def outcome_distribution(params: SimParams) -> np.ndarray:
    amp = qft_mod_2l(build_phase_state(params))
    return amp.real**2 + amp.imag**2


def direct_sum_distribution(N: int, ell: int, zero_phase: int = 1, chunk: int = 256) -> np.ndarray:
    """Outcome probabilities by summing the post-transform amplitude directly.

    Independent of :func:`outcome_distribution`: the phases come from
    :func:`jacobi_reference` and each amplitude is an explicit sum over x in
    [1, M] with no FFT.
    """
    M = 1 << ell
    xs = np.arange(1, M + 1, dtype=np.int64)
    j = np.array([jacobi_reference(int(x), N) or zero_phase for x in xs], dtype=np.float64)
    probs = np.empty(M)
    for lo in range(0, M, chunk):
        ys = np.arange(lo, min(lo + chunk, M), dtype=np.int64)
        # reduce x*y mod M in integers first to keep the angles small
        ang = (-2.0 * np.pi / M) * ((ys[:, None] * xs[None, :]) % M)
        amp = (np.exp(1j * ang) * j[None, :]).sum(axis=1) / M
        probs[lo : lo + len(ys)] = amp.real**2 + amp.imag**2
    return probs


def postprocess(y: int, M: int, B_max: int) -> int:
    """Classical output for outcome y: the denominator of the best approximation."""
    return best_rational_approx(y, M, B_max).denominator


def _useful(value: int, N: int, B: int) -> bool:
    return value == B or (value > 1 and N % value == 0 and is_probable_prime(value))


def run_algorithm1(params: SimParams, probs: Optional[np.ndarray] = None) -> SimReport:
    """Simulate one run of the circuit and its classical pre/post-processing.

    In exact mode every outcome is weighted by its probability; in sampled
    mode ``shots`` outcomes are drawn with ``seed``. ``probs`` may be passed
    to reuse an already computed distribution.
    """
    N = params.N
    A, B = squarefree_parts(N)
    p = small_prime_divisor(N, params.small_prime_cutoff)
    if p is not None:
        return SimReport(
            N, A, B, params.B_max, params.ell, params.mode,
            success_prob=1.0 if p == B else 0.0,
            useful_prob=1.0,
            recovered={p: 1.0},
            successful_y_count=0,
            min_successful_amp_ratio=None,
            early_prime=p,
        )

    M = params.M
    if probs is None:
        probs = outcome_distribution(params)
    good = successful_y_set(B, params.ell) if B > 1 else set()
    min_ratio = None
    if good and A > 1:
        phi = euler_phi(B)
        min_ratio = float(min(probs[y] for y in good) * phi)

    recovered: dict[int, float] = {}
    samples = None
    if params.mode == "exact":
        for y in range(M):
            out = postprocess(y, M, params.B_max)
            recovered[out] = recovered.get(out, 0.0) + float(probs[y])
    else:
        rng = np.random.default_rng(params.seed)
        ys = rng.choice(M, size=params.shots, p=probs / probs.sum())
        samples = [(int(y), postprocess(int(y), M, params.B_max)) for y in ys]
        for _, out in samples:
            recovered[out] = recovered.get(out, 0.0) + 1.0 / params.shots

    return SimReport(
        N, A, B, params.B_max, params.ell, params.mode,
        success_prob=recovered.get(B, 0.0),
        useful_prob=sum(v for k, v in recovered.items() if _useful(k, N, B)),
        recovered=dict(sorted(recovered.items())),
        successful_y_count=len(good),
        min_successful_amp_ratio=min_ratio,
        samples=samples,
    )


def successful_y_map(B: int, ell: int) -> dict[int, list[int]]:
    """For each k in [1, B-1] coprime to B, the outcomes y with |y/M - k/B| <= 1/(2M)."""
    if B < 2:
        raise ValueError("B must be >= 2")
    M = 1 << ell
    out = {}
    for k in range(1, B):
        if gcd(k, B) != 1:
            continue
        lo = k * M // B
        out[k] = [y for y in (lo, lo + 1) if 0 <= y < M and 2 * abs(y * B - k * M) <= B]
    return out


def successful_y_set(B: int, ell: int) -> set[int]:
    """All successful outcomes; checks there is at least one per coprime k and no sharing."""
    by_k = successful_y_map(B, ell)
    seen: set[int] = set()
    for k, ys in by_k.items():
        if not ys:
            raise AssertionError(f"no successful y near k/B = {k}/{B} at ell={ell}")
        if seen.intersection(ys):
            raise AssertionError(f"k={k} shares a successful y with another k (B={B}, ell={ell})")
        seen.update(ys)
    return seen


def amplitude_lower_bound_check(params: SimParams, probs: Optional[np.ndarray] = None) -> float:
    """min over successful y of ``prob(y) * phi(B)``."""
    _, B = squarefree_parts(params.N)
    if B < 2:
        raise ValueError("N is a perfect square; there is no period to find")
    if probs is None:
        probs = outcome_distribution(params)
    phi = euler_phi(B)
    return float(min(probs[y] for y in successful_y_set(B, params.ell)) * phi)


def jacobi_character_dft(m: int, k: int) -> complex:
    """sum_{j in Z_m} (j/m) * exp(-2*pi*i*j*k/m) for odd squarefree m >= 3."""
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be odd and >= 3, got {m}")
    if not is_squarefree(m):
        raise ValueError(f"m={m} is not squarefree")
    js = np.arange(m, dtype=np.int64)
    chi = np.array([jacobi_reference(int(j), m) for j in js], dtype=np.float64)
    ang = (-2.0 * np.pi / m) * ((js * (k % m)) % m)
    return complex((chi * np.exp(1j * ang)).sum())


def geometric_phase_sum(x: float, M: int) -> complex:
    """sum_{k=0}^{M-1} exp(-2*pi*i*k*x), summed term by term."""
    if M < 1:
        raise ValueError("M must be >= 1")
    k = np.arange(M, dtype=np.float64)
    return complex(np.exp(-2j * np.pi * k * x).sum())


def geometric_closed_form(x: float, M: int) -> complex:
    if float(x).is_integer():
        return complex(M)
    num = 1 - np.exp(-2j * np.pi * x * M)
    den = 1 - np.exp(-2j * np.pi * x)
    return complex(num / den)


def trace_distance_check(N: int, M: int, zero_phase: int = 1) -> tuple[float, int]:
    """Trace distance between the ideal period-B state and the prepared state.

    psi1 has amplitudes (x/B), psi2 has j_N(x), both over x in [1, M] and
    then normalized. Returns ``(distance, ||psi1||^2)`` where the squared
    norm is the exact count of x <= M coprime to B; that count is checked
    against the residue-class closed form.
    """
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and >= 3")
    if M > 1 << ell_cap():
        raise ValueError("M exceeds the simulator cap")
    _, B = squarefree_parts(N)
    xs = range(1, M + 1)
    psi1 = np.array([jacobi_reference(x, B) for x in xs], dtype=np.float64)
    psi2 = np.array([jacobi_reference(x, N) or zero_phase for x in xs], dtype=np.float64)
    norm_sq = int(np.count_nonzero(psi1))
    if B > 1:
        by_class = sum(count_in_class(M, B, j) for j in range(1, B) if gcd(j, B) == 1)
        if by_class != norm_sq:
            raise AssertionError(f"coprime count {norm_sq} != class sum {by_class}")
    overlap = float(psi1 @ psi2) / math.sqrt(norm_sq * M)
    return math.sqrt(max(0.0, 1.0 - overlap * overlap)), norm_sq
