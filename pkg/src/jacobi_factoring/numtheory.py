"""Arbitrary-precision number theory primitives.

Everything here works on plain Python ints. The reference Jacobi symbol is
the usual binary/reciprocity loop; the streamed variant in
:mod:`jacobi_factoring.engine` is checked against it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

__all__ = [
    "Fraction",
    "Factorization",
    "FactoringBudgetExceeded",
    "gcd",
    "jacobi_reference",
    "mod_inverse_pow2",
    "is_probable_prime",
    "integer_sqrt",
    "integer_root",
    "perfect_power",
    "prime_power",
    "best_rational_approx",
    "count_in_class",
    "factorize",
    "euler_phi",
    "is_squarefree",
    "small_prime_divisor",
]


class FactoringBudgetExceeded(RuntimeError):
    """Raised when the desk-scale factorizer runs out of its work budget."""


class Fraction(NamedTuple):
    """A nonnegative fraction in lowest terms."""

    numerator: int
    denominator: int

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as strictly increasing ``(prime, exponent)`` pairs."""

    entries: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "Factorization":
        return cls(tuple(sorted((p, e) for p, e in d.items() if e)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def value(self) -> int:
        out = 1
        for p, e in self.entries:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.entries]

    @property
    def exponents(self) -> list[int]:
        return [e for _, e in self.entries]

    def __str__(self):
        if not self.entries:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.entries)


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two nonnegative integers; ``gcd(0, 0) == 0``."""
    return math.gcd(a, b)


def jacobi_reference(a: int, b: int) -> int:
    """Jacobi symbol (a/b) for odd positive ``b`` and any integer ``a``.

    Negative ``a`` is handled by pulling out (-1/b) = (-1)^((b-1)/2) before
    reducing modulo ``b``.
    """
    if b <= 0 or b % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {b}")
    acc = 1
    if a < 0:
        a = -a
        if b & 3 == 3:
            acc = -acc
    a %= b
    while a:
        while a & 1 == 0:
            a >>= 1
            if b & 7 in (3, 5):
                acc = -acc
        a, b = b, a
        if a & 3 == 3 and b & 3 == 3:
            acc = -acc
        a %= b
    return acc if b == 1 else 0


def mod_inverse_pow2(x: int, m: int) -> int:
    """Inverse of odd ``x`` modulo ``2**m`` by Newton/Hensel doubling."""
    if x % 2 == 0:
        raise ValueError("only odd numbers are invertible modulo a power of two")
    if m < 0:
        raise ValueError("bit count must be nonnegative")
    if m == 0:
        return 0
    w = 1  # x * 1 == 1 (mod 2)
    bits = 1
    while bits < m:
        bits = min(2 * bits, m)
        mask = (1 << bits) - 1
        w = (w * (2 - w * x)) & mask
    return w & ((1 << m) - 1)


# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _mr_witness(a: int, n: int, d: int, s: int) -> bool:
    """True if ``a`` proves ``n`` composite."""
    y = pow(a, d, n)
    if y == 1 or y == n - 1:
        return False
    for _ in range(s - 1):
        y = y * y % n
        if y == n - 1:
            return False
    return True


def is_probable_prime(n: int, rounds: int = 32, seed: int = 0) -> bool:
    """Miller-Rabin primality test.

    Exact below 2**64 (fixed witness set). Above that, the fixed witnesses
    are followed by ``rounds`` seeded random witnesses, so a composite slips
    through with probability at most 4**-rounds.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if any(_mr_witness(a, n, d, s) for a in _MR_BASES):
        return False
    if n < 1 << 64:
        return True
    rng = random.Random(seed)
    return not any(_mr_witness(rng.randrange(2, n - 1), n, d, s) for _ in range(rounds))


def integer_sqrt(n: int) -> tuple[int, bool]:
    """Return ``(floor(sqrt(n)), is_exact_square)``."""
    if n < 0:
        raise ValueError("square root of a negative number")
    r = math.isqrt(n)
    return r, r * r == n


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, in exact integer arithmetic."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    if k >= n.bit_length():
        return 1
    # Newton from an overestimate; decreases monotonically to the floor root.
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


def perfect_power(n: int) -> Optional[tuple[int, int]]:
    """Return ``(a, k)`` with ``a**k == n`` and ``k >= 2`` maximal, or None."""
    if n < 2:
        raise ValueError("perfect_power needs n >= 2")
    for k in range(n.bit_length(), 1, -1):
        a = integer_root(n, k)
        if a > 1 and a**k == n:
            return a, k
    return None


def prime_power(n: int) -> Optional[tuple[int, int]]:
    """Return ``(p, e)`` if ``n == p**e`` for a prime ``p`` and ``e >= 1``."""
    if n < 2:
        return None
    if is_probable_prime(n):
        return n, 1
    pp = perfect_power(n)
    if pp is None:
        return None
    a, k = pp
    # k is maximal, so a is not itself a perfect power; it is prime or nothing.
    if is_probable_prime(a):
        return a, k
    return None


def best_rational_approx(y: int, M: int, d_max: int) -> Fraction:
    """Closest fraction to ``y/M`` with denominator at most ``d_max``.

    Walks the continued fraction of y/M and compares the last convergent that
    fits against the best semiconvergent on the other side. Ties go to the
    smaller denominator, then the smaller numerator.
    """
    if M <= 0 or not 0 <= y < M:
        raise ValueError("need 0 <= y < M")
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    # (p0/q0) previous convergent, (p1/q1) current one.
    p0, q0, p1, q1 = 1, 0, y // M, 1
    num, den = M, y % M
    while den:
        a = num // den
        num, den = den, num - a * den
        q2 = q0 + a * q1
        if q2 > d_max:
            break
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q2
    else:
        return Fraction(p1, q1)  # y/M itself fits
    t = (d_max - q0) // q1
    semi = (p0 + t * p1, q0 + t * q1)
    conv = (p1, q1)

    # compare |y/M - p/q| by cross multiplication
    ec, es = abs(y * conv[1] - conv[0] * M), abs(y * semi[1] - semi[0] * M)
    lhs, rhs = ec * semi[1], es * conv[1]
    if lhs < rhs:
        best = conv
    elif rhs < lhs:
        best = semi
    else:
        best = min(conv, semi, key=lambda f: (f[1], f[0]))
    return Fraction(*best)


def count_in_class(M: int, B: int, j: int) -> int:
    """Number of x in [1, M] with x == j (mod B), by the closed form."""
    if B <= 1 or not 0 <= j < B:
        raise ValueError("need B > 1 and 0 <= j < B")
    floor_hi = (M - j) // B
    ceil_lo = -((j - 1) // B)  # ceil((1 - j) / B)
    return floor_hi - ceil_lo + 1


def small_prime_divisor(n: int, cutoff: int) -> Optional[int]:
    """Smallest prime divisor of ``n`` that is <= cutoff, if any."""
    if n < 2 or cutoff < 2:
        return None
    if n % 2 == 0:
        return 2
    p = 3
    while p <= cutoff and p * p <= n:
        if n % p == 0:
            return p
        p += 2
    if n <= cutoff:
        return n  # n itself is prime here
    return None


def _pollard_brent(n: int, rng: random.Random, budget: list[int]) -> int:
    """Nontrivial factor of odd composite ``n`` (Brent's cycle variant)."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            budget[0] -= r
            if budget[0] < 0:
                raise FactoringBudgetExceeded(f"gave up factoring {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, budget: int = 10**7, seed: int = 0) -> Factorization:
    """Trial division by small primes, then Pollard-Brent rho.

    Meant for desk-scale ground truth. ``budget`` bounds the number of rho
    iterations; :class:`FactoringBudgetExceeded` is raised past it.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 7..1000
    p, inc = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p <= 1000 and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += inc[i]
        i = (i + 1) % 8
    rng = random.Random(seed)
    left = [budget]
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        pp = perfect_power(m)
        if pp is not None:
            stack.extend([pp[0]] * pp[1])
            continue
        d = _pollard_brent(m, rng, left)
        stack.extend((d, m // d))
    return Factorization.from_dict(out)


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("phi needs n >= 1")
    out = n
    for p, _ in factorize(n).entries:
        out = out // p * (p - 1)
    return out


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factorize(n).entries)


def product(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out
