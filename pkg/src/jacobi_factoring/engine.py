"""Streamed Jacobi symbol (x/N) for small x against a large classical N.

The large modulus is consumed block by block through
:func:`jacobi_factoring.window.match_low_bits`, which leaves a signed value
``s`` with ``|s| < 2**m`` and ``N - k*x' = 2**(n-m) * s``. Reciprocity then
turns (x/N) into a sign correction times (s/x'), an m-bit problem.

Costs are counted in m-bit word operations (not gates):

* one multiplication up front for ``x^-1 mod 2^m`` (``PRECOMPUTE_MULTS``),
* two multiplications and two additions per block iteration,
* one final subtraction to form ``s``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .numtheory import jacobi_reference
from .window import InvariantViolation, OpCounter, ReduceParams, match_low_bits

__all__ = [
    "PRECOMPUTE_MULTS",
    "EngineConfig",
    "CostReport",
    "pad_bitlength",
    "effective_block_bits",
    "cost_model",
    "jacobi_streamed",
]

PRECOMPUTE_MULTS = 1
FINAL_ADDS = 1


@dataclass(frozen=True)
class EngineConfig:
    block_bits: int = 64
    runtime_checks: bool = True
    base_case: str = "reference"

    def __post_init__(self):
        if self.block_bits < 1:
            raise ValueError("block_bits must be >= 1")
        if self.base_case != "reference":
            raise ValueError(f"unknown base case {self.base_case!r}")


@dataclass
class CostReport:
    n_padded: int = 0
    block_bits: int = 0
    block_iterations: int = 0
    peak_window_bits: int = 0
    mbit_mults: int = 0
    mbit_adds: int = 0
    base_case_bits: int = 0
    streamed: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def pad_bitlength(N: int, m: int) -> Optional[int]:
    """Smallest n >= bit_length(N) with m | n, or None if that leaves n < 2m.

    None means N is too short to stream with this block size; callers fall
    back to the direct Jacobi computation.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    n = -(-N.bit_length() // m) * m
    return n if n >= 2 * m else None


def effective_block_bits(x_odd: int, m: int) -> int:
    """Block size actually used: widened so the odd part of x fits in it."""
    return max(m, x_odd.bit_length())


def cost_model(n: int, m: int) -> CostReport:
    """Predicted counters for streaming an n-bit modulus in m-bit blocks."""
    ReduceParams(n, m)  # validates m | n and n >= 2m
    it = n // m - 1
    return CostReport(
        n_padded=n,
        block_bits=m,
        block_iterations=it,
        peak_window_bits=2 * m,
        mbit_mults=2 * it + PRECOMPUTE_MULTS,
        mbit_adds=2 * it + FINAL_ADDS,
        base_case_bits=m,
        streamed=True,
    )


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def jacobi_streamed(x: int, N: int, config: EngineConfig = EngineConfig()) -> tuple[int, CostReport]:
    if N < 3 or N % 2 == 0:
        raise ValueError(f"modulus must be odd and >= 3, got {N}")
    if x < 1:
        raise ValueError(f"x must be positive, got {x}")

    t = (x & -x).bit_length() - 1
    x_odd = x >> t
    m = effective_block_bits(x_odd, config.block_bits)
    n = pad_bitlength(N, m)
    if n is None:
        return jacobi_reference(x, N), CostReport(
            block_bits=m, base_case_bits=N.bit_length(), streamed=False
        )

    # (2/N)^t * reciprocity sign * (2/x')^(n-m)
    out = _sign(t * ((N * N - 1) // 8))
    out *= _sign((x_odd - 1) * (N - 1) // 4)
    out *= _sign((n - m) * ((x_odd * x_odd - 1) // 8))

    counter = OpCounter()
    z, _ = match_low_bits(
        N, x_odd, ReduceParams(n, m), check=config.runtime_checks, counter=counter
    )
    s = (N >> (n - m)) - z
    counter.adds += FINAL_ADDS
    if config.runtime_checks and abs(s) >> m:
        raise InvariantViolation(f"|s| = {abs(s)} does not fit in {m} bits")

    report = CostReport(
        n_padded=n,
        block_bits=m,
        block_iterations=counter.iterations,
        peak_window_bits=counter.peak_window_bits,
        mbit_mults=counter.mults,
        mbit_adds=counter.adds,
        base_case_bits=max(abs(s).bit_length(), x_odd.bit_length()),
        streamed=True,
    )
    if x_odd == 1:
        return out, report
    return out * jacobi_reference(s, x_odd), report
