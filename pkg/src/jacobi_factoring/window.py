"""Block-streaming reduction: the top bits of a multiple of x that matches N low.

Given odd ``x < 2**m`` and ``N < 2**n`` (with ``m | n``), build ``y = k*x``
with ``y < 2**n`` and ``y == N (mod 2**(n-m))`` while only ever holding a
``2m``-bit window ``z``. N is read one ``m``-bit block at a time, lowest block
first. Each step is invertible given the same block, which is what makes the
construction reversible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .numtheory import mod_inverse_pow2

__all__ = [
    "InvariantViolation",
    "ReduceParams",
    "WindowState",
    "StepRecord",
    "ReduceTrace",
    "OpCounter",
    "blocks",
    "step",
    "inverse_step",
    "match_low_bits",
    "recover_k",
]


class InvariantViolation(AssertionError):
    """A proven loop invariant failed; always an implementation bug."""


@dataclass(frozen=True)
class ReduceParams:
    n: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("block size m must be >= 1")
        if self.n % self.m:
            raise ValueError(f"m={self.m} does not divide n={self.n}")
        if self.n < 2 * self.m:
            raise ValueError(f"need n >= 2m, got n={self.n}, m={self.m}")

    @property
    def iterations(self) -> int:
        return self.n // self.m - 1

    @property
    def low_bits(self) -> int:
        return self.n - self.m


@dataclass(frozen=True)
class WindowState:
    z: int = 0
    j: int = 0


@dataclass(frozen=True)
class StepRecord:
    """One loop iteration: ``z_mid = z_before + ctrl*x``, ``z_after = z_mid >> m``."""

    j: int
    block: int
    ctrl: int
    z_before: int
    z_mid: int
    z_after: int

    @property
    def after(self) -> WindowState:
        return WindowState(self.z_after, self.j + 1)


@dataclass
class ReduceTrace:
    N: int
    x: int
    params: ReduceParams
    records: list[StepRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def y(self, j: int) -> int:
        """The implicit multiple of x held at the start of iteration ``j``."""
        m = self.params.m
        z = self.records[j].z_before if j < len(self.records) else self.records[-1].z_after
        return (z << (j * m)) + (self.N & ((1 << (j * m)) - 1))


@dataclass
class OpCounter:
    """Counts m-bit word operations and the widest live window seen."""

    mults: int = 0
    adds: int = 0
    iterations: int = 0
    peak_window_bits: int = 0

    def window(self, value: int):
        if value.bit_length() > self.peak_window_bits:
            self.peak_window_bits = value.bit_length()


def blocks(N: int, m: int, count: int) -> Iterator[int]:
    """Yield ``N_j = floor(N / 2**(j*m)) mod 2**m`` for ``j = 0 .. count-1``."""
    mask = (1 << m) - 1
    for _ in range(count):
        yield N & mask
        N >>= m


def step(
    state: WindowState,
    block: int,
    x: int,
    x_minv: int,
    m: int,
    check: bool = True,
    counter: Optional[OpCounter] = None,
) -> StepRecord:
    """Run one loop iteration and return its full record."""
    mask = (1 << m) - 1
    z = state.z
    ctrl = (x_minv * (block - z)) & mask
    z_mid = z + ctrl * x
    if counter is not None:
        counter.mults += 2
        counter.adds += 2
        counter.iterations += 1
        counter.window(z_mid)
    if check and (z_mid & mask) != block:
        raise InvariantViolation(
            f"low bits of z' ({z_mid & mask}) do not match block {block} at j={state.j}"
        )
    return StepRecord(state.j, block, ctrl, z, z_mid, z_mid >> m)


def inverse_step(state_after: WindowState, block: int, x: int, m: int) -> tuple[WindowState, int]:
    """Undo :func:`step`: rebuild ``z'`` from the block and recover ``ctrl = z' // x``.

    Returns the previous state and the recovered ``ctrl``.
    """
    if state_after.j < 1:
        raise ValueError("no step to undo at j=0")
    z_mid = (state_after.z << m) | block
    ctrl = z_mid // x
    z = z_mid - ctrl * x
    if z >= x or ctrl >> m:
        raise InvariantViolation(f"inverse step produced z={z}, ctrl={ctrl} (x={x})")
    return WindowState(z, state_after.j - 1), ctrl


def _validate(N: int, x: int, params: ReduceParams):
    if x <= 0 or x % 2 == 0:
        raise ValueError(f"x must be odd and positive, got {x}")
    if x >> params.m:
        raise ValueError(f"x={x} does not fit in m={params.m} bits")
    if N < 0 or N >> params.n:
        raise ValueError(f"N does not fit in n={params.n} bits")


def match_low_bits(
    N: int,
    x: int,
    params: ReduceParams,
    want_trace: bool = False,
    check: bool = True,
    counter: Optional[OpCounter] = None,
) -> tuple[int, Optional[ReduceTrace]]:
    """Return the final window ``z`` (and optionally the per-iteration trace).

    ``y = z * 2**(n-m) + (N mod 2**(n-m))`` is then a multiple of ``x`` below
    ``2**(n-m) * x`` that agrees with N on its low ``n-m`` bits.
    """
    _validate(N, x, params)
    m = params.m
    x_minv = mod_inverse_pow2(x, m)
    if counter is not None:
        counter.mults += 1  # x^-1 mod 2^m
    trace = ReduceTrace(N, x, params) if want_trace else None
    state = WindowState()
    for block in blocks(N, m, params.iterations):
        rec = step(state, block, x, x_minv, m, check=check, counter=counter)
        if check and rec.z_after >= x:
            raise InvariantViolation(f"window z={rec.z_after} not below x={x}")
        if trace is not None:
            trace.records.append(rec)
        state = rec.after
    return state.z, trace


def recover_k(N: int, x: int, params: ReduceParams) -> int:
    """The unique ``k < 2**(n-m)`` with ``k*x == N (mod 2**(n-m))``.

    Computed directly with a modular inverse; used as ground truth for
    :func:`match_low_bits`.
    """
    _validate(N, x, params)
    mod = 1 << params.low_bits
    return N * pow(x, -1, mod) % mod
