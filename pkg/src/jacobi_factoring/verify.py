"""Invariant sweeps shared by the ``verify`` CLI command.

Each sweep returns a list of human-readable counterexamples; empty means pass.
"""

from __future__ import annotations

import math
import random

from .circuit import (
    geometric_closed_form,
    geometric_phase_sum,
    jacobi_character_dft,
    squarefree_parts,
    trace_distance_check,
)
from .numtheory import euler_phi, gcd, integer_sqrt, is_squarefree, jacobi_reference
from .window import ReduceParams, inverse_step, match_low_bits, recover_k

GAUSS_TOL = 1e-6
PHASE_TOL = 1e-9


def window_instance_violations(N: int, x: int, params: ReduceParams) -> list[str]:
    """Check every loop invariant of one reduction, its inverse, and the oracle."""
    bad = []
    m = params.m
    z, trace = match_low_bits(N, x, params, want_trace=True)
    tag = f"N={N} x={x} n={params.n} m={m}"
    for j in range(len(trace) + 1):
        y = trace.y(j)
        mod = 1 << (j * m)
        if (y - N) % mod:
            bad.append(f"{tag} j={j}: y_j not congruent to N mod 2^jm")
        if not 0 <= y < mod * x:
            bad.append(f"{tag} j={j}: y_j out of range")
        if y % x:
            bad.append(f"{tag} j={j}: x does not divide y_j")
    for rec in trace.records:
        if not rec.z_before < x or not rec.z_after < x:
            bad.append(f"{tag} j={rec.j}: window not below x")
        if rec.z_mid >> (2 * m):
            bad.append(f"{tag} j={rec.j}: z' exceeds 2m bits")
        if rec.ctrl != rec.z_mid // x:
            bad.append(f"{tag} j={rec.j}: ctrl != floor(z'/x)")
    state = trace.records[-1].after
    for rec in reversed(trace.records):
        state, ctrl = inverse_step(state, rec.block, x, m)
        if state.z != rec.z_before or ctrl != rec.ctrl:
            bad.append(f"{tag} j={rec.j}: inverse step mismatch")
    if state.z != 0 or state.j != 0:
        bad.append(f"{tag}: unwinding did not return to the zero state")
    expect = recover_k(N, x, params) * x >> params.low_bits
    if z != expect:
        bad.append(f"{tag}: z={z} but oracle gives {expect}")
    return bad


def random_window_instance(rng: random.Random, max_m: int = 64, max_blocks: int = 16):
    m = rng.randint(1, max_m)
    n = m * rng.randint(2, max_blocks)
    x = rng.randrange(1, 1 << m, 2)
    return rng.getrandbits(n), x, ReduceParams(n, m)


def sweep_window(trials: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    bad: list[str] = []
    for _ in range(trials):
        bad += window_instance_violations(*random_window_instance(rng))
    return bad


def sweep_gauss(max_m: int) -> list[str]:
    bad = []
    for m in range(3, max_m + 1, 2):
        if not is_squarefree(m):
            continue
        for k in range(m):
            got = abs(jacobi_character_dft(m, k))
            want = math.sqrt(m) if gcd(k, m) == 1 else 0.0
            if abs(got - want) > GAUSS_TOL:
                bad.append(f"m={m} k={k}: |S|={got:.9f}, expected {want:.9f}")
    return bad


def sweep_phases(trials: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        M = rng.randint(1, 1000)
        x = rng.random()
        diff = abs(geometric_phase_sum(x, M) - geometric_closed_form(x, M))
        if diff > PHASE_TOL:
            bad.append(f"x={x!r} M={M}: closed form off by {diff:.3e}")
        x = rng.uniform(-0.5, 0.5) / M
        mag = abs(geometric_phase_sum(x, M))
        if mag < M / 4:
            bad.append(f"x={x!r} M={M}: |sum|={mag:.6f} < M/4")
    return bad


def sweep_counts(max_n: int) -> list[str]:
    bad = []
    for N in range(3, max_n + 1, 2):
        if integer_sqrt(N)[1]:
            continue
        plus = minus = 0
        for a in range(1, N + 1):
            j = jacobi_reference(a, N)
            plus += j == 1
            minus += j == -1
        half = euler_phi(N) // 2
        if plus != half or minus != half:
            bad.append(f"N={N}: +1 count {plus}, -1 count {minus}, phi/2 = {half}")
    return bad


def sweep_trace(trials: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        N = rng.randrange(3, 5001, 2)
        M = rng.randint(1, 1 << 12)
        try:
            _, norm_sq = trace_distance_check(N, M)
        except AssertionError as exc:
            bad.append(f"N={N} M={M}: {exc}")
            continue
        B = squarefree_parts(N)[1]
        direct = sum(1 for x in range(1, M + 1) if gcd(x, B) == 1)
        if direct != norm_sq:
            bad.append(f"N={N} M={M}: norm^2 {norm_sq} != direct count {direct}")
    return bad
