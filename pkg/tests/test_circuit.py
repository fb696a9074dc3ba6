import math
import random

import numpy as np
import pytest

from jacobi_factoring.circuit import (
    SimParams,
    amplitude_lower_bound_check,
    auto_ell,
    build_phase_state,
    direct_sum_distribution,
    geometric_closed_form,
    geometric_phase_sum,
    jacobi_character_dft,
    jacobi_table,
    outcome_distribution,
    postprocess,
    qft_mod_2l,
    run_algorithm1,
    squarefree_parts,
    successful_y_map,
    successful_y_set,
    trace_distance_check,
)
from jacobi_factoring.numtheory import jacobi_reference


def test_qft_of_constant_is_delta():
    out = qft_mod_2l(np.full(16, 0.25, dtype=complex))
    assert abs(out[0] - 1) < 1e-12
    assert np.allclose(out[1:], 0)


def test_qft_of_delta_is_flat():
    state = np.zeros(32, dtype=complex)
    state[1] = 1
    assert np.allclose(np.abs(qft_mod_2l(state)), 2 ** -2.5)


def test_qft_is_unitary_and_matches_kernel():
    M = 8
    rng = np.random.default_rng(0)
    v = rng.normal(size=M) + 1j * rng.normal(size=M)
    xs = np.arange(M)
    F = np.exp(-2j * np.pi * np.outer(xs, xs) / M) / math.sqrt(M)
    assert np.allclose(qft_mod_2l(v), F @ v)
    assert np.allclose(F.conj().T @ F, np.eye(M))
    assert math.isclose(np.linalg.norm(qft_mod_2l(v)), np.linalg.norm(v))


def test_qft_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        qft_mod_2l(np.ones(6))


def test_phase_state_layout():
    params = SimParams(175, 7, ell=6)
    state = build_phase_state(params) * math.sqrt(params.M)
    assert state[3].real == -1  # (3/175) = (3/7) = -1
    assert state[0].real == 1  # x = M = 64 wraps to index 0; (64/175) = +1
    for x in range(1, params.M):
        want = jacobi_reference(x, 175) or 1
        assert state[x].real == want


def test_jacobi_table_periodic():
    t = jacobi_table(15, 100)
    assert len(t) == 101
    assert all(t[x] == jacobi_reference(x, 15) for x in range(101))


def test_auto_ell():
    assert auto_ell(7) == 6
    assert auto_ell(5) == 5
    assert auto_ell(11) == 7


def test_sim_params_validation(monkeypatch):
    with pytest.raises(ValueError):
        SimParams(16, 3)
    with pytest.raises(ValueError):
        SimParams(15, 3, zero_phase=0)
    with pytest.raises(ValueError):
        SimParams(15, 3, mode="sampled")
    monkeypatch.setenv("JACOBI_ELL_CAP", "4")
    with pytest.raises(ValueError):
        SimParams(175, 7)


@pytest.mark.parametrize("N, ell", [(45, 5), (175, 6), (75, 5), (99, 7), (15, 4)])
@pytest.mark.parametrize("zero_phase", [1, -1])
def test_fft_matches_direct_sum(N, ell, zero_phase):
    fft = outcome_distribution(SimParams(N, 2, ell=ell, zero_phase=zero_phase))
    direct = direct_sum_distribution(N, ell, zero_phase)
    assert np.max(np.abs(fft - direct)) < 1e-12
    assert math.isclose(fft.sum(), 1.0)


def test_successful_y_examples():
    assert successful_y_set(3, 5) == {11, 21}
    s = successful_y_set(7, 6)
    assert len(s) == 6
    assert s == {9, 18, 27, 37, 46, 55}


def test_successful_y_postprocess_to_B():
    for B, ell in [(3, 5), (5, 5), (7, 6), (11, 7), (15, 8)]:
        M = 1 << ell
        for k, ys in successful_y_map(B, ell).items():
            for y in ys:
                assert postprocess(y, M, B) == B, (B, ell, k, y)


def test_run_algorithm1_175():
    rep = run_algorithm1(SimParams(175, 7))
    assert (rep.A, rep.B, rep.ell) == (5, 7, 6)
    assert rep.squarefull
    assert rep.success_prob == pytest.approx(0.5809296876070017, abs=1e-12)
    assert math.isclose(sum(rep.recovered.values()), 1.0)
    assert rep.useful_prob >= rep.success_prob


def test_run_algorithm1_squarefree_has_no_channel():
    rep = run_algorithm1(SimParams(15, 5))
    assert (rep.A, rep.B) == (1, 15)
    assert not rep.squarefull
    assert rep.min_successful_amp_ratio is None


def test_early_prime_shortcut():
    rep = run_algorithm1(SimParams(45, 5, small_prime_cutoff=3))
    assert rep.early_prime == 3
    assert rep.recovered == {3: 1.0}


def test_sampled_mode_converges():
    exact = run_algorithm1(SimParams(175, 7)).success_prob
    shots = 100_000
    sampled = run_algorithm1(SimParams(175, 7, mode="sampled", shots=shots, seed=4))
    sigma = math.sqrt(exact * (1 - exact) / shots)
    assert abs(sampled.success_prob - exact) <= 3 * sigma
    again = run_algorithm1(SimParams(175, 7, mode="sampled", shots=50, seed=4))
    assert again.samples == run_algorithm1(SimParams(175, 7, mode="sampled", shots=50, seed=4)).samples


def test_amplitude_lower_bound_check_matches_report():
    params = SimParams(175, 7)
    assert amplitude_lower_bound_check(params) == pytest.approx(run_algorithm1(params).min_successful_amp_ratio)
    with pytest.raises(ValueError):
        amplitude_lower_bound_check(SimParams(9, 3))


def test_squarefree_parts():
    assert squarefree_parts(175) == (5, 7)
    assert squarefree_parts(12) == (2, 3)
    assert squarefree_parts(97) == (1, 97)
    assert squarefree_parts(2205) == (21, 5)


def test_gauss_examples():
    s = jacobi_character_dft(15, 2)
    assert abs(abs(s) - math.sqrt(15)) < 1e-6
    assert abs(jacobi_character_dft(15, 5)) < 1e-6
    assert abs(jacobi_character_dft(15, 0)) < 1e-9
    with pytest.raises(ValueError):
        jacobi_character_dft(9, 1)


def test_geometric_examples():
    assert geometric_phase_sum(0, 8) == pytest.approx(8)
    assert abs(geometric_phase_sum(0.5, 2)) < 1e-12
    assert geometric_closed_form(3.0, 5) == 5


def test_geometric_closed_form_random():
    rng = random.Random(2)
    for _ in range(200):
        x, M = rng.random(), rng.randint(1, 300)
        assert abs(geometric_phase_sum(x, M) - geometric_closed_form(x, M)) < 1e-9


@pytest.mark.parametrize(
    "N, M, dist, norm_sq",
    [
        (175, 64, 0.6889963055713064, 55),
        (45, 32, 0.7813942174580786, 26),
        (99, 128, 0.7637189010552639, 117),
        (2205, 32, 0.874312917051485, 26),
        (10403, 64, 0.0, 64),
    ],
)
def test_trace_distance_regressions(N, M, dist, norm_sq):
    got, count = trace_distance_check(N, M)
    assert count == norm_sq
    assert got == pytest.approx(dist, abs=1e-12)


def test_trace_distance_zero_for_squarefree():
    # B = N, and no x <= M shares a factor with N, so the states coincide
    assert trace_distance_check(10403, 100)[0] == 0.0
