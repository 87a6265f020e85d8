import math

import numpy as np
import pytest

from cvdyn import gaussian as g
from cvdyn import oscillators as osc
from cvdyn import OscillatorPair
from cvdyn.errors import UnstableSystemError

from conftest import PAIR_LAM0, PAIR_LAM08, SD, TH


def test_transformed_frequencies():
    fr = osc.transformed_frequencies(PAIR_LAM08)
    assert abs(fr.Omega_F - math.sqrt(0.2)) <= 1e-14
    assert abs(fr.Omega_2 - math.sqrt(1.8)) <= 1e-14


def test_unstable_coupling_rejected():
    with pytest.raises(UnstableSystemError):
        osc.transformed_frequencies(OscillatorPair(lam=1.0))
    with pytest.raises(UnstableSystemError):
        osc.transformed_frequencies(OscillatorPair(lam=1.5))


def test_vector_matrix_roundtrip():
    rng = np.random.default_rng(5)
    v = rng.normal(size=10)
    assert np.array_equal(osc.matrix_to_vector(osc.vector_to_matrix(v)), v)


def test_initial_vector_is_pure_squeezed():
    r = 1.3
    v = osc.initial_squeezed_vector(r)
    assert v[0] == math.exp(-2 * r) / 2
    assert v[2] == math.exp(2 * r) / 2
    assert v[7] == math.exp(2 * r) / 2
    assert v[9] == math.exp(-2 * r) / 2
    nus = g.symplectic_eigenvalues(osc.vector_to_matrix(v))
    assert np.abs(nus - 0.5).max() <= 1e-12


def test_initial_state_log_negativity():
    # the transformed-basis initial state is the TMSV of the bare modes
    for r in (0.5, 1.0, 2.0):
        V = osc.vector_to_matrix(osc.initial_squeezed_vector(r))
        bare = g.plus_minus_transform(V, "inverse")
        res = g.ppt_negativity(bare)
        assert abs(res.log_negativity - 2 * r) <= 1e-10


def test_closed_form_identity_at_zero():
    out = osc.closed_form_free(0.3, -0.1, 0.9, 1.2, 1.0, 0.0)
    assert out == (0.3, -0.1, 0.9)


def test_closed_form_periodicity():
    Omega_F = 0.7
    t = math.pi / Omega_F  # full period of the 2*Omega_F rotation
    V11, V12, V22 = osc.closed_form_free(0.3, -0.1, 0.9, Omega_F, 1.0, t)
    assert abs(V11 - 0.3) <= 1e-12
    assert abs(V12 + 0.1) <= 1e-12
    assert abs(V22 - 0.9) <= 1e-12


def test_closed_form_quarter_turn():
    # M=1, Omega_F=1, V-(0)=1, V12(0)=0 at t=pi/4: V- = 0, V12 = -1/2
    # realized by V11(0) = 1, V22(0) = 0 (V+ = V- = 1)
    V11, V12, V22 = osc.closed_form_free(1.0, 0.0, 0.0, 1.0, 1.0, math.pi / 4)
    vminus = V11 - V22
    assert abs(vminus) <= 1e-12
    assert abs(V12 + 0.5) <= 1e-12


def test_drift_block_structure():
    drift = osc.assemble_drift(PAIR_LAM08, None)
    A = drift.full_matrix()
    assert np.all(A[0:3, 3:] == 0)
    assert np.all(A[3:7, 0:3] == 0)
    assert np.all(A[3:7, 7:] == 0)
    assert np.all(A[7:, :7] == 0)
    assert np.all(drift.F == 0)


def test_integrate_matches_closed_form():
    pair = PAIR_LAM08
    fr = osc.transformed_frequencies(pair)
    v0 = osc.initial_squeezed_vector(0.8)
    traj = osc.integrate(pair, None, v0, 20.0, 0.01)
    V11, V12, V22 = osc.closed_form_free(v0[0], v0[1], v0[2], fr.Omega_F, pair.M, traj.t)
    assert np.abs(traj.v[:, 0] - V11).max() <= 1e-8
    assert np.abs(traj.v[:, 1] - V12).max() <= 1e-8
    assert np.abs(traj.v[:, 2] - V22).max() <= 1e-8


def test_block_independence(table_lam0):
    # zero cross-block initial data stays zero
    v0 = osc.initial_squeezed_vector(1.0)
    traj = osc.integrate(PAIR_LAM0, table_lam0, v0, 20.0, 0.05)
    assert np.abs(traj.v[:, 3:7]).max() <= 1e-10


def test_conservation_with_bath(table_lam0):
    v0 = osc.initial_squeezed_vector(1.6)
    traj = osc.integrate(PAIR_LAM0, table_lam0, v0, 30.0, 0.05)
    vp = traj.v[:, 0] * 1.0 + traj.v[:, 2]  # M = Omega_F = 1
    assert np.abs(vp - vp[0]).max() <= 1e-6 * abs(vp[0])


def test_markov_fixed_point(table_lam0):
    from cvdyn.bath import mean_occupation

    v0 = osc.initial_squeezed_vector(1.0)
    traj = osc.integrate(PAIR_LAM0, table_lam0, v0, 100.0, 0.5, markov=True)
    nbar = mean_occupation(TH, 1.0)
    target = (2 * nbar + 1) / 2
    assert abs(traj.v[-1, 7] - target) <= 0.03 * target
    assert abs(traj.v[-1, 9] - target) <= 0.03 * target


def test_free_block_frequency(table_lam0):
    v0 = osc.initial_squeezed_vector(1.0)
    traj = osc.integrate(PAIR_LAM0, table_lam0, v0, 60.0, 0.01)
    freq = osc.zero_crossing_frequency(traj.t, traj.v[:, 1])
    assert abs(freq - 2.0) <= 0.01 * 2.0


def test_entanglement_series_vacuum_stays_separable():
    v0 = osc.initial_squeezed_vector(0.0)
    traj = osc.integrate(PAIR_LAM0, None, v0, 10.0, 0.05)
    series = osc.entanglement_series(traj)
    assert series.log_negativity.max() <= 1e-10


def test_threshold_r_values():
    assert abs(osc.threshold_r(10.0) - 1.4982825605588308) <= 1e-12
    assert osc.threshold_r(0.0) == 0.0
    # direct evaluation: T=1 gives (1/2) ln(2/(e-1) + 1)
    expected = 0.5 * math.log(2.0 / (math.e - 1.0) + 1.0)
    assert abs(osc.threshold_r(1.0) - expected) <= 1e-12


def test_sudden_death_report_trivial():
    t = np.linspace(0, 10, 101)
    all_pos = osc.EntanglementSeries(t, np.full(101, 0.4), np.full(101, 0.3))
    assert osc.sudden_death_report(all_pos) == []
    all_zero = osc.EntanglementSeries(t, np.full(101, 0.6), np.zeros(101))
    assert osc.sudden_death_report(all_zero) == [(0.0, math.inf)]


def test_sudden_death_report_interpolation():
    t = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    en = np.array([1.0, 0.5, -0.0, 0.0, 0.5])
    en = np.maximum(en, 0.0)
    series = osc.EntanglementSeries(t, 0.5 - en, en)
    report = osc.sudden_death_report(series)
    assert len(report) == 1
    death, revival = report[0]
    assert 1.0 < death <= 2.0
    assert 3.0 <= revival < 4.0


def test_product_criterion_matches_ppt(table_lam0):
    """At the V11-oscillation minima (V12 = 0) the entanglement condition
    reduces to the product criterion V11*V44 < 1/4."""
    rng = np.random.default_rng(42)
    checked = 0
    for _ in range(100):
        r = rng.uniform(0.2, 2.8)
        nbar = rng.uniform(0.5, 12.0)
        # late-time snapshot at a V11 minimum: free mode squeezed in q,
        # damped mode thermalized
        v = np.zeros(10)
        v[0] = math.exp(-2 * r) / 2
        v[2] = math.exp(2 * r) / 2
        v[7] = v[9] = (2 * nbar + 1) / 2
        bare = g.plus_minus_transform(osc.vector_to_matrix(v), "inverse")
        res = g.ppt_negativity(bare)
        product_entangled = v[0] * v[9] < 0.25
        assert res.entangled == product_entangled
        checked += 1
    assert checked == 100


def test_threshold_bisection_brackets(table_lam0):
    r_num = osc.threshold_bisection(PAIR_LAM0, SD, TH)
    assert abs(r_num - osc.threshold_r(10.0)) <= 0.05


def test_integrate_validation():
    with pytest.raises(ValueError):
        osc.integrate(PAIR_LAM0, None, np.zeros(9), 1.0, 0.1)
    with pytest.raises(ValueError):
        osc.integrate(PAIR_LAM0, None, np.zeros(10), -1.0, 0.1)
    with pytest.raises(TypeError):
        osc.integrate(PAIR_LAM0, object(), osc.initial_squeezed_vector(1.0), 1.0, 0.1)
