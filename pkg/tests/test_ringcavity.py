import math

import numpy as np
import pytest

from cvdyn import gaussian as g
from cvdyn import ringcavity as rc
from cvdyn.errors import UnstableSystemError

ENSEMBLE = rc.EnsembleParams(
    N_atoms=10000, g_u=1.0, g_s=1.0, Delta_u=100.0, Delta_s=100.0,
    Omega_u=2.0 * math.sqrt(2.0), Omega_s=2.0, kappa=1.0, delta_c=-100.0,
)


@pytest.fixture(scope="module")
def couplings():
    return rc.effective_couplings(ENSEMBLE)


@pytest.fixture(scope="module")
def protocol(couplings):
    return rc.run_protocol(ENSEMBLE)


def test_effective_couplings(couplings):
    # beta = sqrt(N) Omega g e^{-i phi} / (2 Delta)
    assert abs(couplings.beta_u - math.sqrt(2.0)) <= 1e-12
    assert abs(couplings.beta_s - 1.0) <= 1e-12


def test_complex_phase_carried():
    p = rc.EnsembleParams(
        N_atoms=100, g_u=1.0, g_s=1.0, Delta_u=50.0, Delta_s=50.0,
        Omega_u=2.0, Omega_s=1.0, kappa=1.0, phi_u=math.pi / 2,
    )
    ec = rc.effective_couplings(p)
    assert abs(ec.beta_u.real) <= 1e-12
    assert ec.beta_u.imag < 0


def test_validity_check_clean():
    assert rc.validity_check(ENSEMBLE) == []


def test_validity_check_flags_bad_regimes():
    p = rc.EnsembleParams(
        N_atoms=100, g_u=1.0, g_s=0.5, Delta_u=5.0, Delta_s=100.0,
        Omega_u=2.0, Omega_s=1.0, kappa=1.0,
    )
    warnings = rc.validity_check(p)
    assert any("adiabaticity" in w for w in warnings)
    assert any("Stark" in w for w in warnings)


def test_squeeze_parameters(couplings):
    xi0, xi1 = rc.squeeze_parameters(couplings)
    bu, bs = abs(couplings.beta_u), abs(couplings.beta_s)
    expected = 0.5 * math.log((bu + bs) / (bu - bs))
    assert xi0 == xi1
    assert abs(xi0 - expected) <= 1e-12


def test_degenerate_couplings_rejected():
    ec = rc.EffectiveCouplings(beta_u=1.0 + 0j, beta_s=1.0 + 0j)
    with pytest.raises(UnstableSystemError):
        rc.squeeze_parameters(ec)
    with pytest.raises(UnstableSystemError):
        rc.beta_effective(ec)


def test_beta_effective(couplings):
    assert abs(rc.beta_effective(couplings) - 1.0) <= 1e-12


def test_diffusion_positive_semidefinite(couplings):
    for kappa in (0.0, 0.3, 1.0, 5.0):
        ms = rc.build_system(couplings, kappa)
        ev = np.linalg.eigvalsh(ms.diffusion)
        assert ev.min() >= -1e-14


def test_drift_eigenvalues_stable(couplings):
    for step in ("clockwise", "anticlockwise"):
        ms = rc.build_system(couplings, ENSEMBLE.kappa, step)
        ev = rc.eigenvalue_report(ms)
        # two exact zeros from the decoupled mode, the rest strictly stable
        n_zero = int(np.sum(np.abs(ev) <= 1e-8))
        assert n_zero == 2
        nonzero = ev[np.abs(ev) > 1e-8]
        assert np.all(nonzero.real < 0)


def test_squeezed_target_pure(couplings):
    target = rc.squeezed_target(couplings)
    nus = g.symplectic_eigenvalues(target)
    assert np.abs(nus - 0.5).max() <= 1e-10


def test_squeezed_target_vacuum_when_unsqueezed():
    ec = rc.EffectiveCouplings(beta_u=1.0 + 0j, beta_s=0.0 + 0j)
    target = rc.squeezed_target(ec)
    assert np.abs(target - g.vacuum_covariance(5)).max() <= 1e-14


def test_target_sideband_entanglement(couplings):
    # the (C2, C-2) reduced state is a TMSV with E_N = 2 xi1
    xi0, xi1 = rc.squeeze_parameters(couplings)
    target = rc.squeezed_target(couplings)
    idx = [6, 7, 8, 9]
    reduced = target[np.ix_(idx, idx)]
    res = g.ppt_negativity(reduced)
    assert abs(res.log_negativity - 2 * xi1) <= 1e-10


def test_protocol_reaches_target(couplings, protocol):
    target = rc.squeezed_target(couplings)
    assert np.abs(protocol.sigma[-1] - target).max() <= 1e-3


def test_protocol_final_purity(protocol):
    nus = g.symplectic_eigenvalues(protocol.sigma[-1])
    assert np.abs(nus - 0.5).max() <= 1e-3


def test_protocol_stays_physical(protocol):
    for idx in range(0, len(protocol.t), 20):
        nus = g.symplectic_eigenvalues(protocol.sigma[idx])
        assert nus.min() >= 0.5 - 1e-6


def test_step1_relaxes_four_modes(couplings, protocol):
    i1 = int(np.searchsorted(protocol.t, protocol.step_boundary))
    st = rc.to_squeezed_frame(protocol.sigma[i1], couplings)
    assert np.abs(st[:8, :8] - 0.5 * np.eye(8)).max() <= 1e-3


def test_cminus2_frozen_during_step1(couplings, protocol):
    i1 = int(np.searchsorted(protocol.t, protocol.step_boundary))
    ref = rc.to_squeezed_frame(protocol.sigma[0], couplings)[8:10, 8:10]
    for idx in range(i1 + 1):
        blk = rc.to_squeezed_frame(protocol.sigma[idx], couplings)[8:10, 8:10]
        assert np.abs(blk - ref).max() <= 1e-10


def test_monotone_convergence_envelope(couplings, protocol):
    # after the first 1/kappa of each step the peak distance to that step's
    # endpoint state decays monotonically (beta_eff > kappa/2); the envelope
    # is sampled over full mixer oscillation periods
    kappa = ENSEMBLE.kappa
    period = 2.0 * math.pi / rc.beta_effective(couplings)
    i1 = int(np.searchsorted(protocol.t, protocol.step_boundary))
    for lo, hi in ((0, i1), (i1, len(protocol.t) - 1)):
        ref = protocol.sigma[hi]
        t = protocol.t[lo:hi + 1] - protocol.t[lo]
        d = np.array([np.abs(s - ref).max() for s in protocol.sigma[lo:hi + 1]])
        keep = t >= 1.0 / kappa
        tk, dk = t[keep], d[keep]
        bins = np.floor((tk - tk[0]) / period).astype(int)
        peaks = np.array([dk[bins == b].max() for b in range(bins.max() + 1)])
        assert np.all(np.diff(peaks) <= 1e-9)


def test_exchange_symmetry(couplings):
    # swapping the drive order equals relabeling a+ <-> a-, C2 <-> C-2
    kappa = ENSEMBLE.kappa
    forward = rc.run_protocol_from_couplings(couplings, kappa, dt_out=20.0)
    acw = rc.build_system(couplings, kappa, "anticlockwise")
    cw = rc.build_system(couplings, kappa, "clockwise")
    grid = np.array([0.0, 20.0])
    s1 = rc._integrate_lyapunov(acw, g.vacuum_covariance(5), (0.0, 20.0), grid)
    s2 = rc._integrate_lyapunov(cw, s1[-1], (0.0, 20.0), grid)
    P = np.eye(10)
    for i, j in ((0, 1), (3, 4)):
        P[[2 * i, 2 * j]] = P[[2 * j, 2 * i]]
        P[[2 * i + 1, 2 * j + 1]] = P[[2 * j + 1, 2 * i + 1]]
    assert np.abs(P @ s2[-1] @ P.T - forward.sigma[-1]).max() <= 1e-10


def test_collective_overlap_identity():
    pos = rc.AtomPositions.random(100, 1.0, seed=0)
    assert rc.collective_overlap(pos, 2, 2) == 1.0


def test_collective_overlap_lattice_pathology():
    # atoms at x_j = j*pi/k make the m - m' = +/-2 phases all unity
    k = 1.0
    pos = rc.AtomPositions(x=tuple(j * math.pi / k for j in range(50)), k=k)
    assert abs(rc.collective_overlap(pos, 2, 0) - 1.0) <= 1e-12
    assert abs(rc.collective_overlap(pos, 0, -2) - 1.0) <= 1e-12


def test_collective_overlap_random_scaling():
    n = 10000
    bound = 5.0 / math.sqrt(n)
    hits = sum(
        abs(rc.collective_overlap(rc.AtomPositions.random(n, 1.0, seed=s), 0, 2)) <= bound
        for s in range(100)
    )
    assert hits >= 99


def test_collective_overlap_validation():
    pos = rc.AtomPositions.random(10, 1.0, seed=1)
    with pytest.raises(ValueError):
        rc.collective_overlap(pos, 1, 0)
    with pytest.raises(ValueError):
        rc.collective_overlap(rc.AtomPositions(x=(), k=1.0), 0, 2)
