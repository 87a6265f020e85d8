"""Shared fixtures: the bath coefficient tables are expensive to build
(~15 s of adaptive quadrature each), so they are session-scoped and the
standard figure trajectories are computed once and reused."""

import numpy as np
import pytest

from cvdyn import OscillatorPair, SpectralDensity, ThermalSpec
from cvdyn import oscillators as osc

SD = SpectralDensity(gamma0=0.1, Lambda=100.0)
TH = ThermalSpec(T=10.0)
PAIR_LAM0 = OscillatorPair(M=1.0, Omega=1.0, lam=0.0)
PAIR_LAM08 = OscillatorPair(M=1.0, Omega=1.0, lam=0.8)


@pytest.fixture(scope="session")
def table_lam0():
    return osc.make_bath_table(PAIR_LAM0, SD, TH)


@pytest.fixture(scope="session")
def table_lam08():
    return osc.make_bath_table(PAIR_LAM08, SD, TH)


@pytest.fixture(scope="session")
def fig2_runs(table_lam0):
    """r -> (trajectory to t=100, entanglement series) at lam=0."""
    out = {}
    for r in (1.0, 1.498, 2.0):
        traj = osc.integrate(
            PAIR_LAM0, table_lam0, osc.initial_squeezed_vector(r), 100.0, 0.01
        )
        out[r] = (traj, osc.entanglement_series(traj))
    return out


@pytest.fixture(scope="session")
def fig5_runs(table_lam08):
    """r -> (trajectory to t=50, entanglement series) at lam=0.8."""
    out = {}
    for r in (1.0, 2.0):
        traj = osc.integrate(
            PAIR_LAM08, table_lam08, osc.initial_squeezed_vector(r), 50.0, 0.01
        )
        out[r] = (traj, osc.entanglement_series(traj))
    return out
