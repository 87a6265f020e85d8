"""Dynamics of two coupled oscillators in a thermal reservoir.

In the transformed (antisymmetric/symmetric) basis the pair becomes two
independent oscillators with frequencies

    Omega_F = sqrt(Omega^2 - lambda/M)   (free, never touches the bath)
    Omega_2 = sqrt(Omega^2 + lambda/M)   (damped, carries all bath coupling)

and the ten independent covariance elements, packed in the order

    v = (V11, V12, V22, V13, V14, V23, V24, V33, V34, V44)

with indices referring to X = (q~1, p~1, q~2, p~2), obey a linear ODE
dv/dt = A(t) v + F(t) whose drift is block diagonal: a free 3x3 block, a
4x4 cross-correlation block and a damped 3x3 block driven by the
inhomogeneity F = (0, ..., 0, -f2, 2*D2).

The free block conserves V11_plus = M Omega_F^2 V11 + V22 / M and rotates
(V11_minus, V12) at angular frequency 2 Omega_F; `closed_form_free` solves
it exactly and serves as the integration oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import bath as bath_mod
from . import gaussian
from .bath import BathCoefficients, BathCoefficientTable, SpectralDensity, ThermalSpec
from .errors import NumericalError, UnstableSystemError

_RTOL = 1e-9
_ATOL = 1e-12

#: index map from packed-vector slots to (row, col) of the 4x4 matrix
VECTOR_INDEX = ((0, 0), (0, 1), (1, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))


@dataclass(frozen=True)
class OscillatorPair:
    """Two identical oscillators of mass M, frequency Omega, coupling lam."""

    M: float = 1.0
    Omega: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError("M must be > 0")
        if self.Omega <= 0:
            raise ValueError("Omega must be > 0")


@dataclass(frozen=True)
class TransformedFrequencies:
    Omega_F: float
    Omega_2: float


def transformed_frequencies(pair: OscillatorPair) -> TransformedFrequencies:
    """Frequencies of the decoupled oscillators; errors if lam >= M*Omega^2."""
    shift = pair.lam / pair.M
    if pair.Omega**2 - shift <= 0:
        raise UnstableSystemError(
            "coupling lambda >= M*Omega^2 makes the free-mode frequency imaginary"
        )
    return TransformedFrequencies(
        Omega_F=math.sqrt(pair.Omega**2 - shift),
        Omega_2=math.sqrt(pair.Omega**2 + shift),
    )


def vector_to_matrix(v) -> np.ndarray:
    """Unpack the 10-element covariance vector into a symmetric 4x4 matrix."""
    v = np.asarray(v, dtype=float)
    V = np.zeros((4, 4))
    for val, (i, j) in zip(v, VECTOR_INDEX):
        V[i, j] = val
        V[j, i] = val
    return V


def matrix_to_vector(V) -> np.ndarray:
    """Pack a symmetric 4x4 covariance matrix into the ordered 10-vector."""
    V = np.asarray(V, dtype=float)
    return np.array([V[i, j] for i, j in VECTOR_INDEX])


def initial_squeezed_vector(r: float) -> np.ndarray:
    """Transformed-basis covariance vector of the initial two-mode squeezed state.

    Diagonal (e^-2r, e^2r, e^2r, e^-2r)/2 in (q~1, p~1, q~2, p~2); all
    off-diagonal elements vanish.
    """
    v = np.zeros(10)
    v[0] = math.exp(-2.0 * r) / 2.0  # V11
    v[2] = math.exp(2.0 * r) / 2.0  # V22
    v[7] = math.exp(2.0 * r) / 2.0  # V33
    v[9] = math.exp(-2.0 * r) / 2.0  # V44
    return v


@dataclass
class BlockDrift:
    """Block-diagonal drift of the packed covariance vector."""

    A1: np.ndarray  # 3x3, free block (V11, V12, V22)
    A2: np.ndarray  # 4x4, cross block (V13, V14, V23, V24)
    A3: np.ndarray  # 3x3, damped block (V33, V34, V44)
    F: np.ndarray  # 10-vector inhomogeneity

    def full_matrix(self) -> np.ndarray:
        A = np.zeros((10, 10))
        A[0:3, 0:3] = self.A1
        A[3:7, 3:7] = self.A2
        A[7:10, 7:10] = self.A3
        return A


def assemble_drift(pair: OscillatorPair, coeffs: BathCoefficients | None) -> BlockDrift:
    """Drift blocks for the packed vector given bath coefficients (None = bath off)."""
    freqs = transformed_frequencies(pair)
    M = pair.M
    wF2 = freqs.Omega_F**2
    if coeffs is None:
        w22 = freqs.Omega_2**2
        g2 = d2 = f2 = 0.0
    else:
        w22 = freqs.Omega_2**2 + coeffs.freq_shift
        g2, d2, f2 = coeffs.gamma2, coeffs.D2, coeffs.f2

    A1 = np.array(
        [
            [0.0, 2.0 / M, 0.0],
            [-M * wF2, 0.0, 1.0 / M],
            [0.0, -2.0 * M * wF2, 0.0],
        ]
    )
    A3 = np.array(
        [
            [0.0, 2.0 / M, 0.0],
            [-M * w22, -2.0 * g2, 1.0 / M],
            [0.0, -2.0 * M * w22, -4.0 * g2],
        ]
    )
    # cross correlations (V13, V14, V23, V24): each index follows its own mode
    A2 = np.array(
        [
            [0.0, 1.0 / M, 1.0 / M, 0.0],
            [-M * w22, -2.0 * g2, 0.0, 1.0 / M],
            [-M * wF2, 0.0, 0.0, 1.0 / M],
            [0.0, -M * wF2, -M * w22, -2.0 * g2],
        ]
    )
    F = np.zeros(10)
    F[8] = -f2
    F[9] = 2.0 * d2
    return BlockDrift(A1=A1, A2=A2, A3=A3, F=F)


def v_plus(pair: OscillatorPair, V11: float, V22: float) -> float:
    """Constant of motion M*Omega_F^2*V11 + V22/M of the free block."""
    wF = transformed_frequencies(pair).Omega_F
    return pair.M * wF**2 * V11 + V22 / pair.M


def closed_form_free(V11_0, V12_0, V22_0, Omega_F, M, t):
    """Exact solution of the free 3x3 block; t may be a scalar or array.

    V_plus is conserved while (V_minus, V12) rotate at angular frequency
    2*Omega_F according to dV_minus/dt = 4 Omega_F^2 V12, dV12/dt = -V_minus.
    """
    if Omega_F <= 0:
        raise ValueError("Omega_F must be > 0")
    t = np.asarray(t, dtype=float)
    c, s = np.cos(Omega_F * t), np.sin(Omega_F * t)
    c2, s2 = c * c - s * s, 2.0 * c * s  # double angle
    vm0 = M * Omega_F**2 * V11_0 - V22_0 / M
    V11 = V11_0 * c * c + V22_0 / (M * Omega_F) ** 2 * s * s + V12_0 / (M * Omega_F) * s2
    V22 = V22_0 * c * c + (M * Omega_F) ** 2 * V11_0 * s * s - M * Omega_F * V12_0 * s2
    V12 = V12_0 * c2 - vm0 / (2.0 * Omega_F) * s2
    return V11, V12, V22


@dataclass
class Trajectory:
    """Sampled covariance-vector trajectory in the transformed basis."""

    t: np.ndarray  # (n,)
    v: np.ndarray  # (n, 10)

    def matrix_at(self, idx: int) -> np.ndarray:
        return vector_to_matrix(self.v[idx])


def make_bath_table(
    pair: OscillatorPair,
    sd: SpectralDensity,
    th: ThermalSpec,
    renormalize_frequency: bool = True,
) -> BathCoefficientTable:
    """Coefficient table for the damped transformed mode of `pair`.

    renormalize_frequency adds the static counterterm so the long-time
    effective frequency stays at Omega_2 (required for stable dynamics with
    a broadband cutoff).
    """
    Omega2 = transformed_frequencies(pair).Omega_2
    return bath_mod.coefficient_table(
        sd, th, Omega2, include_counterterm=renormalize_frequency
    )


def integrate(
    pair: OscillatorPair,
    bath,
    v0,
    t_end: float,
    dt_out: float,
    markov: bool = False,
    rtol: float = _RTOL,
    atol: float = _ATOL,
) -> Trajectory:
    """Integrate the covariance ODE from v0 and sample every dt_out.

    `bath` is None (bath off), a BathCoefficientTable, or a constant
    BathCoefficients record.  markov=True freezes a table at its asymptotic
    values.  Uses adaptive RK45 at rtol 1e-9 / atol 1e-12 by default.
    """
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (10,):
        raise ValueError("v0 must be a 10-element covariance vector")

    t_eval = np.arange(0.0, t_end + 0.5 * dt_out, dt_out)
    t_eval = t_eval[t_eval <= t_end + 1e-12]

    if bath is None:
        drift = assemble_drift(pair, None)
        A = drift.full_matrix()
        F = drift.F

        def rhs(t, v):
            return A @ v + F

    elif isinstance(bath, BathCoefficients):
        drift = assemble_drift(pair, bath)
        A = drift.full_matrix()
        F = drift.F

        def rhs(t, v):
            return A @ v + F

    elif isinstance(bath, BathCoefficientTable):
        if markov:
            return integrate(pair, bath.asymptotic(), v0, t_end, dt_out,
                             rtol=rtol, atol=atol)
        asym_drift = assemble_drift(pair, bath.asymptotic())
        A_inf = asym_drift.full_matrix()
        F_inf = asym_drift.F
        s_max = bath.s_max

        def rhs(t, v):
            if t >= s_max:
                return A_inf @ v + F_inf
            drift = assemble_drift(pair, bath.at(t))
            return drift.full_matrix() @ v + drift.F

    else:
        raise TypeError(f"unsupported bath argument {type(bath).__name__}")

    sol = solve_ivp(
        rhs, (0.0, t_end), v0, method="RK45", t_eval=t_eval, rtol=rtol, atol=atol
    )
    if not sol.success:
        raise NumericalError(f"covariance integration failed: {sol.message}")

    traj = Trajectory(t=sol.t, v=sol.y.T.copy())

    if bath is None:
        # closed dynamics must stay physical; check a handful of samples
        for idx in np.linspace(0, len(traj.t) - 1, 5).astype(int):
            nus = gaussian.symplectic_eigenvalues(traj.matrix_at(idx))
            if nus.min() < 0.5 - 1e-6:
                raise NumericalError(
                    "bath-off integration produced an unphysical covariance"
                )
    return traj


@dataclass
class EntanglementSeries:
    t: np.ndarray
    nu_tilde_minus: np.ndarray
    log_negativity: np.ndarray


def entanglement_series(traj: Trajectory) -> EntanglementSeries:
    """Per-snapshot entanglement between the bare oscillators.

    Each transformed-basis snapshot is rotated back to the bare basis and
    run through the partial-transpose test; physicality is not enforced
    (early-time transients of the second-order dynamics may dip marginally
    below the vacuum floor).
    """
    nu = np.empty(len(traj.t))
    en = np.empty(len(traj.t))
    for i in range(len(traj.t)):
        bare = gaussian.plus_minus_transform(traj.matrix_at(i), "inverse")
        res = gaussian.ppt_negativity(bare, check_physical=False)
        nu[i] = res.nu_tilde_minus
        en[i] = res.log_negativity
    return EntanglementSeries(t=traj.t.copy(), nu_tilde_minus=nu, log_negativity=en)


def threshold_r(T: float, Omega_2: float = 1.0) -> float:
    """Squeezing threshold (1/2) ln(2 N(Omega_2) + 1) for continuous entanglement."""
    if T < 0:
        raise ValueError("temperature must be >= 0")
    if T == 0:
        return 0.0
    nbar = bath_mod.mean_occupation(ThermalSpec(T), Omega_2)
    return 0.5 * math.log(2.0 * nbar + 1.0)


def sudden_death_report(series: EntanglementSeries) -> list:
    """Intervals (death_time, revival_time) where the log-negativity is zero.

    Crossing times are linearly interpolated; a final open-ended dead
    interval is reported with revival_time = inf.
    """
    t = series.t
    en = series.log_negativity
    dead = en <= 0.0
    intervals = []
    i = 0
    n = len(t)
    while i < n:
        if not dead[i]:
            i += 1
            continue
        # death time: interpolate the preceding positive-to-zero crossing
        if i == 0:
            death = float(t[0])
        else:
            e0, e1 = en[i - 1], en[i]
            death = float(t[i - 1] + (t[i] - t[i - 1]) * e0 / (e0 - e1))
        j = i
        while j < n and dead[j]:
            j += 1
        if j == n:
            intervals.append((death, math.inf))
        else:
            e0, e1 = en[j - 1], en[j]
            revival = float(t[j - 1] + (t[j] - t[j - 1]) * (0.0 - e0) / (e1 - e0))
            intervals.append((death, revival))
        i = j
    return intervals


def zero_crossing_frequency(t: np.ndarray, y: np.ndarray) -> float:
    """Angular frequency of an oscillatory signal from mean zero-crossing spacing."""
    y = y - np.mean(y)
    sign = np.sign(y)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(idx) < 3:
        raise ValueError("too few zero crossings to estimate a frequency")
    crossings = t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])
    half_period = np.mean(np.diff(crossings))
    return math.pi / half_period


def late_time_min_nu(
    pair: OscillatorPair,
    sd: SpectralDensity,
    th: ThermalSpec,
    r: float,
    t_end: float = 50.0,
    window: tuple = (40.0, 50.0),
    dt_out: float = 0.02,
) -> float:
    """Minimum PT symplectic eigenvalue over a late-time window, Markov dynamics."""
    table = make_bath_table(pair, sd, th)
    traj = integrate(pair, table, initial_squeezed_vector(r), t_end, dt_out, markov=True)
    mask = (traj.t >= window[0]) & (traj.t <= window[1])
    series = entanglement_series(Trajectory(t=traj.t[mask], v=traj.v[mask]))
    return float(series.nu_tilde_minus.min())


def threshold_bisection(
    pair: OscillatorPair,
    sd: SpectralDensity,
    th: ThermalSpec,
    r_lo: float = 0.5,
    r_hi: float = 2.5,
    tol: float = 0.005,
) -> float:
    """Numeric squeezing threshold: bisect r on late-time entanglement survival.

    Late-time (Markov) dynamics are entangled at the period minima iff the
    minimum PT symplectic eigenvalue drops below 1/2; the returned r is the
    crossing point.
    """
    def entangled(r):
        return late_time_min_nu(pair, sd, th, r) < 0.5

    if entangled(r_lo) or not entangled(r_hi):
        raise ValueError("bisection bracket does not straddle the threshold")
    while r_hi - r_lo > tol:
        mid = 0.5 * (r_lo + r_hi)
        if entangled(mid):
            r_hi = mid
        else:
            r_lo = mid
    return 0.5 * (r_lo + r_hi)
