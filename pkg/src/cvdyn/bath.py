"""Thermal reservoir model and time-dependent master-equation coefficients.

The reservoir is characterised by the spectral density

    J(w) = (2 gamma0 w M / pi) (w / Lambda)^(n-1) exp(-w^2 / Lambda^2),

with n = 1 the Ohmic case, and a temperature T entering through the mean
occupation number N(w) = 1 / (exp(w/T) - 1) (units hbar = k_B = 1).

From J and T the memory kernels

    nu(s)  = int_0^inf dw J(w) coth(w / 2T) cos(w s)      (noise)
    eta(s) = int_0^inf dw J(w) sin(w s)                   (dissipation)

are built, and from those the four second-order (weak-coupling, non-RWA)
coefficients of the reduced dynamics of an oscillator of frequency Omega2:

    freq_shift(t) = -(2/M)        int_0^t ds eta(s) cos(Omega2 s)
    gamma2(t)     = (1/(M Omega2)) int_0^t ds eta(s) sin(Omega2 s)
    D2(t)         =                int_0^t ds nu(s)  cos(Omega2 s)
    f2(t)         = -(1/(M Omega2)) int_0^t ds nu(s) sin(Omega2 s)

All four vanish at t = 0 and saturate once t exceeds the kernel memory time
(a few 1/Lambda).  In the Markov limit gamma2 -> gamma0 (Ohmic, broadband)
and D2 -> M Omega2 gamma0 (2 N(Omega2) + 1).

The bare freq_shift grows with the cutoff (~ -2 gamma0 Lambda / sqrt(pi) for
Ohmic); stable dynamics require the standard static counterterm
(2/M) int dw J(w)/w, exposed as `static_frequency_counterterm` and applied
by `BathCoefficientTable(include_counterterm=True)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicSpline

from .errors import NumericalError

_QUAD_EPSABS = 1e-12
_QUAD_EPSREL = 1e-8
_QUAD_LIMIT = 400
#: frequency integrals are truncated at this multiple of the cutoff
OMEGA_MAX_FACTOR = 6.0
#: kernel grid extends to this multiple of the memory time 1/Lambda
KERNEL_SPAN_FACTOR = 80.0


@dataclass(frozen=True)
class SpectralDensity:
    """Parameters of the reservoir spectral density.

    coupling_factor rescales J overall; the default 1 normalises the
    symmetric-mode coupling so that gamma2(inf) = gamma0 for a broadband
    Ohmic reservoir (set 2 to keep the raw sqrt(2)-enhanced coupling).
    """

    gamma0: float
    Lambda: float
    n: int = 1
    M: float = 1.0
    coupling_factor: float = 1.0

    def __post_init__(self):
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be > 0")
        if self.Lambda <= 0:
            raise ValueError("Lambda must be > 0")
        if self.n < 1:
            raise ValueError("reservoir exponent n must be >= 1")
        if self.M <= 0:
            raise ValueError("M must be > 0")


@dataclass(frozen=True)
class ThermalSpec:
    """Reservoir temperature in units hbar*Omega/k_B; T = 0 means coth -> 1."""

    T: float

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class BathCoefficients:
    """The four master-equation coefficients evaluated at one time."""

    t: float
    freq_shift: float
    gamma2: float
    D2: float
    f2: float


def spectral_density(sd: SpectralDensity, omega) -> np.ndarray:
    """Evaluate J(omega); omega may be a scalar or array, all entries >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be >= 0")
    J = (
        sd.coupling_factor
        * (2.0 * sd.gamma0 * omega * sd.M / math.pi)
        * (omega / sd.Lambda) ** (sd.n - 1)
        * np.exp(-((omega / sd.Lambda) ** 2))
    )
    return J if J.ndim else float(J)


def mean_occupation(th: ThermalSpec, omega: float) -> float:
    """Bose-Einstein occupation 1/(exp(omega/T) - 1); 0 in the T -> 0 limit."""
    if omega <= 0:
        raise ValueError("omega must be > 0")
    if th.T == 0:
        return 0.0
    return 1.0 / math.expm1(omega / th.T)


def _omega_coth(omega: np.ndarray, T: float) -> np.ndarray:
    """omega * coth(omega / 2T), finite at omega = 0 (-> 2T)."""
    if T == 0:
        return omega
    x = omega / (2.0 * T)
    out = np.empty_like(omega)
    small = x < 1e-8
    out[small] = 2.0 * T
    out[~small] = omega[~small] / np.tanh(x[~small])
    return out


def _noise_integrand(sd: SpectralDensity, T: float):
    """J(w) coth(w/2T) written as (J(w)/w) * (w coth(w/2T)), regular at 0."""

    def f(omega):
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        j_over_w = (
            sd.coupling_factor
            * (2.0 * sd.gamma0 * sd.M / math.pi)
            * (omega / sd.Lambda) ** (sd.n - 1)
            * np.exp(-((omega / sd.Lambda) ** 2))
        )
        return j_over_w * _omega_coth(omega, T)

    return f


def _checked_quad(f, a, b, scale, **kwargs):
    val, abserr = quad(
        f, a, b, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=_QUAD_LIMIT, **kwargs
    )
    if abserr > 1e-6 * max(abs(val), scale):
        raise NumericalError(
            f"kernel quadrature did not converge (value {val:g}, abserr {abserr:g})"
        )
    return val


def _kernel_scale(sd: SpectralDensity) -> float:
    # integral of J, the natural magnitude against which abserr is judged
    return (
        sd.coupling_factor
        * sd.gamma0
        * sd.M
        * sd.Lambda**2
        / math.pi
        * math.gamma((sd.n + 1) / 2.0)
    )


def noise_kernel(sd: SpectralDensity, th: ThermalSpec, s: float) -> float:
    """Noise kernel nu(s) = int_0^inf dw J(w) coth(w/2T) cos(w s)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    f = _noise_integrand(sd, th.T)
    wmax = OMEGA_MAX_FACTOR * sd.Lambda
    scale = _kernel_scale(sd) * max(1.0, 2.0 * th.T)
    if s == 0.0:
        return _checked_quad(lambda w: float(f(w)[0]), 0.0, wmax, scale)
    return _checked_quad(lambda w: float(f(w)[0]), 0.0, wmax, scale, weight="cos", wvar=s)


def dissipation_kernel(sd: SpectralDensity, s: float) -> float:
    """Dissipation kernel eta(s) = int_0^inf dw J(w) sin(w s)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0.0:
        return 0.0
    wmax = OMEGA_MAX_FACTOR * sd.Lambda
    scale = _kernel_scale(sd)
    return _checked_quad(
        lambda w: spectral_density(sd, w), 0.0, wmax, scale, weight="sin", wvar=s
    )


def static_frequency_counterterm(sd: SpectralDensity) -> float:
    """Counterterm (2/M) int_0^inf dw J(w)/w cancelling the static shift."""
    wmax = OMEGA_MAX_FACTOR * sd.Lambda

    def f(omega):
        return (
            sd.coupling_factor
            * (2.0 * sd.gamma0 * sd.M / math.pi)
            * (omega / sd.Lambda) ** (sd.n - 1)
            * math.exp(-((omega / sd.Lambda) ** 2))
        )

    val = _checked_quad(f, 0.0, wmax, _kernel_scale(sd) / sd.Lambda)
    return 2.0 / sd.M * val


class BathCoefficientTable:
    """Pre-tabulated coefficients for one (spectral density, T, Omega2) triple.

    Kernels are evaluated by adaptive quadrature on a uniform grid of step
    min(1/(20 Lambda), 1/(20 Omega2)) out to the memory span, the four time
    integrals accumulated by Simpson's rule and interpolated with cubic
    splines; beyond the span the coefficients are constant at their
    asymptotic values.
    """

    def __init__(
        self,
        sd: SpectralDensity,
        th: ThermalSpec,
        Omega2: float,
        include_counterterm: bool = False,
    ):
        if Omega2 <= 0:
            raise ValueError("Omega2 must be > 0")
        self.sd = sd
        self.th = th
        self.Omega2 = float(Omega2)
        self.include_counterterm = include_counterterm
        self.counterterm = (
            static_frequency_counterterm(sd) if include_counterterm else 0.0
        )

        step = min(1.0 / (20.0 * sd.Lambda), 1.0 / (20.0 * Omega2))
        self.s_max = KERNEL_SPAN_FACTOR / sd.Lambda
        n_pts = int(math.ceil(self.s_max / step)) + 1
        grid = np.linspace(0.0, self.s_max, n_pts)

        nu = np.array([noise_kernel(sd, th, s) for s in grid])
        eta = np.array([dissipation_kernel(sd, s) for s in grid])
        cos_w = np.cos(Omega2 * grid)
        sin_w = np.sin(Omega2 * grid)
        M = sd.M

        def cumint(y):
            return cumulative_simpson(y, x=grid, initial=0.0)

        self._grid = grid
        self._splines = {
            "freq_shift": CubicSpline(grid, -(2.0 / M) * cumint(eta * cos_w)),
            "gamma2": CubicSpline(grid, cumint(eta * sin_w) / (M * Omega2)),
            "D2": CubicSpline(grid, cumint(nu * cos_w)),
            "f2": CubicSpline(grid, -cumint(nu * sin_w) / (M * Omega2)),
        }
        self._asymptotic = {k: float(sp(self.s_max)) for k, sp in self._splines.items()}

    def at(self, t: float) -> BathCoefficients:
        if t < 0:
            raise ValueError("t must be >= 0")
        if t >= self.s_max:
            vals = dict(self._asymptotic)
        else:
            vals = {k: float(sp(t)) for k, sp in self._splines.items()}
        vals["freq_shift"] += self.counterterm
        return BathCoefficients(t=float(t), **vals)

    def asymptotic(self) -> BathCoefficients:
        """Markov-limit (t -> infinity) coefficients."""
        vals = dict(self._asymptotic)
        vals["freq_shift"] += self.counterterm
        return BathCoefficients(t=math.inf, **vals)


_TABLE_CACHE: dict = {}


def coefficient_table(sd, th, Omega2, include_counterterm=False) -> BathCoefficientTable:
    """Cached BathCoefficientTable for repeated use with the same parameters."""
    key = (sd, th, float(Omega2), include_counterterm)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = BathCoefficientTable(sd, th, Omega2, include_counterterm)
    return _TABLE_CACHE[key]


def coefficients_at(
    sd: SpectralDensity, th: ThermalSpec, Omega2: float, t: float
) -> BathCoefficients:
    """Second-order coefficients at time t (bare forms, all zero at t = 0)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return coefficient_table(sd, th, Omega2).at(t)


def markov_coefficients(
    sd: SpectralDensity, th: ThermalSpec, Omega2: float
) -> BathCoefficients:
    """Asymptotic (t -> infinity) coefficients used by the threshold analysis.

    Meaningful for a broadband reservoir; a warning-worthy regime
    Lambda <= 10 Omega2 is reported via `warnings`.
    """
    if sd.Lambda <= 10.0 * Omega2:
        import warnings

        warnings.warn(
            "Markov coefficients requested with Lambda <= 10*Omega2; "
            "the asymptotic values are strongly cutoff-dependent",
            stacklevel=2,
        )
    return coefficient_table(sd, th, Omega2).asymptotic()
