"""Five-mode Gaussian simulation of the two-step ring-cavity protocol.

Mode order is fixed as (a+, a-, C0, C2, C-2): the clockwise and
anti-clockwise cavity modes followed by the three collective atomic modes.
Driving lasers co-propagating with one cavity mode produce the bilinear
Hamiltonian (clockwise step)

    H = (beta_u C0 + beta_s C0^dag) a+^dag + (beta_u C2 + beta_s C-2^dag) a-^dag + H.c.

(anti-clockwise: a+ <-> a- and C2 <-> C-2).  With cavity decay kappa this
drives the system, viewed in the squeeze-rotated frame, to vacuum; two
steps with opposite propagation leave the lab-frame state in the pure
multi-mode squeezed target S0(xi0) Spm(xi1) |0>, with

    xi0 = xi1 = (1/2) ln((|beta_u| + |beta_s|) / (|beta_u| - |beta_s|)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .gaussian import SqueezeSpec, squeeze_symplectic, vacuum_covariance
from .errors import NumericalError, UnstableSystemError

N_MODES = 5
MODE_LABELS = ("a+", "a-", "C0", "C2", "C-2")
_IDX_APLUS, _IDX_AMINUS, _IDX_C0, _IDX_C2, _IDX_CM2 = range(N_MODES)

_RTOL = 1e-9
_ATOL = 1e-12


@dataclass(frozen=True)
class EnsembleParams:
    """Physical parameters of the driven atomic ensemble in the ring cavity."""

    N_atoms: int
    g_u: float
    g_s: float
    Delta_u: float
    Delta_s: float
    Omega_u: float
    Omega_s: float
    kappa: float
    phi_u: float = 0.0
    phi_s: float = 0.0
    gamma_u: float = 0.0
    gamma_s: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self):
        if self.N_atoms < 1:
            raise ValueError("N_atoms must be >= 1")
        if self.kappa <= 0:
            raise ValueError("kappa must be > 0")
        if self.Delta_u == 0 or self.Delta_s == 0:
            raise ValueError("detunings must be nonzero")


@dataclass(frozen=True)
class EffectiveCouplings:
    beta_u: complex
    beta_s: complex


def effective_couplings(p: EnsembleParams) -> EffectiveCouplings:
    """Raman coupling strengths beta = sqrt(N) Omega g exp(-i phi) / (2 Delta)."""
    root_n = math.sqrt(p.N_atoms)
    return EffectiveCouplings(
        beta_u=root_n * p.Omega_u * p.g_u * cmath.exp(-1j * p.phi_u) / (2.0 * p.Delta_u),
        beta_s=root_n * p.Omega_s * p.g_s * cmath.exp(-1j * p.phi_s) / (2.0 * p.Delta_s),
    )


def validity_check(p: EnsembleParams) -> list:
    """Warnings for parameter regimes outside the dispersive/balanced assumptions."""
    warnings = []
    fast = max(p.g_u, p.g_s, p.Omega_u, p.Omega_s, p.gamma_u, p.gamma_s)
    for name, delta in (("Delta_u", p.Delta_u), ("Delta_s", p.Delta_s)):
        if abs(delta) < 10.0 * fast:
            warnings.append(
                f"adiabaticity: |{name}| < 10x the largest coupling/Rabi/decay rate"
            )
    stark_u = p.g_u**2 / p.Delta_u
    stark_s = p.g_s**2 / p.Delta_s
    denom = max(abs(stark_u), abs(stark_s), 1e-300)
    if abs(stark_u - stark_s) > 1e-6 * denom:
        warnings.append("Stark balance: g_u^2/Delta_u != g_s^2/Delta_s")
    residual = p.delta_c + 0.5 * p.N_atoms * (stark_u + stark_s)
    if abs(residual) > 1e-6 * p.kappa:
        warnings.append(
            "cavity tuning: delta_c + (N/2)(g_u^2/Delta_u + g_s^2/Delta_s) != 0"
        )
    return warnings


def squeeze_parameters(ec: EffectiveCouplings) -> tuple:
    """Protocol squeeze parameters; requires |beta_u| > |beta_s|."""
    bu, bs = abs(ec.beta_u), abs(ec.beta_s)
    if bu <= 0 or bs / bu > 1.0 - 1e-9:
        raise UnstableSystemError(
            "squeeze transformation requires |beta_u| > |beta_s|"
        )
    xi = 0.5 * math.log((bu + bs) / (bu - bs))
    return xi, xi


def beta_effective(ec: EffectiveCouplings) -> float:
    """Mixing rate sqrt(|beta_u|^2 - |beta_s|^2) of the transformed Hamiltonian."""
    bu, bs = abs(ec.beta_u), abs(ec.beta_s)
    if bu <= bs:
        raise UnstableSystemError("requires |beta_u| > |beta_s|")
    return math.sqrt(bu**2 - bs**2)


def _quadrature_drift(A: np.ndarray, B: np.ndarray, kappa_diag: np.ndarray) -> np.ndarray:
    """Real drift on (q1, p1, ..., qN, pN) for H = A_ij a_i^dag a_j + (B/2) a^dag a^dag + H.c.

    Built from the complex mode-operator drift in the (a, a^dag) basis and
    conjugated into quadratures.
    """
    n = A.shape[0]
    K = np.diag(kappa_diag) / 2.0
    M = np.block(
        [
            [-1j * A - K, -1j * B],
            [1j * B.conj(), 1j * A.conj() - K],
        ]
    )
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for k in range(n):
        T[2 * k, k] = inv_sqrt2
        T[2 * k, n + k] = inv_sqrt2
        T[2 * k + 1, k] = -1j * inv_sqrt2
        T[2 * k + 1, n + k] = 1j * inv_sqrt2
    Ax = T @ M @ np.linalg.inv(T)
    if np.abs(Ax.imag).max() > 1e-12:
        raise NumericalError("quadrature drift came out non-real")
    return Ax.real


@dataclass
class ModeSystem:
    """Drift/diffusion description of the five-mode Gaussian dynamics."""

    drift: np.ndarray  # 10x10
    diffusion: np.ndarray  # 10x10
    first_moments: np.ndarray  # 10-vector
    step: str
    labels: tuple = MODE_LABELS


def build_system(
    ec: EffectiveCouplings, kappa: float, step: str = "clockwise"
) -> ModeSystem:
    """Lab-frame drift and diffusion for one protocol step.

    Cavity decay is to a zero-temperature bath: each cavity quadrature gets
    -kappa/2 on the drift diagonal and kappa/2 on the diffusion diagonal;
    the collective modes are undamped.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    if step not in ("clockwise", "anticlockwise"):
        raise ValueError(f"unknown step {step!r}")

    A = np.zeros((N_MODES, N_MODES), dtype=complex)
    B = np.zeros((N_MODES, N_MODES), dtype=complex)
    bu, bs = ec.beta_u, ec.beta_s
    if step == "clockwise":
        # (bu C0 + bs C0^dag) a+^dag + (bu C2 + bs C-2^dag) a-^dag + H.c.
        A[_IDX_APLUS, _IDX_C0] = bu
        A[_IDX_C0, _IDX_APLUS] = np.conj(bu)
        B[_IDX_APLUS, _IDX_C0] = B[_IDX_C0, _IDX_APLUS] = bs
        A[_IDX_AMINUS, _IDX_C2] = bu
        A[_IDX_C2, _IDX_AMINUS] = np.conj(bu)
        B[_IDX_AMINUS, _IDX_CM2] = B[_IDX_CM2, _IDX_AMINUS] = bs
    else:
        A[_IDX_AMINUS, _IDX_C0] = bu
        A[_IDX_C0, _IDX_AMINUS] = np.conj(bu)
        B[_IDX_AMINUS, _IDX_C0] = B[_IDX_C0, _IDX_AMINUS] = bs
        A[_IDX_APLUS, _IDX_CM2] = bu
        A[_IDX_CM2, _IDX_APLUS] = np.conj(bu)
        B[_IDX_APLUS, _IDX_C2] = B[_IDX_C2, _IDX_APLUS] = bs

    kappa_diag = np.zeros(N_MODES)
    kappa_diag[_IDX_APLUS] = kappa_diag[_IDX_AMINUS] = kappa
    drift = _quadrature_drift(A, B, kappa_diag)

    diffusion = np.zeros((2 * N_MODES, 2 * N_MODES))
    for k in (_IDX_APLUS, _IDX_AMINUS):
        diffusion[2 * k, 2 * k] = kappa / 2.0
        diffusion[2 * k + 1, 2 * k + 1] = kappa / 2.0

    return ModeSystem(
        drift=drift,
        diffusion=diffusion,
        first_moments=np.zeros(2 * N_MODES),
        step=step,
    )


def eigenvalue_report(ms: ModeSystem) -> np.ndarray:
    """Drift eigenvalues sorted by real part (ascending, most stable first)."""
    try:
        ev = np.linalg.eigvals(ms.drift)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError("drift eigen-solve failed") from exc
    return ev[np.argsort(ev.real)]


def protocol_squeeze_symplectic(ec: EffectiveCouplings) -> np.ndarray:
    """Quadrature matrix of S0(xi0) on C0 and Spm(xi1) on (C2, C-2)."""
    xi0, xi1 = squeeze_parameters(ec)
    spec = SqueezeSpec(
        single_mode=((_IDX_C0, xi0),),
        two_mode=(((_IDX_C2, _IDX_CM2), xi1),),
    )
    return squeeze_symplectic(spec, N_MODES)


def squeezed_target(ec: EffectiveCouplings) -> np.ndarray:
    """Covariance of the protocol's final pure state S sigma_vac S^T."""
    S = protocol_squeeze_symplectic(ec)
    return S @ vacuum_covariance(N_MODES) @ S.T


def to_squeezed_frame(sigma: np.ndarray, ec: EffectiveCouplings) -> np.ndarray:
    """View a lab-frame covariance in the squeeze-rotated frame.

    In this frame the clockwise-step drift decouples C-2 exactly, so its
    2x2 block stays frozen during step 1 and the remaining modes relax to
    vacuum.
    """
    S_inv = np.linalg.inv(protocol_squeeze_symplectic(ec))
    return S_inv @ sigma @ S_inv.T


@dataclass
class ProtocolTrajectory:
    """Sampled lab-frame covariance along the two-step preparation."""

    t: np.ndarray  # (n,)
    sigma: np.ndarray  # (n, 10, 10)
    step_boundary: float  # time at which the drive direction flips


def _integrate_lyapunov(ms: ModeSystem, sigma0, t_span, t_eval) -> np.ndarray:
    A, D = ms.drift, ms.diffusion

    def rhs(t, y):
        s = y.reshape(2 * N_MODES, 2 * N_MODES)
        ds = A @ s + s @ A.T + D
        return ds.ravel()

    sol = solve_ivp(
        rhs, t_span, np.asarray(sigma0).ravel(), method="RK45",
        t_eval=t_eval, rtol=_RTOL, atol=_ATOL,
    )
    if not sol.success:
        raise NumericalError(f"Lyapunov integration failed: {sol.message}")
    out = sol.y.T.reshape(-1, 2 * N_MODES, 2 * N_MODES)
    return 0.5 * (out + np.transpose(out, (0, 2, 1)))


def run_protocol(
    p: EnsembleParams,
    tau1: float | None = None,
    tau2: float | None = None,
    dt_out: float = 0.05,
) -> ProtocolTrajectory:
    """Run both preparation steps from vacuum and sample the lab covariance.

    Step durations default to 20/kappa, comfortably beyond the ~2/kappa
    relaxation scale of the transformed linear mixers.
    """
    ec = effective_couplings(p)
    return run_protocol_from_couplings(ec, p.kappa, tau1, tau2, dt_out)


def run_protocol_from_couplings(
    ec: EffectiveCouplings,
    kappa: float,
    tau1: float | None = None,
    tau2: float | None = None,
    dt_out: float = 0.05,
) -> ProtocolTrajectory:
    if tau1 is None:
        tau1 = 20.0 / kappa
    if tau2 is None:
        tau2 = 20.0 / kappa
    if tau1 <= 0 or tau2 <= 0:
        raise ValueError("step durations must be > 0")

    sigma0 = vacuum_covariance(N_MODES)

    t1 = np.arange(0.0, tau1 + 0.5 * dt_out, dt_out)
    t1 = t1[t1 <= tau1 + 1e-12]
    if t1[-1] < tau1 - 1e-12:
        t1 = np.append(t1, tau1)
    cw = build_system(ec, kappa, "clockwise")
    seg1 = _integrate_lyapunov(cw, sigma0, (0.0, tau1), t1)

    t2 = np.arange(0.0, tau2 + 0.5 * dt_out, dt_out)
    t2 = t2[t2 <= tau2 + 1e-12]
    if t2[-1] < tau2 - 1e-12:
        t2 = np.append(t2, tau2)
    acw = build_system(ec, kappa, "anticlockwise")
    seg2 = _integrate_lyapunov(acw, seg1[-1], (0.0, tau2), t2)

    t = np.concatenate([t1, tau1 + t2[1:]])
    sigma = np.concatenate([seg1, seg2[1:]], axis=0)
    return ProtocolTrajectory(t=t, sigma=sigma, step_boundary=tau1)


@dataclass(frozen=True)
class AtomPositions:
    """Trap positions of the ensemble atoms and the cavity wave number."""

    x: tuple
    k: float

    @staticmethod
    def random(n_atoms: int, k: float, span_wavelengths: float = 1000.0, seed=None):
        rng = np.random.default_rng(seed)
        span = span_wavelengths * 2.0 * math.pi / k
        return AtomPositions(x=tuple(rng.uniform(0.0, span, n_atoms)), k=k)


def collective_overlap(pos: AtomPositions, m: int, m_prime: int) -> complex:
    """Finite-N overlap (1/N) sum_j exp(i (m - m') k x_j) of collective modes.

    Equals 1 for m == m'; for distinct sideband indices it measures the
    deviation of [C_m, C_m'^dag] from zero, vanishing as 1/sqrt(N) for
    uniformly random positions but returning to 1 on a lattice commensurate
    with the phase difference.
    """
    if m not in (0, 2, -2) or m_prime not in (0, 2, -2):
        raise ValueError("mode indices must be in {0, +2, -2}")
    if not pos.x:
        raise ValueError("positions must be nonempty")
    x = np.asarray(pos.x)
    phases = np.exp(1j * (m - m_prime) * pos.k * x)
    return complex(phases.mean())
