"""Covariance-matrix algebra for Gaussian bosonic states.

Conventions used throughout the package: natural units with hbar = 1,
quadratures ordered as X = (q1, p1, q2, p2, ...), so the vacuum variance of
every quadrature is 1/2.  A zero-mean Gaussian state is fully specified by
the symmetric covariance matrix

    V_ij = <dX_i dX_j + dX_j dX_i> / 2 ,   dX_i = X_i - <X_i>.

A matrix is physical iff every symplectic eigenvalue is >= 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStateError, NumericalError

#: tolerance below 1/2 at which a symplectic eigenvalue counts as unphysical
PHYSICALITY_TOL = 1e-9
#: margin below 1/2 of the PT symplectic eigenvalue required to call a state entangled
ENTANGLEMENT_TOL = 1e-12
#: relative tolerance used when collapsing +/- eigenvalue pairs
_PAIR_RTOL = 1e-8


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with one [[0, 1], [-1, 0]] block per mode."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def vacuum_covariance(n_modes: int) -> np.ndarray:
    """Covariance matrix of the n-mode vacuum: diag(1/2, ..., 1/2)."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return 0.5 * np.eye(2 * n_modes)


def thermal_covariance(nbar: float) -> np.ndarray:
    """Single-mode thermal state with mean occupation nbar: diag((2*nbar+1)/2)."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    return (2.0 * nbar + 1.0) / 2.0 * np.eye(2)


def two_mode_squeezed_covariance(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum covariance in the bare (q1, p1, q2, p2) basis.

    Diagonal variances are cosh(2r)/2; the cross correlations are
    <q1 q2> = +sinh(2r)/2 and <p1 p2> = -sinh(2r)/2.  The signs are fixed so
    that the plus/minus transform of this state gives the antisymmetric-mode
    position variance exp(-2r)/2.
    """
    if not np.isfinite(r):
        raise ValueError("squeeze parameter must be finite")
    c = np.cosh(2.0 * r) / 2.0
    s = np.sinh(2.0 * r) / 2.0
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def plus_minus_matrix() -> np.ndarray:
    """Orthogonal symplectic matrix O of the two-mode +/- transform.

    Forward action X -> O X maps (q1, p1, q2, p2) to the antisymmetric and
    symmetric combinations (q1-q2, p1-p2, q1+q2, p1+p2)/sqrt(2).
    """
    s = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [s, 0.0, -s, 0.0],
            [0.0, s, 0.0, -s],
            [s, 0.0, s, 0.0],
            [0.0, s, 0.0, s],
        ]
    )


def plus_minus_transform(V: np.ndarray, direction: str = "forward") -> np.ndarray:
    """Apply the two-mode +/- basis change to a covariance matrix.

    direction="forward" maps bare-basis covariances to the transformed
    (antisymmetric, symmetric) basis; "inverse" undoes it.  The transform is
    orthogonal and symplectic, so symplectic eigenvalues are preserved.
    """
    V = np.asarray(V, dtype=float)
    if V.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance, got shape {V.shape}")
    O = plus_minus_matrix()
    if direction == "forward":
        return O @ V @ O.T
    if direction == "inverse":
        return O.T @ V @ O
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a symmetric covariance matrix, ascending.

    Computed as the absolute values of the eigenvalues of (Omega @ V),
    which come in +/- i*nu pairs; pairs are collapsed to N values.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError("covariance matrix must be square with even dimension")
    n = V.shape[0] // 2
    try:
        ev = np.linalg.eigvals(symplectic_form(n) @ V)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalError("eigen-solve for symplectic spectrum failed") from exc
    mags = np.sort(np.abs(ev)).reshape(n, 2)
    scale = max(float(mags.max()), 1.0)
    if np.any(mags[:, 1] - mags[:, 0] > _PAIR_RTOL * scale):
        raise NumericalError("symplectic eigenvalues did not pair up")
    return np.sort(mags.mean(axis=1))


def is_physical(V: np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    """True iff all symplectic eigenvalues are >= 1/2 - tol."""
    return bool(symplectic_eigenvalues(V).min() >= 0.5 - tol)


@dataclass(frozen=True)
class PPTResult:
    """Outcome of the partial-transpose entanglement test for two modes."""

    nu_tilde_minus: float
    log_negativity: float
    entangled: bool


def ppt_negativity(
    V: np.ndarray,
    check_physical: bool = True,
    tol: float = PHYSICALITY_TOL,
) -> PPTResult:
    """Partial-transpose entanglement test for a two-mode Gaussian state.

    The partial transpose flips the sign of p2; nu_tilde_minus is the
    smallest symplectic eigenvalue of the transposed matrix and the
    logarithmic negativity is max(0, -ln(2 nu_tilde_minus)).  The state is
    entangled iff nu_tilde_minus < 1/2.
    """
    V = np.asarray(V, dtype=float)
    if V.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance, got shape {V.shape}")
    if check_physical and not is_physical(V, tol=tol):
        raise InvalidStateError(
            "input covariance has a symplectic eigenvalue below 1/2"
        )
    P = np.diag([1.0, 1.0, 1.0, -1.0])
    nu = float(symplectic_eigenvalues(P @ V @ P)[0])
    log_neg = max(0.0, -np.log(2.0 * nu))
    return PPTResult(
        nu_tilde_minus=nu,
        log_negativity=log_neg,
        entangled=nu < 0.5 - ENTANGLEMENT_TOL,
    )


@dataclass(frozen=True)
class SqueezeSpec:
    """Assignment of single- and two-mode squeezes to modes.

    single_mode lists (mode index, xi0) pairs; two_mode lists
    ((mode i, mode j), xi1) pairs.  A mode may appear in at most one
    assignment.
    """

    single_mode: tuple = field(default=())
    two_mode: tuple = field(default=())

    def used_modes(self) -> list:
        modes = [i for i, _ in self.single_mode]
        for (i, j), _ in self.two_mode:
            modes.extend((i, j))
        return modes


def squeeze_symplectic(spec: SqueezeSpec, n_modes: int) -> np.ndarray:
    """Symplectic matrix implementing the squeezes in `spec` on n_modes modes.

    A single-mode squeeze xi0 acts as diag(e^-xi0, e^+xi0) on (q, p).  A
    two-mode squeeze xi1 on modes (i, j) acts as

        q_i -> q_i cosh(xi1) - q_j sinh(xi1),  p_i -> p_i cosh(xi1) + p_j sinh(xi1),

    and symmetrically for mode j; applied to vacuum it produces the standard
    two-mode squeezed vacuum (up to a local sign on one mode).
    """
    used = spec.used_modes()
    if len(set(used)) != len(used):
        raise ValueError("overlapping mode assignments in squeeze spec")
    if used and (min(used) < 0 or max(used) >= n_modes):
        raise ValueError("squeeze spec refers to a mode index out of range")
    for (i, j), _ in spec.two_mode:
        if i == j:
            raise ValueError("two-mode squeeze requires two distinct modes")

    S = np.eye(2 * n_modes)
    for i, xi0 in spec.single_mode:
        S[2 * i, 2 * i] = np.exp(-xi0)
        S[2 * i + 1, 2 * i + 1] = np.exp(xi0)
    for (i, j), xi1 in spec.two_mode:
        c, s = np.cosh(xi1), np.sinh(xi1)
        qi, pi, qj, pj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
        S[qi, qi] = c
        S[qi, qj] = -s
        S[pi, pi] = c
        S[pi, pj] = s
        S[qj, qj] = c
        S[qj, qi] = -s
        S[pj, pj] = c
        S[pj, pi] = s
    return S
