"""Stationary covariance and two-time correlation vectors.

The stationary covariance C solves J C + C J^T = -D. It is solved as a
dense linear system in the 15 independent entries of the symmetric unknown;
the extra exchange symmetries (nine truly independent entries) are left to
emerge and are checked by the tests rather than imposed. No factorization of
the indefinite diffusion is ever attempted.

Two-time correlators anchored to one row r of the covariance form a
5-vector c(tau_bar) obeying dc/dtau_bar = J c, so

    c(tau_bar) = exp(J tau_bar) c(0),      c_hat(s_bar) = (s_bar I - J)^{-1} c(0),

with c(0) the r-th row of the stationary covariance.
"""

from dataclasses import dataclass

import numpy as np

from .lindyn import IDX, FluctuationMatrix, RegimeWarning, is_stable, saturation_factor
from .numerics import (
    TOL,
    ConditioningError,
    SingularMatrixError,
    matrix_exponential,
    solve_complex_linear,
)
from .steady_state import turning_points
import warnings


class UnstableDriftError(ValueError):
    """Raised when a stationary solve is requested for an unstable drift."""


@dataclass(frozen=True)
class CorrelationVector:
    """Five correlators anchored at one covariance row.

    row     -- anchor label, "nu*" (atomic) or "z*" (field)
    entries -- complex values ordered like the basis (z, z*, nu, nu*, mu)
    tau_bar / s_bar -- where the vector lives (time or Laplace domain)
    """

    row: str
    entries: np.ndarray
    tau_bar: float | None = None
    s_bar: complex | None = None

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (5,):
            raise ValueError("correlation vectors have 5 components")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)
        if self.row not in ("nu*", "z*"):
            raise ValueError(f"unsupported anchor row {self.row!r}")
        if self.tau_bar == 0.0 and np.max(np.abs(e.imag)) > TOL.imag_truncate:
            raise ValueError("equal-time correlators must be real")

    def __getitem__(self, name):
        return self.entries[IDX[name]]


_TRI = [(i, j) for i in range(5) for j in range(i, 5)]
_TRI_INDEX = {ij: k for k, ij in enumerate(_TRI)}


def solve_lyapunov(J: FluctuationMatrix, D: FluctuationMatrix) -> FluctuationMatrix:
    """Stationary covariance from J C + C J^T = -D.

    Requires a stable drift. Solved via the 15-unknown symmetric system;
    the residual is verified against TOL.lyapunov_residual_rel.
    """
    if J.kind != "jacobian" or D.kind != "diffusion":
        raise ValueError("solve_lyapunov expects (jacobian, diffusion)")
    if not is_stable(J):
        raise UnstableDriftError("Lyapunov solve requires stable drift")
    A = J.entries
    B = D.entries
    M = np.zeros((15, 15))
    rhs = np.zeros(15)
    for (i, j), row in _TRI_INDEX.items():
        for k in range(5):
            M[row, _TRI_INDEX[(min(k, j), max(k, j))]] += A[i, k]
            M[row, _TRI_INDEX[(min(i, k), max(i, k))]] += A[j, k]
        rhs[row] = -B[i, j]
    try:
        x = solve_complex_linear(M, rhs)
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"stationary covariance system is singular: {exc}",
            condition=exc.condition,
        ) from exc
    C = np.zeros((5, 5))
    for (i, j), k in _TRI_INDEX.items():
        C[i, j] = C[j, i] = x[k].real
    resid = np.max(np.abs(A @ C + C @ A.T + B))
    bound = TOL.lyapunov_residual_rel * max(1.0, np.max(np.abs(B)))
    if resid > bound:
        raise ConditioningError(
            f"stationary covariance residual {resid:.3e} exceeds {bound:.3e}"
        )
    return FluctuationMatrix(C, kind="covariance")


def covariance_row(C: FluctuationMatrix, row: str) -> CorrelationVector:
    """Extract an anchor row of the covariance as an equal-time vector."""
    if C.kind != "covariance":
        raise ValueError("expected a covariance matrix")
    return CorrelationVector(row=row, entries=C.entries[IDX[row]].astype(complex),
                             tau_bar=0.0)


def _warn_weak(C, X):
    if C > 4.0:
        tp = turning_points(C)
        if X >= TOL.weak_guard_frac * tp.X_minus:
            warnings.warn(
                f"weak-excitation closed form at X={X:g}, not << X_minus={tp.X_minus:g}",
                RegimeWarning, stacklevel=3,
            )


def _warn_strong(C, X):
    if C > 4.0:
        tp = turning_points(C)
        if X <= TOL.strong_guard_frac * tp.X_plus:
            warnings.warn(
                f"strong-excitation closed form at X={X:g}, not >> X_plus={tp.X_plus:g}",
                RegimeWarning, stacklevel=3,
            )


def weak_covariance_row(params, X) -> CorrelationVector:
    """Equal-time atomic correlation row in the weak-excitation limit.

    Closed forms valid for X << X_minus (guard warns otherwise):

        c_z   =  X^4 * 2C xi (2 + xi + 2C) / ((1+2C)^2 (xi+1)^2)
        c_z*  = -X^2 * 2C xi / ((1+2C)(xi+1))
        c_nu  =  X^4 * [2C(2 + xi + 2C) + (xi+1)^2] / ((1+2C)^2 (xi+1)^2)
        c_nu* = -X^2 * (1 + xi + 2C) / ((xi+1)(1+2C))
        c_mu  =  X^3 * (2C + xi + 1) / ((1+2C)(xi+1))

    The anomalous entry carries (1 + xi + 2C): that is the coefficient the
    stationary covariance actually produces, and the one every Laplace and
    time-domain closed form in this package is consistent with.
    """
    if X < 0:
        raise ValueError("X must be nonnegative")
    _warn_weak(params.C, X)
    two_C, xi = 2.0 * params.C, params.xi
    d1 = (1.0 + two_C) * (xi + 1.0)
    d2 = d1 * d1
    entries = np.array([
        X**4 * xi * two_C * (2.0 + xi + two_C) / d2,
        -(X**2) * xi * two_C / d1,
        X**4 * (two_C * (2.0 + xi + two_C) + (xi + 1.0) ** 2) / d2,
        -(X**2) * (1.0 + xi + two_C) / d1,
        X**3 * (two_C + xi + 1.0) / d1,
    ], dtype=complex)
    return CorrelationVector(row="nu*", entries=entries, tau_bar=0.0)


def strong_covariance_closed(params, X):
    """Equal-time field and atomic rows in the strong-excitation limit.

    Returns (z_star_row, nu_star_row). The field row uses the saturation
    factor K(X, xi); the atomic row is (., ., 1, 0, 0) with the two field
    components filled by covariance symmetry with the field row.
    """
    if X <= 0:
        raise ValueError("X must be positive")
    _warn_strong(params.C, X)
    two_C, xi = 2.0 * params.C, params.xi
    K = saturation_factor(X, xi)
    f = xi / (xi + 1.0)
    z_row = np.array([
        two_C * two_C * f * K,
        two_C * two_C * f * (K - 1.0),
        two_C * f * K,
        two_C * f * (K - 1.0),
        0.0,
    ], dtype=complex)
    nu_row = np.array([
        two_C * f * K,          # = C^{z* nu} by symmetry
        two_C * f * (K - 1.0),  # = C^{z* nu*} by symmetry
        1.0,
        0.0,
        0.0,
    ], dtype=complex)
    return (
        CorrelationVector(row="z*", entries=z_row, tau_bar=0.0),
        CorrelationVector(row="nu*", entries=nu_row, tau_bar=0.0),
    )


def evolve_correlation_vector(J: FluctuationMatrix, c0: CorrelationVector,
                              tau_bar) -> CorrelationVector:
    """Propagate an equal-time row to delay tau_bar: exp(J tau_bar) c0."""
    if J.kind != "jacobian":
        raise ValueError("expected a jacobian")
    if tau_bar < 0:
        raise ValueError("tau_bar must be nonnegative")
    if tau_bar == 0.0:
        return c0
    U = matrix_exponential(J.entries, tau_bar)
    return CorrelationVector(row=c0.row, entries=U @ c0.entries, tau_bar=float(tau_bar))


def laplace_correlation_vector(J: FluctuationMatrix, c0: CorrelationVector,
                               s_bar) -> CorrelationVector:
    """Laplace-domain row (s_bar I - J)^{-1} c0.

    Raises ConditioningError when s_bar sits within TOL.resolvent_pole_gap of
    a drift eigenvalue.
    """
    if J.kind != "jacobian":
        raise ValueError("expected a jacobian")
    s = complex(s_bar)
    eigvals = np.linalg.eigvals(J.entries.astype(complex))
    gap = np.min(np.abs(eigvals - s))
    if gap < TOL.resolvent_pole_gap:
        raise ConditioningError(
            f"s_bar={s:g} is within {gap:.3e} of a drift eigenvalue"
        )
    A = s * np.eye(5, dtype=complex) - J.entries
    return CorrelationVector(row=c0.row, entries=solve_complex_linear(A, c0.entries),
                             s_bar=s)
