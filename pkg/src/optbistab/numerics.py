"""Small dense numerical kernels shared by the physics modules.

Everything here operates on matrices of dimension <= 16 (the physics needs
5x5) and is deterministic: identical inputs give identical outputs. The
kernels are thin, checked wrappers around LAPACK via numpy, plus fixed-step
RK4 and composite trapezoid quadrature.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _expm_pade

MAX_DIM = 16


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance record; every numerical guard reads from here."""

    singular_rel: float = 1e-14        # smallest singular value / inf-norm
    linear_residual_rel: float = 1e-10
    expm_cond_max: float = 1e8         # eigenvector condition before fallback
    resolvent_pole_gap: float = 1e-9   # distance of s to a drift eigenvalue
    lyapunov_residual_rel: float = 1e-10
    stability_margin: float = 1e-12    # eigenvalue real parts must be below -this
    imag_truncate: float = 1e-12
    turning_label_rel: float = 1e-6
    weak_guard_frac: float = 0.1       # warn unless X < frac * X_minus
    strong_guard_frac: float = 3.0     # warn unless X > frac * X_plus
    aux_kappa_ratio: float = 10.0      # kappa_aux / g_aux for adiabaticity
    aux_coupling_ratio: float = 0.1    # (g_aux^2/kappa_aux) / g


TOL = Tolerances()


class NumericsError(Exception):
    """Base class for numerical kernel failures."""


class SingularMatrixError(NumericsError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConditioningError(NumericsError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DivergenceError(NumericsError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


def _check_matrix(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if A.shape[0] > MAX_DIM:
        raise ValueError(f"dense kernels are capped at n={MAX_DIM}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(np.imag(A))):
        raise ValueError("matrix contains NaN/Inf entries")
    return A


def solve_complex_linear(A, b):
    """Solve A x = b for a small dense (complex) system.

    Partial-pivoted elimination via LAPACK; raises SingularMatrixError with a
    condition estimate when the matrix is numerically singular, and verifies
    the residual ||Ax - b||_inf <= tol * (||A||_inf ||x||_inf + ||b||_inf).
    """
    A = _check_matrix(A).astype(complex)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != A.shape[0]:
        raise ValueError("right-hand side is not conformable")
    if not np.all(np.isfinite(b.real)) or not np.all(np.isfinite(b.imag)):
        raise ValueError("right-hand side contains NaN/Inf entries")

    norm_A = np.linalg.norm(A, np.inf)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= TOL.singular_rel * max(norm_A, 1e-300):
        cond = np.inf if sv[-1] == 0 else sv[0] / sv[-1]
        raise SingularMatrixError(
            f"matrix is numerically singular (condition ~ {cond:.3e})",
            condition=cond,
        )
    x = np.linalg.solve(A, b)
    resid = np.linalg.norm(A @ x - b, np.inf)
    bound = TOL.linear_residual_rel * (
        norm_A * np.linalg.norm(x, np.inf) + np.linalg.norm(b, np.inf)
    )
    if resid > max(bound, 1e-300):
        cond = sv[0] / sv[-1]
        raise ConditioningError(
            f"linear solve residual {resid:.3e} exceeds bound {bound:.3e} "
            f"(condition ~ {cond:.3e})",
            condition=cond,
        )
    return x


def matrix_exponential(A, t=1.0):
    """exp(A t) by eigendecomposition, falling back to scaling-and-squaring.

    The fallback triggers when the eigenvector matrix is ill conditioned
    (condition > TOL.expm_cond_max), e.g. for defective matrices.
    """
    A = _check_matrix(A)
    M = np.asarray(A, dtype=complex) * t
    try:
        w, V = np.linalg.eig(M)
        cond = np.linalg.cond(V)
        if np.isfinite(cond) and cond <= TOL.expm_cond_max:
            return V @ (np.exp(w)[:, None] * np.linalg.inv(V))
    except np.linalg.LinAlgError:
        pass
    return _expm_pade(M)


def integrate_ode(rhs, x0, t_max, dt):
    """Fixed-step classical RK4 for dx/dt = rhs(x).

    Returns (times, states) with states[k] the state at times[k]. A non-finite
    state aborts with DivergenceError carrying the first bad step index.
    """
    if dt <= 0 or t_max <= 0:
        raise ValueError("dt and t_max must be positive")
    x = np.asarray(x0, dtype=float).copy()
    n_steps = int(round(t_max / dt))
    times = np.linspace(0.0, n_steps * dt, n_steps + 1)
    states = np.empty((n_steps + 1, x.size))
    states[0] = x
    for k in range(n_steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(
                f"state became non-finite at step {k + 1}", step=k + 1
            )
        states[k + 1] = x
    return times, states


def integrate_linear_ode(A, x0, t_max, dt):
    """RK4 trajectory of dx/dt = A x (oracle companion to matrix_exponential)."""
    A = _check_matrix(A)
    if np.iscomplexobj(A) or np.iscomplexobj(np.asarray(x0)):
        Ac = np.asarray(A, dtype=complex)
        x = np.asarray(x0, dtype=complex).copy()
        n_steps = int(round(t_max / dt))
        if dt <= 0 or t_max <= 0:
            raise ValueError("dt and t_max must be positive")
        times = np.linspace(0.0, n_steps * dt, n_steps + 1)
        states = np.empty((n_steps + 1, x.size), dtype=complex)
        states[0] = x
        for k in range(n_steps):
            k1 = Ac @ x
            k2 = Ac @ (x + 0.5 * dt * k1)
            k3 = Ac @ (x + 0.5 * dt * k2)
            k4 = Ac @ (x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x.real)) or not np.all(np.isfinite(x.imag)):
                raise DivergenceError(
                    f"state became non-finite at step {k + 1}", step=k + 1
                )
            states[k + 1] = x
        return times, states
    return integrate_ode(lambda x: A @ x, x0, t_max, dt)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float


def quadrature(values, grid, rule="trapezoid"):
    """Composite trapezoid integral of sampled values on an ascending grid.

    The error estimate comes from comparing against the every-other-point
    coarsening (Richardson: |I_h - I_2h| / 3).
    """
    if rule != "trapezoid":
        raise ValueError(f"unsupported rule {rule!r}")
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values)
    if grid.size < 2:
        raise ValueError("quadrature needs at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    full = np.trapezoid(values, grid)
    if grid.size >= 3:
        # coarsen on an odd-sized prefix so endpoints are shared
        m = grid.size if grid.size % 2 == 1 else grid.size - 1
        coarse = np.trapezoid(values[:m:2], grid[:m:2])
        fine = np.trapezoid(values[:m], grid[:m])
        err = abs(fine - coarse) / 3.0
    else:
        err = abs(full)
    return QuadratureResult(value=float(full), error_estimate=float(err))
