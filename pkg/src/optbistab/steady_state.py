"""Semiclassical steady states of the bistable absorber.

The state equation Y = X (1 + 2C/(1+X^2)) relates the scaled intracavity
amplitude X to the scaled drive Y. For C > 4 it is S-shaped: three roots
coexist between the turning drives and the middle one is dynamically
unstable. The mean-field (Maxwell-Bloch) flow is integrated in scaled time
tau_bar = gamma*t/2 with the five-component state
(<a>, <a_dag>, <J_minus>, <J_plus>, <J_z>).
"""

import math
from dataclasses import dataclass

import numpy as np

from .numerics import TOL, integrate_ode


@dataclass(frozen=True)
class OperatingPoint:
    """One root of the state equation with its steady moments."""

    X: float
    Y: float
    branch: str  # monostable | lower | unstable-middle | upper | turning
    moments: tuple  # (<a>, <J_minus>, <J_plus>, <J_z>)


@dataclass(frozen=True)
class TurningPoints:
    X_minus: float | None
    X_plus: float | None
    Y_minus: float | None
    Y_plus: float | None
    exists: bool
    degenerate: bool = False  # C exactly at the bistability threshold


def evaluate_drive(C, X):
    """Drive amplitude Y sustaining intracavity amplitude X."""
    if X < 0:
        raise ValueError("X must be nonnegative")
    return X * (1.0 + 2.0 * C / (1.0 + X * X))


def steady_moments(X):
    """Steady-state moments (<a>, <J_minus>, <J_plus>, <J_z>) at amplitude X."""
    if X < 0:
        raise ValueError("X must be nonnegative")
    sat = 1.0 / (1.0 + X * X)
    return (X, -X * sat, -X * sat, -sat)


def turning_points(C) -> TurningPoints:
    """Turning points of the S-curve; they exist only for C > 4."""
    if C <= 0:
        raise ValueError("C must be positive")
    if C < 4.0:
        return TurningPoints(None, None, None, None, exists=False)
    disc = math.sqrt(C * (C - 4.0))
    xm2 = C - 1.0 - disc
    xp2 = C - 1.0 + disc
    Xm, Xp = math.sqrt(xm2), math.sqrt(xp2)
    return TurningPoints(
        X_minus=Xm, X_plus=Xp,
        Y_minus=evaluate_drive(C, Xm), Y_plus=evaluate_drive(C, Xp),
        exists=C > 4.0, degenerate=(C == 4.0),
    )


def _cubic_roots(C, Y):
    """Real nonnegative roots of X^3 - Y X^2 + (1+2C) X - Y.

    Trigonometric method in the three-real-root case, Cardano otherwise,
    then one Newton polish per root against cancellation near the turning
    points.
    """
    b, c, d = -Y, 1.0 + 2.0 * C, -Y
    # depressed cubic t^3 + p t + q with X = t - b/3
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    roots = []
    if p < 0.0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        disc = (q * q / 4.0) + (p**3 / 27.0)
        # near-zero discriminant = merging turning-point roots; treat as
        # three real (clamped acos) so the double root is not lost to rounding
        disc_scale = max(q * q / 4.0, abs(p) ** 3 / 27.0, 1e-300)
        if disc <= 1e-12 * disc_scale:
            for k in range(3):
                roots.append(m * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift)
        else:
            # one real root; hyperbolic form avoids complex arithmetic
            t = -2.0 * math.copysign(1.0, q) * math.sqrt(-p / 3.0) * math.cosh(
                math.acosh(-3.0 * abs(q) / (p * m)) / 3.0
            )
            roots.append(t + shift)
    elif p > 0.0:
        t = -2.0 * math.sqrt(p / 3.0) * math.sinh(
            math.asinh(3.0 * q / (p * math.sqrt(p / 3.0)) / 2.0) / 3.0
        )
        roots.append(t + shift)
    else:
        roots.append(-math.copysign(abs(q) ** (1.0 / 3.0), q) + shift)

    def f(x):
        return ((x + b) * x + c) * x + d

    def fp(x):
        return (3.0 * x + 2.0 * b) * x + c

    polished = []
    for x in roots:
        slope = fp(x)
        if slope != 0.0:
            step = f(x) / slope
            # skip the polish where f' ~ 0 (double root) would throw it away
            if abs(step) <= 1e-6 * max(1.0, abs(x)):
                x = x - step
        if x > -1e-12:
            polished.append(max(x, 0.0))
    return sorted(polished)


def solve_state_equation(C, Y):
    """All nonnegative steady amplitudes for drive Y, labelled by branch.

    Returns operating points sorted by ascending X. Three roots occur only
    for C > 4 with Y strictly between the turning drives; roots landing
    within the turning tolerance are labelled "turning" since the
    linearization is marginal there.
    """
    if Y < 0:
        raise ValueError("Y must be nonnegative")
    if Y == 0.0:
        return [OperatingPoint(0.0, 0.0, "monostable", steady_moments(0.0))]
    roots = _cubic_roots(C, Y)
    if len(roots) == 3:
        labels = ["lower", "unstable-middle", "upper"]
    else:
        labels = ["monostable"] * len(roots)
    tp = turning_points(C) if C > 4.0 else None
    points = []
    for X, label in zip(roots, labels):
        if tp is not None and tp.exists:
            for Xt in (tp.X_minus, tp.X_plus):
                if abs(X - Xt) <= TOL.turning_label_rel * max(1.0, Xt):
                    label = "turning"
        points.append(OperatingPoint(X, Y, label, steady_moments(X)))
    return points


def _mb_rhs(C, xi, Y):
    two_C = 2.0 * C

    def rhs(state):
        a, ad, jm, jp, jz = state
        return np.array([
            xi * (-a + two_C * jm + Y),
            xi * (-ad + two_C * jp + Y),
            -jm + jz * a,
            -jp + jz * ad,
            -2.0 * (jz + 1.0) - (jp * a + jm * ad),
        ])

    return rhs


def integrate_maxwell_bloch(params, Y, initial, tau_bar_max, dt=1e-3):
    """Mean-field trajectory in scaled time tau_bar.

    State order: (<a>, <a_dag>, <J_minus>, <J_plus>, <J_z>). Fixed-step RK4;
    initial states near a stable root relax onto the steady solution of the
    state equation. Raises DivergenceError with the first bad step index if
    the state leaves the finite range.
    """
    initial = np.asarray(initial, dtype=float)
    if initial.shape != (5,):
        raise ValueError("initial state must have 5 components")
    return integrate_ode(_mb_rhs(params.C, params.xi, Y), initial, tau_bar_max, dt)


def steady_mb_state(X):
    """Mean-field fixed point as a 5-vector for amplitude X."""
    a, jm, jp, jz = steady_moments(X)
    return np.array([a, a, jm, jp, jz])


def curve_points(C, x_max, n=400):
    """Sampled bistability curve: list of (X, Y, branch) rows for export."""
    tp = turning_points(C)
    rows = []
    for X in np.linspace(0.0, x_max, n):
        Y = evaluate_drive(C, X)
        if not tp.exists:
            branch = "monostable"
        elif X < tp.X_minus:
            branch = "lower"
        elif X <= tp.X_plus:
            branch = "unstable-middle"
        else:
            branch = "upper"
        rows.append((float(X), float(Y), branch))
    return rows, tp
