"""Shared fixtures and independent oracle routes for the test suite.

The oracles here deliberately avoid the package's own code paths: the
stationary covariance is cross-checked against scipy's Bartels-Stewart
solver and against a 25-unknown Kronecker-product solve, and propagators
against series expansion / RK4.
"""

import numpy as np
import pytest
from scipy.linalg import solve_lyapunov as scipy_lyapunov

from optbistab import params as params_mod
from optbistab.lindyn import build_diffusion, build_jacobian


@pytest.fixture
def weak_params():
    return params_mod.SystemParams(C=5.0, xi=1.0, N=10**4)


@pytest.fixture
def fig2a_params():
    return params_mod.SystemParams(C=40.0, xi=0.176, N=310)


def oracle_covariance_scipy(J, D):
    """Stationary covariance via scipy (independent of the package solver)."""
    return scipy_lyapunov(J, -D)


def oracle_covariance_kron(J, D):
    """25-unknown vectorized solve of J C + C J^T = -D."""
    n = J.shape[0]
    I = np.eye(n)
    A = np.kron(I, J) + np.kron(J, I)  # acts on vec(C) with C symmetric
    x = np.linalg.solve(A, -D.reshape(-1))
    return x.reshape(n, n)


def full_system(params, X):
    J = build_jacobian(params, X, regime="full")
    D = build_diffusion(X)
    return J, D
