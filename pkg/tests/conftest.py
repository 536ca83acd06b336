"""Shared fixtures: the homogeneous baseline parameter set and helpers.

Frozen oracle values were computed independently before the implementation
(closed forms, adaptive quadrature, dense eigensolves) and are asserted
against the library paths in the module tests.
"""
from __future__ import annotations

import numpy as np
import pytest

from aklab import (
    EigenPair,
    Field,
    TorusGrid,
    constant_params,
    policy_constants,
    principal_eigenpair,
)

# independently computed oracle values (frozen before the build)
INT_F0 = 0.48  # 12/25, exact
INT_F0_SQ = 16.0 / 35.0
DENSE_LAMBDA0_N64 = 0.010001267528977443  # dense eigensolve, A = 0.01 + 0.001 cos, sigma = 0.01
ALPHA_CONST = np.sqrt(0.2)
PSI_CONST = 0.05
G_CONST = -0.04
CONSUMPTION_CONST = 5.0  # K = 1, constant coefficients

# baseline (homogeneous) parameter values with the documented rho = 0.03
SIGMA0 = 1e-2
RHO0 = 0.03
GAMMA0 = 0.5
Q0 = 1.0
A0 = 1e-2
ETA0 = 1e-2


def baseline_params(grid: TorusGrid, sigma: float = SIGMA0, rho: float = RHO0):
    return constant_params(grid, sigma=sigma, rho=rho, gamma=GAMMA0, q=Q0, a_const=A0, eta_const=ETA0)


def hetero_A(grid: TorusGrid) -> Field:
    return Field.from_function(grid, lambda th: 0.01 + 0.001 * np.cos(2.0 * np.pi * th))


def dense_operator(n: int, sigma: float, a_vals: np.ndarray) -> np.ndarray:
    """Dense cyclic tridiagonal discretization, for oracle eigensolves."""
    h = 1.0 / n
    m = np.zeros((n, n))
    idx = np.arange(n)
    m[idx, idx] = a_vals - 2.0 * sigma / h**2
    m[idx, (idx + 1) % n] = sigma / h**2
    m[idx, (idx - 1) % n] = sigma / h**2
    return m


@pytest.fixture(scope="session")
def grid256() -> TorusGrid:
    return TorusGrid(256)


@pytest.fixture(scope="session")
def table1(grid256):
    """(params, eig, pc) for the homogeneous baseline at n = 256."""
    params = baseline_params(grid256)
    eig = principal_eigenpair(params, grid256)
    pc = policy_constants(params, eig)
    return params, eig, pc


@pytest.fixture(scope="session")
def table1_sigma0(grid256):
    """(params, pc) for the sigma = 0 limit; b0 = 1 and lambda0 = A exactly."""
    params = baseline_params(grid256, sigma=0.0)
    eig = EigenPair(lambda0=A0, b0=Field.constant(grid256, 1.0), residual=0.0)
    pc = policy_constants(params, eig)
    return params, eig, pc
