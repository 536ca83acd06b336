"""Model parameters, policy constants, the consumption rule, and the
closed-loop generator F.

F K = sigma K'' + A K - psi <K, b0>, where psi folds the consumption policy
and the population weight into one strictly positive field.  All policy
quantities are computed from the unit-mass normalization of b0, which makes
them independent of the eigenfunction's scale convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, TorusGrid, inner, integrate, second_derivative
from .spectral import EigenPair

PSI_IDENTITY_TOL = 1e-8


class AdmissibilityError(ValueError):
    """The discount rate violates rho > lambda0 * (1 - gamma)."""


@dataclass(frozen=True)
class ModelParams:
    """Diffusion, preferences, and the exogenous coefficient fields."""

    sigma: float
    rho: float
    gamma: float
    q: float
    A: Field
    eta: Field

    def __post_init__(self) -> None:
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")
        if self.gamma <= 0.0 or self.gamma == 1.0:
            raise ValueError("gamma must be > 0 and != 1")
        if self.q < 0.0:
            raise ValueError("q must be nonnegative")
        if self.A.grid != self.eta.grid:
            raise ValueError("A and eta must share a grid")
        if not np.all(self.A.values > 0.0):
            raise ValueError("A must be strictly positive")
        if not np.all(self.eta.values > 0.0):
            raise ValueError("eta must be strictly positive")

    @property
    def grid(self) -> TorusGrid:
        return self.A.grid


def constant_params(
    grid: TorusGrid,
    sigma: float,
    rho: float,
    gamma: float,
    q: float,
    a_const: float,
    eta_const: float,
) -> ModelParams:
    """Convenience constructor for spatially homogeneous coefficients."""
    return ModelParams(
        sigma=sigma,
        rho=rho,
        gamma=gamma,
        q=q,
        A=Field.constant(grid, a_const),
        eta=Field.constant(grid, eta_const),
    )


def check_admissible(params: ModelParams, lambda0: float) -> None:
    bound = lambda0 * (1.0 - params.gamma)
    if not params.rho > bound:
        raise AdmissibilityError(
            f"admissibility requires rho > lambda0*(1 - gamma): "
            f"rho = {params.rho} <= {bound}"
        )


def compute_alpha(params: ModelParams, eig: EigenPair) -> float:
    """Policy normalization constant; homogeneous of degree gamma-1 in b0."""
    check_admissible(params, eig.lambda0)
    g, q = params.gamma, params.q
    integrand = params.eta.values ** ((q + g - 1.0) / g) * eig.b0.values ** ((g - 1.0) / g)
    total = integrate(Field(params.grid, integrand))
    return float((g / (params.rho - eig.lambda0 * (1.0 - g)) * total) ** g)


def compute_psi(params: ModelParams, eig: EigenPair, alpha: float) -> Field:
    """psi = eta^((q+gamma-1)/gamma) * (alpha b0)^(-1/gamma), strictly positive."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    g, q = params.gamma, params.q
    vals = params.eta.values ** ((q + g - 1.0) / g) * (alpha * eig.b0.values) ** (-1.0 / g)
    return Field(params.grid, vals)


def growth_rate(params: ModelParams, eig: EigenPair) -> float:
    return (eig.lambda0 - params.rho) / params.gamma


@dataclass(frozen=True)
class PolicyConstants:
    """alpha, psi, the aggregate growth rate, and the aggregate weight b0."""

    alpha: float
    psi: Field
    g: float
    aggregate_weight: Field


def policy_constants(params: ModelParams, eig: EigenPair) -> PolicyConstants:
    """Derive (alpha, psi, g) from the unit-mass rescaling of b0.

    Raises if the forced identity int(psi b0) = (rho - lambda0(1-gamma))/gamma
    fails, which would indicate an inconsistent eigenpair.
    """
    if not np.all(eig.b0.values > 0.0):
        raise ValueError("b0 must be strictly positive")
    mass = integrate(eig.b0)
    b_hat = Field(params.grid, eig.b0.values / mass)
    eig_hat = EigenPair(eig.lambda0, b_hat, eig.residual)
    alpha = compute_alpha(params, eig_hat)
    psi = compute_psi(params, eig_hat, alpha)
    g = growth_rate(params, eig_hat)
    expected = (params.rho - eig.lambda0 * (1.0 - params.gamma)) / params.gamma
    gap = abs(inner(psi, b_hat) - expected)
    if gap > PSI_IDENTITY_TOL * max(1.0, abs(expected)):
        raise ValueError(f"psi/b0 identity violated by {gap:.3e}")
    return PolicyConstants(alpha=alpha, psi=psi, g=g, aggregate_weight=b_hat)


def consumption(K: Field, pc: PolicyConstants, params: ModelParams) -> Field:
    """Optimal consumption: pointwise profile times the aggregate <K, b0>."""
    g, q = params.gamma, params.q
    aggregate = inner(K, pc.aggregate_weight)
    profile = params.eta.values ** ((q - 1.0) / g) * (
        pc.alpha * pc.aggregate_weight.values
    ) ** (-1.0 / g)
    return Field(params.grid, profile * aggregate)


def consumption_closed_form(
    K0: Field, t: float, pc: PolicyConstants, params: ModelParams
) -> Field:
    """Consumption at time t from the initial aggregate and the growth law."""
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    base = consumption(K0, pc, params)
    return Field(params.grid, base.values * np.exp(pc.g * t))


def apply_F(K: Field, pc: PolicyConstants, params: ModelParams) -> Field:
    """Closed-loop generator: sigma K'' + A K - psi <K, b0>."""
    aggregate = inner(K, pc.aggregate_weight)
    vals = (
        params.sigma * second_derivative(K).values
        + params.A.values * K.values
        - pc.psi.values * aggregate
    )
    return Field(params.grid, vals)
