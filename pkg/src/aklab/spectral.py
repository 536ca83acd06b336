"""Principal eigenpair of L = sigma d2/dtheta2 + A(theta), and a Fourier
semigroup oracle for the constant-coefficient case.

The discrete operator is the symmetric cyclic tridiagonal matrix with
off-diagonal sigma/h^2 and diagonal A_i - 2 sigma/h^2.  Its largest
eigenvalue is found by power iteration on the Perron-shifted matrix
M + mu I with mu = 2 sigma/h^2 + max A, which is entrywise nonnegative and
irreducible, so the dominant eigenvector is strictly positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .grid import Field, GridMismatchError, TorusGrid

if TYPE_CHECKING:  # pragma: no cover
    from .model import ModelParams

DEFAULT_TOL = 1e-12
DEFAULT_MAXITER = 1_000_000


class ConvergenceError(RuntimeError):
    """Power iteration failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigenPair:
    """Principal eigenvalue and its positive eigenfunction, scaled to unit mass."""

    lambda0: float
    b0: Field
    residual: float = 0.0


def apply_sturm_liouville(sigma: float, a_values: np.ndarray, h: float, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product of the discretized operator."""
    return sigma * (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / h**2 + a_values * v


def principal_eigenpair(
    params: "ModelParams",
    grid: TorusGrid,
    tol: float = DEFAULT_TOL,
    maxiter: int = DEFAULT_MAXITER,
    seed: int | None = None,
) -> EigenPair:
    """Largest-eigenvalue pair of sigma d2/dtheta2 + A, with int b0 = 1.

    The start vector is constant (exact for homogeneous A); pass a seed for
    a randomized positive start instead.
    """
    sigma = params.sigma
    if sigma <= 0.0:
        raise ValueError("no principal eigenpair for multiplication operator (sigma = 0)")
    if grid != params.A.grid:
        raise GridMismatchError("grid does not match the coefficient fields")
    a_vals = params.A.values
    h = grid.h
    mu = 2.0 * sigma / h**2 + float(a_vals.max())

    if seed is None:
        v = np.ones(grid.n)
    else:
        v = np.random.default_rng(seed).uniform(0.5, 1.5, grid.n)
    v /= np.linalg.norm(v)

    lam_prev = np.inf
    lam = np.inf
    # Successive Rayleigh quotients cannot settle below round-off of the
    # shifted operator scale, so the threshold is floored there.  Eigenvalue
    # estimates converge twice as fast as the vector, so a residual backstop
    # keeps randomly seeded starts from stopping with a sloppy eigenvector.
    eps = float(np.finfo(float).eps)
    for _ in range(int(maxiter)):
        w = apply_sturm_liouville(sigma, a_vals, h, v) + mu * v
        lam = float(v @ w) - mu  # Rayleigh quotient, ||v|| = 1
        res = float(np.abs(w - (lam + mu) * v).max() / np.abs(v).max())
        nw = np.linalg.norm(w)
        if nw == 0.0:
            raise ConvergenceError("iterate collapsed to zero", residual=np.inf)
        v = w / nw
        lam_ok = abs(lam - lam_prev) < max(tol, 32.0 * eps * (mu + abs(lam)))
        res_ok = res < max(tol**0.75, 64.0 * eps * (mu + abs(lam)))
        if lam_ok and res_ok:
            break
        lam_prev = lam
    else:
        res = float(np.abs(apply_sturm_liouville(sigma, a_vals, h, v) - lam * v).max())
        raise ConvergenceError(
            f"power iteration did not converge in {maxiter} iterations (residual {res:.3e})",
            residual=res,
        )

    if v.sum() < 0.0:
        v = -v
    if not np.all(v > 0.0):
        res = float(np.abs(apply_sturm_liouville(sigma, a_vals, h, v) - lam * v).max())
        raise ConvergenceError("eigenvector is not strictly positive", residual=res)
    b_vals = v / (h * v.sum())
    residual = float(
        np.abs(apply_sturm_liouville(sigma, a_vals, h, b_vals) - lam * b_vals).max()
        / np.abs(b_vals).max()
    )
    return EigenPair(lambda0=lam, b0=Field(grid, b_vals), residual=residual)


def semigroup_apply(a_const: float, sigma: float, t: float, f: Field) -> Field:
    """Apply exp(t L) for constant A via the discrete Fourier transform."""
    if t < 0.0:
        raise ValueError("semigroup time must be nonnegative")
    n = f.grid.n
    k = np.fft.rfftfreq(n, d=f.grid.h)  # integer frequencies on the unit circle
    factor = np.exp((a_const - sigma * (2.0 * np.pi * k) ** 2) * t)
    out = np.fft.irfft(np.fft.rfft(f.values) * factor, n)
    return Field(f.grid, out)
