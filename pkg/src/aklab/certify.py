"""Distance to the positive cone, shell membership, and witness-based
non-invariance certificates in the L2 and sup-norm settings.

A certificate evaluates the closed-loop generator F directly: the
dissipative/Lipschitz split used for the abstract theory telescopes back to
F, so no shift constant appears at evaluation time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import Field, inner, negative_part, norm_l2, norm_sup, positive_part, second_derivative
from .model import ModelParams, PolicyConstants, apply_F

SETTINGS = ("L2", "SUP")
DEFAULT_ARGMAX_REL_TOL = 1e-9
DECOMPOSITION_TOL = 1e-8
DINI_DEFAULT_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5)
DINI_CONVERGENCE_TOL = 1e-4


class CertificateError(RuntimeError):
    """Internal consistency check of a certificate failed."""


def _check_setting(setting: str) -> None:
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}")


@dataclass(frozen=True)
class CertificateReport:
    setting: str
    delta: float
    bigC: float
    d_G: float
    in_G_delta: bool
    lhs: float
    rhs: float
    passed: bool
    decomposition: dict | None = None
    argmax_thetas: tuple[float, ...] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "setting": self.setting,
            "delta": self.delta,
            "bigC": self.bigC,
            "d_G": self.d_G,
            "in_G_delta": self.in_G_delta,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.passed,
        }
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition
        if self.argmax_thetas is not None:
            out["argmax_thetas"] = list(self.argmax_thetas)
        return out


def distance_to_cone(f: Field, setting: str) -> float:
    """Norm of the negative part; zero exactly when f >= 0 at all nodes."""
    _check_setting(setting)
    fm = negative_part(f)
    return norm_l2(fm) if setting == "L2" else norm_sup(fm)


def _vacuous(setting: str, delta: float, bigC: float) -> CertificateReport:
    return CertificateReport(
        setting=setting,
        delta=delta,
        bigC=bigC,
        d_G=0.0,
        in_G_delta=False,
        lhs=0.0,
        rhs=0.0,
        passed=False,
    )


def l2_certificate(
    f: Field,
    bigC: float,
    delta: float,
    pc: PolicyConstants,
    params: ModelParams,
) -> CertificateReport:
    """Check -<f-, F f> > C ||f-||_2^2 and report the term decomposition.

    The decomposition mirrors the summation-by-parts identity: the diffusion
    pairing splits into -sigma sum |D+ f-|^2 plus a boundary residual on the
    cells where f changes sign, and the identity with the exact pairing is
    enforced to DECOMPOSITION_TOL.
    """
    if bigC <= 0.0 or delta <= 0.0:
        raise ValueError("bigC and delta must be positive")
    fm = negative_part(f)
    if fm.values.max() == 0.0:
        return _vacuous("L2", delta, bigC)
    h = f.grid.h
    lhs = -inner(fm, apply_F(f, pc, params))
    rhs = bigC * norm_l2(fm) ** 2

    fp = positive_part(f)
    dplus_m = (np.roll(fm.values, -1) - fm.values) / h
    dplus_p = (np.roll(fp.values, -1) - fp.values) / h
    grad_term = -params.sigma * h * float(dplus_m @ dplus_m)
    boundary = params.sigma * h * float(dplus_m @ dplus_p)
    reaction = h * float(params.A.values @ fm.values**2)
    nonlocal_term = inner(fm, pc.psi) * inner(f, pc.aggregate_weight)
    total = grad_term + boundary + reaction + nonlocal_term
    gap = abs(lhs - total)
    if gap > DECOMPOSITION_TOL * max(1.0, abs(lhs)):
        raise CertificateError(f"decomposition identity violated by {gap:.3e}")
    d = norm_l2(fm)
    return CertificateReport(
        setting="L2",
        delta=delta,
        bigC=bigC,
        d_G=d,
        in_G_delta=0.0 < d < delta,
        lhs=lhs,
        rhs=rhs,
        passed=lhs > rhs,
        decomposition={
            "diffusion_gradient": grad_term,
            "diffusion_boundary": boundary,
            "reaction": reaction,
            "nonlocal": nonlocal_term,
            "identity_gap": gap,
        },
    )


def sup_certificate(
    f: Field,
    bigC: float,
    delta: float,
    pc: PolicyConstants,
    params: ModelParams,
    argmax_rel_tol: float = DEFAULT_ARGMAX_REL_TOL,
) -> CertificateReport:
    """Check min over argmax f- of {-sigma f'' - A f + psi <f,b0>} >= C ||f-||_inf."""
    if bigC <= 0.0 or delta <= 0.0:
        raise ValueError("bigC and delta must be positive")
    if not 0.0 < argmax_rel_tol <= 1e-3:
        raise ValueError("argmax_rel_tol must lie in (0, 1e-3]")
    fm = negative_part(f)
    m = float(fm.values.max())
    if m == 0.0:
        return _vacuous("SUP", delta, bigC)
    idx = np.flatnonzero(fm.values >= (1.0 - argmax_rel_tol) * m)
    aggregate = inner(f, pc.aggregate_weight)
    candidates = (
        -params.sigma * second_derivative(f).values[idx]
        - params.A.values[idx] * f.values[idx]
        + pc.psi.values[idx] * aggregate
    )
    lhs = float(candidates.min())
    rhs = bigC * m
    return CertificateReport(
        setting="SUP",
        delta=delta,
        bigC=bigC,
        d_G=m,
        in_G_delta=0.0 < m < delta,
        lhs=lhs,
        rhs=rhs,
        passed=lhs >= rhs,
        argmax_thetas=tuple(float(th) for th in f.grid.nodes[idx]),
    )


@dataclass(frozen=True)
class DiniEstimate:
    value: float
    converged: bool
    quotients: tuple[float, ...]


def dini_estimate(
    x: Field,
    v: Field,
    setting: str,
    h_schedule: Sequence[float] = DINI_DEFAULT_SCHEDULE,
) -> DiniEstimate:
    """Difference-quotient estimate of the lower Dini derivative of the cone
    distance at x along v, over a decreasing step schedule."""
    _check_setting(setting)
    hs = [float(h) for h in h_schedule]
    if not hs or any(h <= 0.0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h_schedule must be nonempty, positive, decreasing")
    d0 = distance_to_cone(x, setting)
    quotients = []
    for h in hs:
        shifted = Field(x.grid, x.values + h * v.values)
        quotients.append((distance_to_cone(shifted, setting) - d0) / h)
    converged = len(quotients) >= 2 and abs(quotients[-1] - quotients[-2]) <= DINI_CONVERGENCE_TOL
    return DiniEstimate(value=quotients[-1], converged=converged, quotients=tuple(quotients))
