"""Closed-form witness functions violating cone invariance, and the smooth
bump initial conditions used in the simulation experiments.

A witness is a quadratic dip of half-width a around theta = 1/2 glued C2 to
two quintic ramps that rise to a plateau of height c_star at the identified
endpoint.  The dip fixes the negative part (hence the cone distance) while
c_star scales the aggregate, so doubling c_star eventually satisfies either
certificate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .certify import CertificateReport, l2_certificate, sup_certificate
from .grid import Field, TorusGrid
from .model import ModelParams, PolicyConstants

MAX_HALFWIDTH = 0.4
MAX_CSTAR = 1e12


class ConstructionError(RuntimeError):
    """The witness construction could not be completed."""


def dip_halfwidth(delta: float, setting: str) -> float:
    """Half-width of the dip pinned so the negative part has norm delta/2."""
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if setting == "L2":
        a = (np.sqrt(15.0) * delta / 8.0) ** 0.4
    elif setting == "SUP":
        a = np.sqrt(delta / 2.0)
    else:
        raise ValueError("setting must be 'L2' or 'SUP'")
    if a >= MAX_HALFWIDTH:
        raise ValueError(f"delta too large for the construction (half-width {a:.3f} >= {MAX_HALFWIDTH})")
    return float(a)


def middle_piece(a: float) -> np.ndarray:
    """Monomial coefficients of (x - 1/2 + a)(x - 1/2 - a), ascending."""
    if not 0.0 < a < 0.5:
        raise ValueError("a must lie in (0, 1/2)")
    return np.array([0.25 - a * a, -1.0, 1.0])


def _plateau_offset(side: str, a: float) -> float:
    """Signed distance from the junction to the plateau end of the ramp."""
    if side == "left":
        return -(0.5 - a)  # theta = 0 relative to the junction 1/2 - a
    if side == "right":
        return 0.5 - a  # theta = 1 relative to the junction 1/2 + a
    raise ValueError("side must be 'left' or 'right'")


# Two-point quintic Hermite basis on tau in [0, 1]: basis i matches the i-th
# of (value, slope, curvature) at tau = 0 then tau = 1, all others zero.
# Boundary evaluations are exact small-integer sums, so the six defining
# conditions hold at round-off for any plateau height; monomial coefficients
# would leak O(eps c_star / a^2) noise into the junction residuals instead.
_HERMITE = np.array(
    [
        [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
        [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
        [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
        [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
        [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
        [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
    ]
)
_HERMITE_DERIVS = [
    [np.asarray(npoly.polyder(row, m)) if m else np.asarray(row) for m in range(3)]
    for row in _HERMITE
]


def solve_quintic(side: str, a: float, c_star: float) -> np.ndarray:
    """Quintic ramp coefficients from the six junction/plateau conditions.

    The six conditions are value/slope/curvature contact with the dip at the
    junction and (c_star, 0, 0) at the plateau end (theta = 0 on the left,
    theta = 1 on the right).  In the two-point Hermite basis of the ramp
    interval the condition system is diagonal, so the returned coefficients
    are (value, slope * U, curvature * U^2) at the junction followed by the
    same triple at the plateau end, with U the signed junction-to-plateau
    offset.
    """
    if not 0.0 < a < 0.5:
        raise ValueError("a must lie in (0, 1/2)")
    if c_star <= 0.0:
        raise ValueError("c_star must be positive")
    slope = -2.0 * a if side == "left" else 2.0 * a
    U = _plateau_offset(side, a)
    if U == 0.0:  # unreachable for a in (0, 1/2); guarded anyway
        raise ConstructionError("quintic junction system is singular")
    return np.array([0.0, slope * U, 2.0 * U * U, c_star, 0.0, 0.0])


def ramp_eval(coeffs, side: str, a: float, u, order: int = 0):
    """Value or derivative (order <= 2) of a ramp at junction offset u."""
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1, or 2")
    U = _plateau_offset(side, a)
    tau = np.asarray(u) / U
    out = None
    for c, derivs in zip(coeffs, _HERMITE_DERIVS):
        if c == 0.0:
            continue
        term = c * npoly.polyval(tau, derivs[order])
        out = term if out is None else out + term
    if out is None:
        out = np.zeros_like(tau)
    return out / U**order


@dataclass(frozen=True)
class WitnessSpec:
    """Closed-form witness, evaluable anywhere and sampleable to any grid.

    Ramp coefficients follow the Hermite-data convention of solve_quintic
    with the left/right junctions at 1/2 -+ a as anchors.
    """

    setting: str
    delta: float
    bigC: float
    a: float
    c_star: float
    p5_coeffs: tuple[float, ...]
    q5_coeffs: tuple[float, ...]

    def evaluate(self, theta) -> np.ndarray:
        th = np.mod(np.asarray(theta, dtype=float), 1.0)
        lo, hi = 0.5 - self.a, 0.5 + self.a
        p2 = (th - 0.5) ** 2 - self.a**2
        out = np.where(
            th <= lo,
            ramp_eval(self.p5_coeffs, "left", self.a, th - lo),
            np.where(th >= hi, ramp_eval(self.q5_coeffs, "right", self.a, th - hi), p2),
        )
        return out

    def to_field(self, grid: TorusGrid) -> Field:
        return Field(grid, self.evaluate(grid.nodes))

    def to_json_dict(self) -> dict:
        return {
            "setting": self.setting,
            "delta": self.delta,
            "bigC": self.bigC,
            "a": self.a,
            "c_star": self.c_star,
            "p5_coeffs": list(self.p5_coeffs),
            "q5_coeffs": list(self.q5_coeffs),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "WitnessSpec":
        return cls(
            setting=str(doc["setting"]),
            delta=float(doc["delta"]),
            bigC=float(doc["bigC"]),
            a=float(doc["a"]),
            c_star=float(doc["c_star"]),
            p5_coeffs=tuple(float(c) for c in doc["p5_coeffs"]),
            q5_coeffs=tuple(float(c) for c in doc["q5_coeffs"]),
        )


def assemble_witness(setting: str, delta: float, bigC: float, c_star: float) -> WitnessSpec:
    a = dip_halfwidth(delta, setting)
    return WitnessSpec(
        setting=setting,
        delta=delta,
        bigC=bigC,
        a=a,
        c_star=c_star,
        p5_coeffs=tuple(solve_quintic("left", a, c_star)),
        q5_coeffs=tuple(solve_quintic("right", a, c_star)),
    )


def _ramp_dvals(spec: WitnessSpec, side: str, u: float) -> list:
    coeffs = spec.p5_coeffs if side == "left" else spec.q5_coeffs
    return [float(ramp_eval(coeffs, side, spec.a, u, order=m)) for m in range(3)]


def _p2_dvals(a: float, theta: float) -> list:
    c = middle_piece(a)
    out = []
    for _ in range(3):
        out.append(float(npoly.polyval(theta, c)))
        c = npoly.polyder(c)
    return out


def junction_residuals(spec: WitnessSpec) -> dict:
    """C2 mismatch of the assembled pieces at the junctions and the
    identified endpoint, plus the plateau-condition residuals.

    Ramps are evaluated at their exact anchor offsets (u = 0 and the signed
    plateau offset), which are the same points theta = 1/2 -+ a, 0, 1 without
    the round-off of recomputing the offsets from theta.
    """
    a = spec.a
    lo, hi = 0.5 - a, 0.5 + a
    u_left = _plateau_offset("left", a)
    u_right = _plateau_offset("right", a)
    res = {}
    left = np.array(_ramp_dvals(spec, "left", 0.0)) - np.array(_p2_dvals(a, lo))
    right = np.array(_ramp_dvals(spec, "right", 0.0)) - np.array(_p2_dvals(a, hi))
    wrap = np.array(_ramp_dvals(spec, "left", u_left)) - np.array(_ramp_dvals(spec, "right", u_right))
    res["dip_left"] = tuple(abs(x) for x in left)
    res["dip_right"] = tuple(abs(x) for x in right)
    res["endpoint"] = tuple(abs(x) for x in wrap)
    res["plateau_left"] = tuple(
        abs(x - y) for x, y in zip(_ramp_dvals(spec, "left", u_left), [spec.c_star, 0.0, 0.0])
    )
    res["plateau_right"] = tuple(
        abs(x - y) for x, y in zip(_ramp_dvals(spec, "right", u_right), [spec.c_star, 0.0, 0.0])
    )
    return res


def build_counterexample(
    setting: str,
    delta: float,
    bigC: float,
    pc: PolicyConstants,
    params: ModelParams,
) -> tuple[WitnessSpec, CertificateReport]:
    """Double the plateau height from 1 until the exact certificate passes.

    Only the nonlocal term grows with c_star, so the search terminates; a cap
    guards against inconsistent model parameters.
    """
    grid = params.grid
    c_star = 1.0
    while c_star <= MAX_CSTAR:
        spec = assemble_witness(setting, delta, bigC, c_star)
        f = spec.to_field(grid)
        if setting == "L2":
            report = l2_certificate(f, bigC, delta, pc, params)
        else:
            report = sup_certificate(f, bigC, delta, pc, params)
        if report.passed:
            return spec, report
        c_star *= 2.0
    raise ConstructionError(
        f"no passing witness with c_star <= {MAX_CSTAR:g}; model/parameter inconsistency"
    )


@dataclass(frozen=True)
class BumpSpec:
    """Smooth plateau bump: radius R, ramp width eps, scale k_bar."""

    R: float = 0.25
    eps: float = 0.1
    k_bar: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 2.0 * self.R < 1.0 - self.eps:
            raise ValueError("need 0 < eps < 2R < 1 - eps")
        if self.k_bar <= 0.0:
            raise ValueError("k_bar must be positive")


_P3 = np.array([1.0, 0.0, -6.0, 8.0, -3.0])  # 1 - 6x^2 + 8x^3 - 3x^4


def p3_ramp(x) -> np.ndarray:
    """Monotone C1 ramp from 1 at x=0 to 0 at x=1 with flat ends."""
    return npoly.polyval(np.asarray(x, dtype=float), _P3)


def bump_f0_values(spec: BumpSpec, theta) -> np.ndarray:
    th = np.mod(np.asarray(theta, dtype=float), 1.0)
    R, eps = spec.R, spec.eps
    lo_out, lo_in = 0.5 - R - eps / 2.0, 0.5 - R + eps / 2.0
    hi_in, hi_out = 0.5 + R - eps / 2.0, 0.5 + R + eps / 2.0
    out = np.zeros_like(th)
    plateau = (th > lo_in) & (th < hi_in)
    out[plateau] = 1.0
    up = (th >= lo_out) & (th <= lo_in)
    out[up] = p3_ramp((-th[up] + 0.5 - R + eps / 2.0) / eps)
    down = (th >= hi_in) & (th <= hi_out)
    out[down] = p3_ramp((th[down] - 0.5 - R + eps / 2.0) / eps)
    return out


def bump_f0(spec: BumpSpec, grid: TorusGrid) -> Field:
    return Field(grid, bump_f0_values(spec, grid.nodes))


def scaled_initial(spec: BumpSpec, grid: TorusGrid) -> Field:
    return Field(grid, spec.k_bar * bump_f0_values(spec, grid.nodes))


def nonneg_from_witness(spec: WitnessSpec, grid: TorusGrid) -> Field:
    """Positive part of the witness: plateaus kept, dip flattened to zero."""
    return Field(grid, np.maximum(spec.evaluate(grid.nodes), 0.0))


def nonneg_witness(
    delta: float,
    bigC: float,
    pc: PolicyConstants,
    params: ModelParams,
    grid: TorusGrid | None = None,
    setting: str = "SUP",
) -> Field:
    """Nonnegative field with a flat zero band and a large aggregate.

    Built as the positive part of a passing witness, so simulations from it
    exercise the negativity mechanism from inside the cone.
    """
    spec, _ = build_counterexample(setting, delta, bigC, pc, params)
    return nonneg_from_witness(spec, grid if grid is not None else params.grid)
