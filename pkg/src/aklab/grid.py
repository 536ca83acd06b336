"""Uniform periodic grid on the unit circle and operations on sampled fields.

The circle is the interval [0, 1) with identified endpoints; all fields are
real vectors sampled at the n equispaced nodes theta_i = i/n.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIN_POINTS = 16


class GridMismatchError(ValueError):
    """Raised when an operation combines fields living on different grids."""


@dataclass(frozen=True, eq=False)
class TorusGrid:
    """Equispaced nodes on the circle of unit circumference."""

    n: int
    h: float = field(init=False, repr=False)
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < MIN_POINTS:
            raise ValueError(f"grid needs at least {MIN_POINTS} points, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "h", 1.0 / self.n)
        nodes = np.arange(self.n, dtype=float) / self.n
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TorusGrid) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("TorusGrid", self.n))


@dataclass(frozen=True, eq=False)
class Field:
    """Immutable real-valued function sampled on a TorusGrid."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, grid: TorusGrid, value: float) -> "Field":
        return cls(grid, np.full(grid.n, float(value)))

    @classmethod
    def from_function(cls, grid: TorusGrid, fn) -> "Field":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float))

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)


def _same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: n={f.grid.n} vs n={g.grid.n}")


def torus_distance(x, y):
    """Arc-length distance on the circle; symmetric and at most 1/2.

    Inputs are reduced mod 1 first; the absolute difference keeps the result
    exactly symmetric in floating point.
    """
    xr = np.mod(np.asarray(x, dtype=float), 1.0)
    yr = np.mod(np.asarray(y, dtype=float), 1.0)
    d = np.abs(xr - yr)
    out = np.minimum(d, 1.0 - d)
    return float(out) if out.ndim == 0 else out

def integrate(f: Field) -> float:
    """Rectangle rule; coincides with the trapezoid rule on a periodic grid."""
    return float(f.grid.h * f.values.sum())


def inner(f: Field, g: Field) -> float:
    _same_grid(f, g)
    return float(f.grid.h * (f.values @ g.values))


def second_derivative(f: Field) -> Field:
    """Second-order central difference with periodic wraparound."""
    v = f.values
    d2 = (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / f.grid.h**2
    return Field(f.grid, d2)


def positive_part(f: Field) -> Field:
    return Field(f.grid, np.maximum(f.values, 0.0))


def negative_part(f: Field) -> Field:
    return Field(f.grid, np.maximum(-f.values, 0.0))


def norm_l2(f: Field) -> float:
    return float(np.sqrt(inner(f, f)))


def norm_sup(f: Field) -> float:
    return float(np.abs(f.values).max())
