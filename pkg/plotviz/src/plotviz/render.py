"""Render trajectory CSVs as space-time heatmaps or surface plots.

Inputs are the simulator's documented files: a CSV with header t,theta,K
(row-major by time then node) and the diagnostics JSON carrying the resolved
parameters.  Colors are sign-split on a diverging map normalized
symmetrically around zero: blue positive, red negative, neutral where
|K| <= neg_tol.  Nothing is recomputed; the CSV is the single source of
truth.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import pyplot as plt
from matplotlib.colors import Normalize

EXPECTED_HEADER = "t,theta,K"
STYLES = ("heatmap", "surface")
COLORMAP = "RdBu"  # low (negative) red, high (positive) blue
DPI = 150


class PlotInputError(ValueError):
    """Missing, malformed, or inconsistent input files."""


@dataclass(frozen=True)
class PlotJob:
    csv_path: Path
    meta_path: Path
    out_path: Path
    style: str = "heatmap"

    def __post_init__(self) -> None:
        if self.style not in STYLES:
            raise PlotInputError(f"style must be one of {STYLES}, got {self.style!r}")


@dataclass(frozen=True)
class RenderResult:
    out_path: Path
    times: np.ndarray
    thetas: np.ndarray
    values: np.ndarray  # shape (time, theta)
    classes: np.ndarray  # +1 blue, -1 red, 0 neutral


def load_trajectory(csv_path: Path):
    """Times, nodes, and the (time, theta) value grid from a trajectory CSV."""
    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise PlotInputError(f"trajectory file not found: {csv_path}")
    with open(csv_path) as fh:
        header = fh.readline().strip()
    if header != EXPECTED_HEADER:
        raise PlotInputError(
            f"trajectory schema mismatch: expected header {EXPECTED_HEADER!r}, got {header!r}"
        )
    data = np.genfromtxt(csv_path, delimiter=",", skip_header=1)
    if data.ndim != 2 or data.shape[1] != 3 or not np.all(np.isfinite(data[:, :2])):
        raise PlotInputError(f"trajectory rows malformed in {csv_path}")
    times = np.unique(data[:, 0])
    thetas = np.unique(data[:, 1])
    if len(times) * len(thetas) != data.shape[0]:
        raise PlotInputError(
            f"trajectory is not a full time x node grid: {data.shape[0]} rows, "
            f"{len(times)} times x {len(thetas)} nodes"
        )
    order = np.lexsort((data[:, 1], data[:, 0]))
    k = data[order, 2].reshape(len(times), len(thetas))
    return times, thetas, k


def load_meta(meta_path: Path) -> dict:
    meta_path = Path(meta_path)
    if not meta_path.exists():
        raise PlotInputError(f"meta file not found: {meta_path}")
    try:
        with open(meta_path) as fh:
            meta = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PlotInputError(f"meta file is not valid JSON: {exc}") from None
    params = meta.get("params")
    if not isinstance(params, dict) or not {"sigma", "rho", "neg_tol"} <= set(params):
        raise PlotInputError("meta file must carry params with sigma, rho, neg_tol")
    return meta


def sign_classes(values: np.ndarray, neg_tol: float) -> np.ndarray:
    """+1 above neg_tol, -1 below -neg_tol, 0 in the neutral band."""
    return np.where(values > neg_tol, 1, np.where(values < -neg_tol, -1, 0)).astype(int)


def _title(meta: dict) -> str:
    params = meta["params"]
    parts = []
    if params.get("k_bar") is not None:
        parts.append(f"kbar={params['k_bar']:g}")
    parts.append(f"sigma={params['sigma']:g}")
    parts.append(f"rho={params['rho']:g}")
    return " ".join(parts)


def render(job: PlotJob) -> RenderResult:
    """Validate inputs, write the image, and return the rendered arrays."""
    times, thetas, values = load_trajectory(job.csv_path)
    meta = load_meta(job.meta_path)
    neg_tol = float(meta["params"]["neg_tol"])
    classes = sign_classes(values, neg_tol)

    vmax = float(np.abs(values).max())
    if vmax == 0.0:
        vmax = 1.0
    norm = Normalize(vmin=-vmax, vmax=vmax)

    if job.style == "heatmap":
        fig, ax = plt.subplots(figsize=(7.0, 5.0))
        mesh = ax.pcolormesh(thetas, times, values, cmap=COLORMAP, norm=norm, shading="nearest")
        fig.colorbar(mesh, ax=ax, label="K")
        ax.set_xlabel("theta")
        ax.set_ylabel("t")
    else:
        fig = plt.figure(figsize=(7.0, 5.0))
        ax = fig.add_subplot(projection="3d")
        th_grid, t_grid = np.meshgrid(thetas, times)
        ax.plot_surface(th_grid, t_grid, values, cmap=COLORMAP, norm=norm, linewidth=0)
        ax.set_xlabel("theta")
        ax.set_ylabel("t")
        ax.set_zlabel("K")
    ax.set_title(_title(meta))

    out_path = Path(job.out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=DPI, metadata={"Software": "plotviz"})
    plt.close(fig)
    return RenderResult(out_path=out_path, times=times, thetas=thetas, values=values, classes=classes)
