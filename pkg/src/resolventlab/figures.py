"""Matplotlib rendering for the report path.

Figures are rendered to files next to the delimited data they draw, using
the Agg backend so everything works headless.  Three kinds:

* ``region``: the spectral sublevel region as a filled set with its sampled
  boundary polyline;
* ``square``: the exponent-square geography for one dimension, coloured by
  region label with the named points marked;
* ``scaling``: a log-log sweep with its fitted power law.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from resolventlab.exponents import classify, critical_points
from resolventlab.spectral import BoundaryPolyline, RegionQuery, membership, shape_classify

__all__ = ["render_region", "render_square", "render_scaling"]

_REGION_COLORS = {
    "R1": "#4c72b0",
    "R2": "#dd8452",
    "TildeR2": "#c44e52",
    "R3": "#55a868",
    "TildeR3": "#2d6a4f",
    "R3dual": "#8172b3",
    "TildeR3dual": "#5f4b8b",
    "SegmentBE": "#937860",
    "SegmentBprimeEprime": "#937860",
    "SegmentDH": "#da8bc3",
    "SegmentDprimeH": "#da8bc3",
    "OutsideR0": "#eeeeee",
    "ExcludedCorner": "#111111",
}


def render_region(
    query: RegionQuery,
    window: tuple[float, float, float, float],
    polyline: BoundaryPolyline,
    path: Path,
    resolution: int = 400,
) -> Path:
    """Filled membership picture with the boundary polyline overlaid."""
    re_min, re_max, im_min, im_max = window
    res = np.linspace(re_min, re_max, resolution)
    ims = np.linspace(im_min, im_max, resolution)
    mask = np.zeros((resolution, resolution))
    for i, b in enumerate(ims):
        for j, a in enumerate(res):
            if b == 0.0 and a >= 0.0:
                continue
            mask[i, j] = 1.0 if membership(query, complex(a, b)) else 0.0
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.imshow(
        mask,
        origin="lower",
        extent=(re_min, re_max, im_min, im_max),
        cmap="Blues",
        vmin=0.0,
        vmax=1.4,
        aspect="auto",
    )
    if len(polyline):
        pts = np.array(list(polyline))
        ax.plot(pts[:, 0], pts[:, 1], "k-", linewidth=1.0)
    ax.axhline(0.0, color="0.4", linewidth=0.6)
    ax.plot([max(re_min, 0.0), re_max], [0, 0], color="crimson", linewidth=1.6)
    shape = shape_classify(query)
    ax.set_title(
        f"sublevel region, x={query.pair.x}, y={query.pair.y}, "
        f"ell={query.ell:g} [{shape.kind}]"
    )
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_square(d: int, path: Path, resolution: int = 241) -> Path:
    """Colour map of region labels over the exponent square for dimension d."""
    coords = [Fraction(k, resolution - 1) for k in range(resolution)]
    img = np.zeros((resolution, resolution, 3))
    from matplotlib.colors import to_rgb

    rgb = {k: to_rgb(v) for k, v in _REGION_COLORS.items()}
    from resolventlab.exponents import ExponentPair

    for i, y in enumerate(coords):
        for j, x in enumerate(coords):
            label = classify(d, ExponentPair(x, y)).label.value
            img[i, j] = rgb[label]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(img, origin="lower", extent=(0, 1, 0, 1))
    pts = critical_points(d)
    named = {"B": pts.B, "B'": pts.B_prime, "D": pts.D, "D'": pts.D_prime,
             "E": pts.E, "E'": pts.E_prime, "H": pts.H,
             "P*": pts.P_star, "Po": pts.P_circ}
    if d >= 3:
        named["A"] = pts.A
        named["A'"] = pts.A_prime
    for name, pt in named.items():
        x, y = pt.as_floats()
        ax.plot([x], [y], "k.", markersize=4)
        ax.annotate(name, (x, y), textcoords="offset points", xytext=(3, 3), fontsize=8)
    ax.set_title(f"exponent-square regions, d={d}")
    ax.set_xlabel("1/p")
    ax.set_ylabel("1/q")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_scaling(rows: list[dict], value_key: str, fit: dict, path: Path) -> Path:
    """Log-log sweep plot with the fitted power law drawn through it."""
    deltas = np.array([r["delta"] for r in rows], dtype=float)
    values = np.array([r[value_key] for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(deltas, values, "o", label="measured")
    line = np.exp(fit["intercept"]) * deltas ** fit["slope"]
    label = f"fit slope {fit['slope']:.4f}"
    if fit.get("expected") is not None:
        label += f" (expected {fit['expected']:.4f})"
    ax.loglog(deltas, line, "-", label=label)
    ax.set_xlabel("delta")
    ax.set_ylabel(value_key)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
