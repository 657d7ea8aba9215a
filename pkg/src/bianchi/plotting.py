"""Figures of the cover certificate: the fundamental cell, the circles, open cells.

Coordinate mapping (SVG user units are points, 72 per inch): the axes fill the
whole figure, the real axis is horizontal, and a boundary point X + iY maps to

    px = MARGIN + (X - xmin) * SCALE
    py = HEIGHT - MARGIN - Y * SCALE        (SVG y grows downward)

with xmin = min(0, t/2), SCALE = (WIDTH - 2*MARGIN) / (max(1, 1 + t/2) - xmin).
So the corner 0 of the cell always sits at (MARGIN - xmin*SCALE, HEIGHT - MARGIN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "bianchi"
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle as CirclePatch  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .coverage import CoverResult, expand_shifts  # noqa: E402
from .geometry import Circle  # noqa: E402
from .ring import RingParams  # noqa: E402

WIDTH = 720.0  # points
MARGIN = 36.0


@dataclass(frozen=True)
class FigureMap:
    xmin: float
    scale: float
    width: float
    height: float

    def to_points(self, X: float, Y: float) -> tuple[float, float]:
        """Boundary point -> SVG coordinates (origin top-left)."""
        return MARGIN + (X - self.xmin) * self.scale, self.height - MARGIN - Y * self.scale


def cartesian(params: RingParams, u, v) -> tuple[float, float]:
    return float(u) + float(v) * params.t / 2, float(v) * math.sqrt(params.disc) / 2


def figure_map(params: RingParams) -> FigureMap:
    xmin = min(0.0, params.t / 2)
    xmax = max(1.0, 1 + params.t / 2)
    scale = (WIDTH - 2 * MARGIN) / (xmax - xmin)
    ymax = math.sqrt(params.disc) / 2
    return FigureMap(xmin, scale, WIDTH, ymax * scale + 2 * MARGIN)


def cover_figure(params: RingParams, circles: list[Circle], cover: CoverResult | None = None):
    fm = figure_map(params)
    fig = plt.figure(figsize=(fm.width / 72, fm.height / 72), dpi=72)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(fm.xmin - MARGIN / fm.scale, fm.xmin + (fm.width - MARGIN) / fm.scale)
    ax.set_ylim(-MARGIN / fm.scale, (fm.height - MARGIN) / fm.scale)
    ax.set_axis_off()

    for sc in expand_shifts(params, circles):
        X, Y = cartesian(params, *sc.center)
        ax.add_patch(CirclePatch((X, Y), math.sqrt(float(sc.circle.radius_sq)), fill=False, lw=0.6, color="tab:blue"))

    if cover is not None:
        n = cover.n
        for i, j in cover.uncovered_cells:
            pts = [cartesian(params, (i + a) / n, (j + b) / n) for a, b in ((0, 0), (1, 0), (1, 1), (0, 1))]
            ax.add_patch(Polygon(pts, closed=True, color="tab:orange", lw=0))

    corners = [cartesian(params, u, v) for u, v in ((0, 0), (1, 0), (1, 1), (0, 1))]
    ax.add_patch(Polygon(corners, closed=True, fill=False, color="red", lw=1.5))
    return fig, ax, fm


def render_figure(params: RingParams, circles: list[Circle], cover: CoverResult | None, path) -> Path:
    path = Path(path)
    fig, _, _ = cover_figure(params, circles, cover)
    fmt = path.suffix.lstrip(".") or "svg"
    meta = {"Date": None} if fmt == "svg" else None
    fig.savefig(path, format=fmt, metadata=meta)
    plt.close(fig)
    return path
