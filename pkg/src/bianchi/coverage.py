"""Grid certificate that a family of discs covers the fundamental cell of C/O_d.

The cell D = {u + v*w : 0 <= u, v <= 1} is cut into n x n sub-parallelograms.
A sub-parallelogram is inside a closed disc iff its four corners are (both
are convex), so each test is four exact point-in-disc checks.  Failing the
test does not prove the discs miss part of D; it can be retried at a finer
grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .geometry import Circle, form
from .ring import RingParams

log = logging.getLogger(__name__)

DEFAULT_GRID = 100
DEFAULT_GRID_CAP = 800


class GridCell(NamedTuple):
    i: int
    j: int


@dataclass
class CoverResult:
    covered: bool
    n: int
    uncovered_cells: list[GridCell]
    # cell -> (index into the input circle list, integer shift (x, y))
    witness: dict[GridCell, tuple[int, tuple[int, int]]] = field(repr=False, default_factory=dict)


@dataclass(frozen=True)
class ShiftedCircle:
    index: int
    shift: tuple[int, int]
    circle: Circle

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return self.circle.center


def cell_corners(cell: GridCell, n: int) -> list[tuple[Fraction, Fraction]]:
    i, j = cell
    return [(Fraction(i + a, n), Fraction(j + b, n)) for a in (0, 1) for b in (0, 1)]


def point_in_circle(params: RingParams, pt, circle: Circle) -> bool:
    cu, cv = circle.center
    return form(params, pt[0] - cu, pt[1] - cv) <= circle.radius_sq


def cell_in_circle(params: RingParams, cell: GridCell, n: int, circle: Circle) -> bool:
    return all(point_in_circle(params, pt, circle) for pt in cell_corners(cell, n))


def _extent(params: RingParams, radius: float) -> tuple[float, float]:
    """Half-widths in (u, v) coordinates of the box around a disc of this radius."""
    sq = math.sqrt(params.disc)
    ev = 2 * radius / sq
    eu = radius + abs(params.t) * radius / sq
    return eu * (1 + 1e-9) + 1e-12, ev * (1 + 1e-9) + 1e-12


def expand_shifts(params: RingParams, circles: list[Circle]) -> list[ShiftedCircle]:
    """All O_d-translates of the discs whose bounding boxes meet the closed cell [0,1]^2."""
    out = []
    for idx, c in enumerate(circles):
        cu, cv = c.center
        eu, ev = _extent(params, math.sqrt(float(c.radius_sq)))
        fu, fv = float(cu), float(cv)
        for y in range(math.floor(-ev - fv), math.ceil(1 + ev - fv) + 1):
            if fv + y - ev > 1 or fv + y + ev < 0:
                continue
            for x in range(math.floor(-eu - fu), math.ceil(1 + eu - fu) + 1):
                if fu + x - eu > 1 or fu + x + eu < 0:
                    continue
                out.append(ShiftedCircle(idx, (x, y), Circle((cu + x, cv + y), c.radius_sq)))
    return out


def check_cover(params: RingParams, circles: list[Circle], n: int = DEFAULT_GRID) -> CoverResult:
    if n < 1:
        raise ValueError("grid resolution must be >= 1")
    t, nn = params.t, params.n
    covered = np.zeros((n, n), dtype=bool)
    witness_idx = np.full((n, n), -1, dtype=np.int64)
    shifted = expand_shifts(params, circles)
    grid = np.arange(n + 1)

    for k, sc in enumerate(shifted):
        cu, cv = sc.center
        fu, fv = float(cu), float(cv)
        r2 = float(sc.circle.radius_sq)
        eu, ev = _extent(params, math.sqrt(r2))
        i0 = max(0, math.ceil((fu - eu) * n))
        i1 = min(n, math.floor((fu + eu) * n))
        j0 = max(0, math.ceil((fv - ev) * n))
        j1 = min(n, math.floor((fv + ev) * n))
        if i1 - i0 < 1 or j1 - j0 < 1:
            continue
        du = grid[i0 : i1 + 1, None] / n - fu
        dv = grid[None, j0 : j1 + 1] / n - fv
        d2 = du * du + t * du * dv + nn * dv * dv
        tol = 1e-9 * max(1.0, r2)
        inside = d2 <= r2 - tol
        unsure = np.argwhere(np.abs(d2 - r2) <= tol)
        for a, b in unsure:
            pt = (Fraction(i0 + int(a), n), Fraction(j0 + int(b), n))
            inside[a, b] = point_in_circle(params, pt, sc.circle)
        cells = inside[:-1, :-1] & inside[1:, :-1] & inside[:-1, 1:] & inside[1:, 1:]
        block = covered[i0:i1, j0:j1]
        fresh = cells & ~block
        if fresh.any():
            witness_idx[i0:i1, j0:j1][fresh] = k
            block |= cells

    uncovered = [GridCell(int(i), int(j)) for i, j in np.argwhere(~covered)]
    witness = {}
    for i, j in np.argwhere(covered):
        sc = shifted[witness_idx[i, j]]
        witness[GridCell(int(i), int(j))] = (sc.index, sc.shift)
    return CoverResult(not uncovered, n, uncovered, witness)


def check_cover_with_retry(
    params: RingParams, circles: list[Circle], n: int = DEFAULT_GRID, cap: int = DEFAULT_GRID_CAP
) -> CoverResult:
    """Refine the grid by doubling until the cover certifies or the cap is passed."""
    while True:
        res = check_cover(params, circles, n)
        if res.covered or 2 * n > cap:
            return res
        log.info("cover not certified at n=%d (%d cells open), retrying at n=%d", n, len(res.uncovered_cells), 2 * n)
        n *= 2
