"""Generators and relations from the orbit of the horoball V = {lambda >= h}.

Gens(h) holds one matrix Mat(a/c) per cusp a/c in the fundamental cell with
norm(c) <= 1/h^2.  Relations come from every triple A(V), (T_s B)(V), V with a
common point, each rewritten as B^-1 T_-s A T_r C T_t = 1, plus one inversion
relation A T_r C T_t = 1 per generator.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .coverage import DEFAULT_GRID, DEFAULT_GRID_CAP, CoverResult, check_cover_with_retry
from .geometry import Circle, Cusp, apex_reaches, circ, form, spheres_intersect
from .matrix import GroupElement
from .ring import (
    QuadInt,
    RingParams,
    enumerate_all_norm_le,
    enumerate_norm_le,
    exact_div,
    floor_div,
    inverse_mod,
    residue_reps,
)

log = logging.getLogger(__name__)

# Reference heights (4 decimals), read as exact rationals.
PACKAGED_HEIGHTS = {
    -2: Fraction("0.5000"),
    -7: Fraction("0.5000"),
    -11: Fraction("0.4220"),
    -19: Fraction("0.3218"),
    -43: Fraction("0.2071"),
    -67: Fraction("0.1690"),
    -163: Fraction("0.0982"),
}


class DecompositionError(ArithmeticError):
    pass


def mat_of_cusp(cusp: Cusp) -> GroupElement:
    """Canonical [[a, b], [c, d]] with d the residue representative of a^-1 mod c."""
    a, c = cusp.a, cusp.c
    d0 = inverse_mod(a, c)
    if d0 is None:
        raise ValueError(f"{a} and {c} are not coprime")
    b0 = exact_div(a * d0 - 1, c)
    return GroupElement(a, b0, c, d0)


@dataclass
class GenSet:
    params: RingParams
    h: Fraction
    gens: list[GroupElement] = field(default_factory=list)
    cusps: list[Cusp] = field(default_factory=list)
    index: dict[tuple, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.gens)

    def add(self, cusp: Cusp) -> None:
        self.index[cusp.key()] = len(self.gens)
        self.cusps.append(cusp)
        self.gens.append(mat_of_cusp(cusp))

    def circles(self) -> list[Circle]:
        return [c for c in (circ(cu, self.h) for cu in self.cusps) if c is not None]

    @property
    def depth(self) -> int:
        """Largest norm(c) among the generators."""
        return max((cu.c.norm() for cu in self.cusps), default=0)

    @property
    def search_depth(self) -> int:
        """The denominator search horizon floor(1/h^2)."""
        return norm_bound(self.h)


def norm_bound(h: Fraction) -> int:
    h = Fraction(h)
    return math.floor(1 / (h * h))


def build_gens(params: RingParams, h: Fraction) -> GenSet:
    h = Fraction(h)
    if h <= 0:
        raise ValueError("height must be positive")
    gs = GenSet(params, h)
    for c in enumerate_norm_le(params, norm_bound(h)):
        for a in residue_reps(c):
            if inverse_mod(a, c) is not None:
                gs.add(Cusp(a, c, check=False))
    return gs


def find_generators(
    params: RingParams, h: Fraction, grid_n: int = DEFAULT_GRID, grid_cap: int = DEFAULT_GRID_CAP
) -> tuple[GenSet, CoverResult]:
    gs = build_gens(params, h)
    return gs, check_cover_with_retry(params, gs.circles(), grid_n, grid_cap)


def _isqrt_ceil(m: int) -> int:
    s = isqrt(m)
    return s if s * s == m else s + 1


def tang_bound_sq(c: QuadInt, h: Fraction) -> Fraction:
    """Rational upper bound for (1/(|c| h) + |1 + w|)^2."""
    h = Fraction(h)
    N = c.norm()
    if N == 0 or h <= 0:
        raise ValueError("need c != 0 and h > 0")
    N1 = (1 + c.params.omega).norm()
    # cross term 2 sqrt(N1/N) / h, with sqrt(N1*N) rounded up
    return 1 / (N * h * h) + Fraction(2 * _isqrt_ceil(N1 * N), N) / h + N1


def decompose(sigma: GroupElement, gs: GenSet) -> tuple[QuadInt, int, QuadInt]:
    """(r, C, t) with sigma = T_r * gens[C] * T_t."""
    if not sigma.c:
        raise DecompositionError("sigma fixes infinity")
    if not sigma.c.is_canonical():
        sigma = -sigma
    q, a_red = floor_div(sigma.a, sigma.c)
    key = (a_red.x, a_red.y, sigma.c.x, sigma.c.y)
    pos = gs.index.get(key)
    if pos is None:
        raise DecompositionError(f"no generator with basepoint ({a_red})/({sigma.c}); norm {sigma.c.norm()}")
    g = gs.gens[pos]
    rest = g.inverse() * GroupElement.translation(-q) * sigma
    if rest.c or not (rest.a == rest.d and (rest.a == 1 or rest.a == -1)):
        raise DecompositionError(f"remainder {rest!r} is not a translation")
    t = rest.b if rest.a == 1 else -rest.b
    return q, pos, t


@dataclass(frozen=True)
class RawRelation:
    """kind 'inversion': A T_r C T_t = 1.   kind 'triple': B^-1 T_-s A T_r C T_t = 1."""

    kind: str
    A: int
    r: QuadInt
    C: int
    t: QuadInt
    B: int | None = None
    s: QuadInt | None = None

    def matrix(self, gs: GenSet) -> GroupElement:
        T = GroupElement.translation
        tail = gs.gens[self.A] * T(self.r) * gs.gens[self.C] * T(self.t)
        if self.kind == "inversion":
            return tail
        return gs.gens[self.B].inverse() * T(-self.s) * tail


def _ball_radius(c: QuadInt, h: Fraction) -> Fraction:
    return 1 / (2 * h * c.norm())


def triple_meets(gs: GenSet, ia: int, ib: int, s: QuadInt) -> bool:
    """Whether A(V), (T_s B)(V) and the closed half-space V share a point."""
    h = gs.h
    ca, cb = gs.cusps[ia], gs.cusps[ib]
    ua, va = ca.coords()
    ub, vb = cb.coords()
    d2 = form(gs.params, ua - ub - s.x, va - vb - s.y)
    ra, rb = _ball_radius(ca.c, h), _ball_radius(cb.c, h)
    if not spheres_intersect(ra, rb, d2)[0]:
        return False
    return apex_reaches(ra, rb, d2, h)


class _Geometry:
    """Float positions and reach radii used only to discard far-apart pairs."""

    def __init__(self, gs: GenSet):
        p = gs.params
        h = float(gs.h)
        self.sq = math.sqrt(p.disc) / 2
        self.half_t = p.t / 2
        coords = [cu.coords() for cu in gs.cusps]
        u = np.array([float(a) for a, _ in coords])
        v = np.array([float(b) for _, b in coords])
        self.X = u + self.half_t * v
        self.Y = self.sq * v
        norms = np.array([cu.c.norm() for cu in gs.cusps], dtype=float)
        self.r = 1 / (2 * h * norms)
        # horizontal reach of ball-above-h
        self.rho = np.where(self.r >= h, self.r, np.sqrt(np.maximum(2 * self.r * h - h * h, 0.0)))
        rho_max = float(self.rho.max()) if len(self.rho) else 0.0
        # translates (B, s) whose reach disc can come near D
        max_norm_shift = tang_bound_sq(p.one, gs.h)
        shifts = enumerate_all_norm_le(p, math.floor(max_norm_shift))
        sx = np.array([float(s.x) for s in shifts])
        sy = np.array([float(s.y) for s in shifts])
        SX = sx + self.half_t * sy
        SY = self.sq * sy
        # bounding box of D in Cartesian coordinates
        xs = [0.0, 1.0, self.half_t, 1 + self.half_t]
        lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), 0.0, self.sq
        reach = 2 * rho_max + 1e-6
        bi, si = np.meshgrid(np.arange(len(gs)), np.arange(len(shifts)), indexing="ij")
        PX = self.X[bi] + SX[si]
        PY = self.Y[bi] + SY[si]
        keep = (PX >= lo_x - reach) & (PX <= hi_x + reach) & (PY >= lo_y - reach) & (PY <= hi_y + reach)
        self.tb = bi[keep]
        self.ts = si[keep]
        self.tX = PX[keep]
        self.tY = PY[keep]
        self.shifts = shifts
        self.h = h

    def candidates(self, ia: int) -> list[tuple[int, int]]:
        dx = self.tX - self.X[ia]
        dy = self.tY - self.Y[ia]
        d2 = dx * dx + dy * dy
        rb = self.r[self.tb]
        ra = self.r[ia]
        reach = self.rho[ia] + self.rho[self.tb]
        ok = (d2 <= reach * reach * (1 + 1e-9) + 1e-12) & (d2 <= 4 * ra * rb * (1 + 1e-9) + 1e-12)
        # float apex height; the radicand cancels near tangency (error ~ sqrt(eps)),
        # so pad it and keep a wide margin.  The exact test decides.
        big = np.maximum(ra, rb)
        small = np.minimum(ra, rb)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = ((big + small) + np.sqrt(np.maximum(4 * big * small - d2, 0.0) + 1e-12)) / (
                2 * (1 + (small - big) ** 2 / d2)
            )
        apex = np.where(d2 <= 4 * small * (big - small) * (1 + 1e-9), 2 * small, k)
        ok &= ~(apex < self.h * (1 - 1e-6))
        idx = np.nonzero(ok)[0]
        return [(int(self.tb[i]), int(self.ts[i])) for i in idx]


def _relations_for(gs: GenSet, geo: _Geometry, ia: int) -> list[RawRelation]:
    T = GroupElement.translation
    A = gs.gens[ia]
    out = []
    r, ic, t = decompose(A.inverse(), gs)
    rel = RawRelation("inversion", ia, r, ic, t)
    assert rel.matrix(gs).is_identity(), rel
    out.append(rel)
    bound = tang_bound_sq(gs.cusps[ia].c, gs.h)
    Ainv = A.inverse()
    for ib, si in sorted(geo.candidates(ia), key=lambda p: (p[0], geo.shifts[p[1]].norm(), geo.shifts[p[1]].x, geo.shifts[p[1]].y)):
        s = geo.shifts[si]
        if ib == ia and not s:
            continue
        if s.norm() > bound:
            continue
        if not triple_meets(gs, ia, ib, s):
            continue
        prod = Ainv * T(s) * gs.gens[ib]
        r, ic, t = decompose(prod, gs)
        rel = RawRelation("triple", ia, r, ic, t, B=ib, s=s)
        assert rel.matrix(gs).is_identity(), rel
        out.append(rel)
    return out


_worker_state: dict = {}


def _init_worker(gs: GenSet) -> None:
    _worker_state["gs"] = gs
    _worker_state["geo"] = _Geometry(gs)


def _worker_chunk(ids: list[int]) -> list[list[RawRelation]]:
    gs, geo = _worker_state["gs"], _worker_state["geo"]
    return [_relations_for(gs, geo, ia) for ia in ids]


def find_relations(gs: GenSet, workers: int = 1) -> list[RawRelation]:
    """All inversion and triple relations, in generator order; every one matrix-checked."""
    if not gs.gens:
        return []
    n = len(gs)
    if workers <= 1:
        geo = _Geometry(gs)
        per_a = [_relations_for(gs, geo, ia) for ia in range(n)]
    else:
        chunks = [list(range(k, n, workers)) for k in range(workers)]
        per_a = [None] * n
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(gs,)) as ex:
            for ids, res in zip(chunks, ex.map(_worker_chunk, chunks)):
                for ia, rels in zip(ids, res):
                    per_a[ia] = rels
    return [rel for rels in per_a for rel in rels]
