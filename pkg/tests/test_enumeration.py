import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest

from bianchi.enumeration import (
    PACKAGED_HEIGHTS,
    DecompositionError,
    build_gens,
    decompose,
    find_relations,
    mat_of_cusp,
    norm_bound,
    tang_bound_sq,
    triple_meets,
)
from bianchi.geometry import Cusp, form
from bianchi.matrix import GroupElement
from bianchi.ring import QuadInt, enumerate_all_norm_le, floor_div, quotient_coords, ring_params

from .test_geometry import apex_oracle

F = Fraction


def test_mat_of_cusp_examples():
    p = ring_params(-2)
    two = QuadInt(2, 0, p)
    m = mat_of_cusp(Cusp(p.one, two))
    assert m.a == p.one and m.c == two and m.det() == p.one
    m = mat_of_cusp(Cusp(p.zero, p.one))
    assert m.entries() == (p.zero, -p.one, p.one, p.zero)


@pytest.mark.parametrize("d", [-2, -7, -19, -43])
def test_mat_of_cusp_properties(d):
    p = ring_params(d)
    gs = build_gens(p, PACKAGED_HEIGHTS[d])
    for cu, g in zip(gs.cusps, gs.gens):
        assert g.det() == p.one
        assert (g.a, g.c) == (cu.a, cu.c)
        # d is reduced modulo c
        assert floor_div(g.d, g.c)[1] == g.d


def _ideal_gcd_is_one(a, c):
    w = a.params.omega
    vecs = [(z.x, z.y) for z in (a, a * w, c, c * w)]
    g = 0
    for (x1, y1), (x2, y2) in itertools.combinations(vecs, 2):
        g = math.gcd(g, x1 * y2 - x2 * y1)
    return g == 1


@pytest.mark.parametrize("d", [-2, -7, -11, -19])
def test_build_gens_vs_naive_cusp_scan(d):
    p = ring_params(d)
    h = PACKAGED_HEIGHTS[d]
    B = norm_bound(h)
    naive = set()
    R = 12
    for cx in range(-R, R + 1):
        for cy in range(-R, R + 1):
            c = QuadInt(cx, cy, p)
            if not c or c.norm() > B or not c.is_canonical():
                continue
            for ax in range(-2 * R, 2 * R + 1):
                for ay in range(-2 * R, 2 * R + 1):
                    a = QuadInt(ax, ay, p)
                    u, v = quotient_coords(a, c)
                    if 0 <= u < 1 and 0 <= v < 1 and _ideal_gcd_is_one(a, c):
                        naive.add((ax, ay, cx, cy))
    gs = build_gens(p, h)
    assert set(gs.index) == naive
    assert len(gs.index) == len(gs)


def test_norm_bound_and_search_depth():
    assert norm_bound(F(1, 2)) == 4
    assert norm_bound(F("0.0982")) == 103
    with pytest.raises(ValueError):
        build_gens(ring_params(-2), F(0))


def test_tang_bound_dominates_real_value():
    for d in (-2, -7, -19, -163):
        p = ring_params(d)
        n1 = (1 + p.omega).norm()
        for c in enumerate_all_norm_le(p, 40)[1:]:
            for h in (F(1, 2), F(1, 7), F(3, 10)):
                exact = (1 / (math.sqrt(c.norm()) * float(h)) + math.sqrt(n1)) ** 2
                got = tang_bound_sq(c, h)
                assert got >= exact * (1 - 1e-12)
                assert got <= exact + 2 / (c.norm() * float(h)) + 1e-9
    with pytest.raises(ValueError):
        tang_bound_sq(ring_params(-2).zero, F(1, 2))


@pytest.mark.parametrize("d", [-2, -7, -19, -43])
def test_decompose_round_trip(d):
    p = ring_params(d)
    gs = build_gens(p, PACKAGED_HEIGHTS[d])
    rng = random.Random(d)
    T = GroupElement.translation
    for _ in range(60):
        r = QuadInt(rng.randint(-5, 5), rng.randint(-5, 5), p)
        t = QuadInt(rng.randint(-5, 5), rng.randint(-5, 5), p)
        k = rng.randrange(len(gs))
        sigma = T(r) * gs.gens[k] * T(t)
        if rng.random() < 0.5:
            sigma = -sigma
        r2, k2, t2 = decompose(sigma, gs)
        assert (r2, k2, t2) == (r, k, t)
        assert T(r2) * gs.gens[k2] * T(t2) == sigma


def test_decompose_rejects():
    p = ring_params(-2)
    gs = build_gens(p, F(1, 2))
    with pytest.raises(DecompositionError):
        decompose(GroupElement.translation(p.one), gs)
    far = mat_of_cusp(Cusp(p.one, QuadInt(7, 0, p)))
    with pytest.raises(DecompositionError):
        decompose(far, gs)


def _meets_oracle(gs, ia, ib, s):
    h = gs.h
    ca, cb = gs.cusps[ia], gs.cusps[ib]
    ua, va = ca.coords()
    ub, vb = cb.coords()
    d2 = form(gs.params, ua - ub - s.x, va - vb - s.y)
    ra = 1 / (2 * h * ca.c.norm())
    rb = 1 / (2 * h * cb.c.norm())
    ap = apex_oracle(ra, rb, d2)
    if ap is None:
        return False
    hm = mpmath.mpf(h.numerator) / h.denominator
    if abs(ap - hm) < mpmath.mpf("1e-30"):
        return triple_meets(gs, ia, ib, s)  # genuine tie: exact arithmetic decides
    return ap >= hm


@pytest.mark.parametrize("d,h", [(-2, F(1, 2)), (-7, F(1, 2)), (-11, PACKAGED_HEIGHTS[-11]), (-19, PACKAGED_HEIGHTS[-19]), (-7, F(2, 5))])
def test_tang_bound_is_exhaustive(d, h):
    """Brute force over all pairs and all shifts out to twice the bound radius."""
    p = ring_params(d)
    gs = build_gens(p, h)
    rels = find_relations(gs)
    found = {(r.A, r.B, r.s) for r in rels if r.kind == "triple"}
    brute = set()
    for ia in range(len(gs)):
        wide = math.floor(4 * tang_bound_sq(gs.cusps[ia].c, h))
        for s in enumerate_all_norm_le(p, wide):
            for ib in range(len(gs)):
                if ib == ia and not s:
                    continue
                if _meets_oracle(gs, ia, ib, s):
                    assert s.norm() <= tang_bound_sq(gs.cusps[ia].c, h)
                    brute.add((ia, ib, s))
    assert found == brute


@pytest.mark.parametrize("d", [-2, -7, -11, -19, -43])
def test_every_relation_is_identity(d):
    p = ring_params(d)
    gs = build_gens(p, PACKAGED_HEIGHTS[d])
    rels = find_relations(gs)
    assert sum(r.kind == "inversion" for r in rels) == len(gs)
    for rel in rels:
        assert rel.matrix(gs).is_identity()


@pytest.mark.parametrize("d", [-7, -19, -43])
def test_triples_are_symmetric(d):
    # A(V), T_s B(V), V meet  <=>  T_-s A(V), B(V), V meet
    p = ring_params(d)
    gs = build_gens(p, PACKAGED_HEIGHTS[d])
    found = {(r.A, r.B, r.s) for r in find_relations(gs) if r.kind == "triple"}
    assert found
    for a, b, s in found:
        assert (b, a, -s) in found


def test_relations_deterministic_and_worker_independent():
    p = ring_params(-19)
    gs = build_gens(p, PACKAGED_HEIGHTS[-19])
    one = find_relations(gs)
    assert one == find_relations(gs)
    assert one == find_relations(gs, workers=2)
