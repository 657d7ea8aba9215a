"""Exact horoball geometry in the upper half-space model of H^3.

Points of the boundary plane are elements of Q(w), stored as rational
coordinates in the basis {1, w}.  Every predicate here is decided with
rational arithmetic; square roots only appear inside :func:`compare_sqrt`,
which squares after a sign analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .matrix import GroupElement
from .ring import QuadInt, RingParams, floor_div, inverse_mod, quotient_coords


@dataclass(frozen=True)
class QuadRat:
    """x + y*w with rational x, y."""

    x: Fraction
    y: Fraction
    params: RingParams

    @classmethod
    def of(cls, v, params: RingParams) -> "QuadRat":
        if isinstance(v, QuadRat):
            return v
        if isinstance(v, QuadInt):
            return cls(Fraction(v.x), Fraction(v.y), v.params)
        return cls(Fraction(v), Fraction(0), params)

    def __add__(self, o):
        o = QuadRat.of(o, self.params)
        return QuadRat(self.x + o.x, self.y + o.y, self.params)

    __radd__ = __add__

    def __sub__(self, o):
        o = QuadRat.of(o, self.params)
        return QuadRat(self.x - o.x, self.y - o.y, self.params)

    def __rsub__(self, o):
        return QuadRat.of(o, self.params) - self

    def __neg__(self):
        return QuadRat(-self.x, -self.y, self.params)

    def __mul__(self, o):
        o = QuadRat.of(o, self.params)
        t, n = self.params.t, self.params.n
        yy = self.y * o.y
        return QuadRat(self.x * o.x - n * yy, self.x * o.y + self.y * o.x + t * yy, self.params)

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        return QuadRat(self.x + self.params.t * self.y, -self.y, self.params)

    def abs2(self) -> Fraction:
        return form(self.params, self.x, self.y)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return QuadRat(self.x / o, self.y / o, self.params)
        o = QuadRat.of(o, self.params)
        return (self * o.conj()) / o.abs2()

    def to_complex(self) -> complex:
        p = self.params
        return complex(float(self.x) + float(self.y) * p.t / 2, float(self.y) * (p.disc ** 0.5) / 2)


def form(params: RingParams, u, v):
    """|u + v*w|^2 for rational coordinates."""
    return u * u + params.t * u * v + params.n * v * v


@dataclass(frozen=True)
class Point3:
    z: QuadRat
    lam: Fraction

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("points of H^3 need lambda > 0")


class Cusp:
    """A reduced fraction a/c of O_d with the representative a/c in the fundamental cell."""

    __slots__ = ("a", "c")

    def __init__(self, a: QuadInt, c: QuadInt, check: bool = True):
        if not c:
            raise ZeroDivisionError("cusp with zero denominator")
        if not c.is_canonical():
            a, c = -a, -c
        a = floor_div(a, c)[1]
        if check and inverse_mod(a, c) is None:
            raise ValueError(f"{a}/{c} is not a reduced fraction")
        self.a, self.c = a, c

    @property
    def params(self) -> RingParams:
        return self.c.params

    def coords(self) -> tuple[Fraction, Fraction]:
        return quotient_coords(self.a, self.c)

    def key(self) -> tuple:
        return (self.a.x, self.a.y, self.c.x, self.c.y)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cusp) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Cusp(({self.a})/({self.c}))"


@dataclass(frozen=True)
class Horoball:
    basepoint: Cusp | None  # None means infinity
    size: Fraction  # Euclidean diameter, or height when based at infinity

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError("horoball size must be positive")


@dataclass(frozen=True)
class Circle:
    center: tuple[Fraction, Fraction]
    radius_sq: Fraction


def horoball_image(sigma: GroupElement, h: Fraction) -> Horoball:
    """sigma(V) for V = {lambda >= h}.  The basepoint is stored reduced into the
    fundamental cell, so the result is exact only up to a translation of O_d."""
    h = Fraction(h)
    if h <= 0:
        raise ValueError("height must be positive")
    if not sigma.c:
        raise ValueError("sigma fixes infinity; its image of V is again a half-space")
    return Horoball(Cusp(sigma.a, sigma.c), 1 / (h * sigma.c.norm()))


def circ(cusp: Cusp, h: Fraction) -> Circle | None:
    """Disc cut out of the horosphere at height h by the horoball at the cusp."""
    h = Fraction(h)
    rsq = Fraction(1, cusp.c.norm()) - h * h
    if rsq <= 0:
        return None
    return Circle(cusp.coords(), rsq)


def spheres_intersect(r: Fraction, s: Fraction, dist_sq: Fraction) -> tuple[bool, bool]:
    """(meets, tangent) for closed balls of radii r, s resting on a common plane."""
    lim = 4 * r * s
    return dist_sq <= lim, dist_sq == lim


def compare_sqrt(p: Fraction, q: Fraction, k: Fraction, bound: Fraction) -> int:
    """Sign of p + q*sqrt(k) - bound, for k >= 0."""
    if k < 0:
        raise ValueError("negative radicand")
    x = p - bound
    if q == 0 or k == 0:
        return (x > 0) - (x < 0)
    if x >= 0 and q > 0:
        return 1
    if x <= 0 and q < 0:
        return -1
    # opposite signs: compare squares
    diff = x * x - q * q * k
    s = (diff > 0) - (diff < 0)
    return s if x > 0 else -s


def apex_reaches(r: Fraction, s: Fraction, dist_sq: Fraction, h: Fraction) -> bool:
    """Whether the closed balls of radii r, s (tangent to the plane, basepoints
    dist_sq^(1/2) apart) have a common point at height >= h."""
    if r < s:
        r, s = s, r
    if dist_sq > 4 * r * s:
        return False
    if dist_sq <= 4 * s * (r - s):
        return 2 * s >= h
    # highest intersection point: ((s + r) + sqrt(4sr - d^2)) / (2 (1 + ((s - r)/d)^2))
    denom = 2 * (1 + (s - r) ** 2 / dist_sq)
    return compare_sqrt(s + r, Fraction(1), 4 * s * r - dist_sq, h * denom) >= 0


def apex_height_float(r, s, dist_sq):
    """Floating-point apex height (or None when the balls miss); for diagnostics."""
    import math

    r, s, dist_sq = float(r), float(s), float(dist_sq)
    if r < s:
        r, s = s, r
    if dist_sq > 4 * r * s:
        return None
    if dist_sq <= 4 * s * (r - s):
        return 2 * s
    return ((s + r) + math.sqrt(4 * s * r - dist_sq)) / (2 * (1 + (s - r) ** 2 / dist_sq))


def mobius_apply(sigma: GroupElement, p: Point3) -> Point3:
    """Poincare extension of z -> (az + b)/(cz + d) to the upper half-space."""
    params = sigma.params
    a, b, c, d = (QuadRat.of(e, params) for e in sigma.entries())
    z, lam = p.z, p.lam
    cz_d = c * z + d
    denom = cz_d.abs2() + c.abs2() * lam * lam
    num = (a * z + b) * cz_d.conj() + a * c.conj() * (lam * lam)
    return Point3(num / denom, lam / denom)


def mobius_apply_as_printed(sigma: GroupElement, p: Point3) -> Point3:
    """The half-space action formula with the sign pattern
    ((d - conj(c) conj(z))(a z - b) - lambda^2 conj(c) a) / (|c z - d|^2 + lambda^2 |c|^2).

    Kept only so tests can show it disagrees with the horoball predictions.
    """
    params = sigma.params
    a, b, c, d = (QuadRat.of(e, params) for e in sigma.entries())
    z, lam = p.z, p.lam
    denom = (c * z - d).abs2() + lam * lam * c.abs2()
    num = (d - c.conj() * z.conj()) * (a * z - b) - c.conj() * a * (lam * lam)
    return Point3(num / denom, lam / denom)


def hyperbolic_distance_arg(p: Point3, q: Point3) -> Fraction:
    """cosh of the hyperbolic distance between p and q (exact)."""
    dz = (p.z - q.z).abs2()
    return 1 + (dz + (p.lam - q.lam) ** 2) / (2 * p.lam * q.lam)


def on_horosphere(ball: Horoball, p: Point3) -> int:
    """Sign of (distance to the ball's Euclidean centre)^2 - radius^2; 0 = on the sphere."""
    if ball.basepoint is None:
        diff = p.lam - ball.size
        return (diff > 0) - (diff < 0)
    u, v = ball.basepoint.coords()
    half = ball.size / 2
    zc = QuadRat(u, v, ball.basepoint.params)
    val = (p.z - zc).abs2() + (p.lam - half) ** 2 - half * half
    return (val > 0) - (val < 0)
