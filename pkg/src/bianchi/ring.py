"""Exact arithmetic in the ring of integers O_d = Z[w] of Q(sqrt(d)).

Elements are stored as integer pairs (x, y) meaning x + y*w, where
w = sqrt(d) when d = 2, 3 (mod 4) and w = (1 + sqrt(d))/2 when d = 1 (mod 4).
The two ring constants t = w + conj(w) and n = w*conj(w) give w^2 = t*w - n
and norm(x + y*w) = x^2 + t*x*y + n*y^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

SUPPORTED_D = (-2, -7, -11, -19, -43, -67, -163)
UNIT_D = (-1, -3)


class UnsupportedRingError(ValueError):
    pass


@dataclass(frozen=True)
class RingParams:
    d: int
    t: int
    n: int

    @property
    def disc(self) -> int:
        """4n - t^2, so that |x + y*w|^2 = ((2x + t*y)^2 + disc*y^2) / 4."""
        return 4 * self.n - self.t * self.t

    def __call__(self, x: int = 0, y: int = 0) -> "QuadInt":
        return QuadInt(x, y, self)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(1, 0, self)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(0, 1, self)

    def __repr__(self) -> str:
        return f"RingParams(d={self.d})"


def _squarefree(m: int) -> bool:
    m = abs(m)
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


@lru_cache(maxsize=None)
def make_params(d: int) -> RingParams:
    """Ring constants for any negative square-free d, units or not.

    Used directly only for checking published data for d = -1, -3; the
    pipeline goes through :func:`ring_params`.
    """
    if d >= 0 or not _squarefree(d):
        raise UnsupportedRingError(f"d={d} is not a negative square-free integer")
    if d % 4 == 1:
        return RingParams(d, 1, (1 - d) // 4)
    return RingParams(d, 0, -d)


def ring_params(d: int) -> RingParams:
    if d in UNIT_D:
        raise UnsupportedRingError(
            f"d={d}: O_d has non-trivial units; the horoball method here assumes units are +-1 only"
        )
    if d not in SUPPORTED_D:
        raise UnsupportedRingError(
            f"d={d} is not one of the class-number-one fields without extra units {SUPPORTED_D}"
        )
    return make_params(d)


@dataclass(frozen=True)
class QuadInt:
    x: int
    y: int
    params: RingParams

    def _lift(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.params != self.params:
                raise ValueError(f"mixed rings: {self.params} and {other.params}")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.params)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x + o.x, self.y + o.y, self.params)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x - o.x, self.y - o.y, self.params)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.x, -self.y, self.params)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t, n = self.params.t, self.params.n
        # w^2 = t*w - n
        yy = self.y * o.y
        return QuadInt(
            self.x * o.x - n * yy,
            self.x * o.y + self.y * o.x + t * yy,
            self.params,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QuadInt":
        if e < 0:
            raise ValueError("negative powers are not ring elements")
        out = self.params.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.x or self.y)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.y == 0 and self.x == other
        if isinstance(other, QuadInt):
            return self.x == other.x and self.y == other.y and self.params == other.params
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.params.d))

    def conj(self) -> "QuadInt":
        return QuadInt(self.x + self.params.t * self.y, -self.y, self.params)

    def norm(self) -> int:
        return self.x * self.x + self.params.t * self.x * self.y + self.params.n * self.y * self.y

    def is_canonical(self) -> bool:
        """Sign convention for elements up to +-1: y > 0, or y = 0 and x > 0."""
        return self.y > 0 or (self.y == 0 and self.x > 0)

    def canonical(self) -> "QuadInt":
        return self if self.is_canonical() or not self else -self

    def __repr__(self) -> str:
        return format_quad(self.x, self.y)

    def __str__(self) -> str:
        return format_quad(self.x, self.y)


def format_quad(x, y, w: str = "w") -> str:
    if y == 0:
        return str(x)
    ypart = w if y == 1 else f"-{w}" if y == -1 else f"{y}*{w}"
    if x == 0:
        return ypart
    if ypart.startswith("-"):
        return f"{x}{ypart}"
    return f"{x}+{ypart}"


def conj(a: QuadInt) -> QuadInt:
    return a.conj()


def norm(a: QuadInt) -> int:
    return a.norm()


def mul(a: QuadInt, b: QuadInt) -> QuadInt:
    return a * b


def quotient_coords(a: QuadInt, c: QuadInt) -> tuple[Fraction, Fraction]:
    """Exact coordinates (u, v) with a/c = u + v*w."""
    num_x, num_y, nc = _quotient_numerators(a, c)
    return Fraction(num_x, nc), Fraction(num_y, nc)


def _quotient_numerators(a: QuadInt, c: QuadInt) -> tuple[int, int, int]:
    # a * conj(c) = X + Y*w, a/c = (X + Y*w) / norm(c)
    p = a.params
    nc = c.norm()
    if nc == 0:
        raise ZeroDivisionError("division by zero in O_d")
    X = a.x * c.x + p.t * a.x * c.y + p.n * a.y * c.y
    Y = c.x * a.y - a.x * c.y
    return X, Y, nc


def floor_div(a: QuadInt, c: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Return (q, r) with a = q*c + r and r/c in the half-open cell [0,1) + [0,1)*w."""
    X, Y, nc = _quotient_numerators(a, c)
    q = QuadInt(X // nc, Y // nc, a.params)
    return q, a - q * c


def in_fundamental_domain(a: QuadInt, c: QuadInt) -> bool:
    X, Y, nc = _quotient_numerators(a, c)
    return 0 <= X < nc and 0 <= Y < nc


def exact_div(a: QuadInt, c: QuadInt) -> QuadInt:
    X, Y, nc = _quotient_numerators(a, c)
    if X % nc or Y % nc:
        raise ValueError(f"{c} does not divide {a}")
    return QuadInt(X // nc, Y // nc, a.params)


def divides(c: QuadInt, a: QuadInt) -> bool:
    X, Y, nc = _quotient_numerators(a, c)
    return X % nc == 0 and Y % nc == 0


@lru_cache(maxsize=4096)
def residue_reps(c: QuadInt) -> tuple[QuadInt, ...]:
    """All a with a/c in the fundamental cell; one per class of O_d / cO_d.

    Sorted by (y, x).  The set is c*D intersected with the lattice, so the
    scan box is the bounding box of the parallelogram 0, c, c*w, c + c*w.
    """
    if not c:
        raise ZeroDivisionError("residue classes modulo zero")
    p = c.params
    cw = c * p.omega
    corners = [(0, 0), (c.x, c.y), (cw.x, cw.y), (c.x + cw.x, c.y + cw.y)]
    xs = [u for u, _ in corners]
    ys = [v for _, v in corners]
    out = []
    for y in range(min(ys), max(ys) + 1):
        for x in range(min(xs), max(xs) + 1):
            a = QuadInt(x, y, p)
            if in_fundamental_domain(a, c):
                out.append(a)
    assert len(out) == c.norm(), (c, len(out))
    return tuple(out)


def reduce_mod(a: QuadInt, c: QuadInt) -> QuadInt:
    return floor_div(a, c)[1]


def inverse_mod(a: QuadInt, c: QuadInt) -> QuadInt | None:
    """The residue representative d0 of a^-1 mod c, or None if gcd(a, c) != 1."""
    for d0 in residue_reps(c):
        if divides(c, a * d0 - 1):
            return d0
    return None


def coprime(a: QuadInt, c: QuadInt) -> bool:
    return inverse_mod(a, c) is not None


def enumerate_norm_le(params: RingParams, bound: int) -> list[QuadInt]:
    """Nonzero elements of norm <= bound, one of each +- pair (canonical sign).

    Sorted by (norm, x, y).
    """
    if bound <= 0:
        return []
    t, disc = params.t, params.disc
    # 4*norm = (2x + t*y)^2 + disc*y^2
    ymax = isqrt(4 * bound // disc)
    out = []
    for y in range(0, ymax + 1):
        rem = 4 * bound - disc * y * y
        if rem < 0:
            continue
        s = isqrt(rem)
        lo = -((s + t * y) // 2)  # ceil((-s - t*y) / 2)
        hi = (s - t * y) // 2
        for x in range(lo, hi + 1):
            q = QuadInt(x, y, params)
            if q.is_canonical() and q.norm() <= bound:
                out.append(q)
    out.sort(key=lambda q: (q.norm(), q.x, q.y))
    return out


def enumerate_all_norm_le(params: RingParams, bound: int) -> list[QuadInt]:
    """Every element (both signs, including 0) of norm <= bound."""
    half = enumerate_norm_le(params, bound)
    return [params.zero] + half + [-q for q in half]
