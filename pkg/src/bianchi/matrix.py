"""2x2 matrices over O_d with determinant 1, compared up to sign (PSL_2)."""

from __future__ import annotations

from .ring import QuadInt, RingParams


class GroupElement:
    __slots__ = ("a", "b", "c", "d", "_key")

    def __init__(self, a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt, check: bool = True):
        self.a, self.b, self.c, self.d = a, b, c, d
        self._key = None
        if check and a * d - b * c != 1:
            raise ValueError(f"determinant of {self!r} is not 1")

    @classmethod
    def from_ints(cls, params: RingParams, entries, check: bool = True) -> "GroupElement":
        """entries: four (x, y) pairs or ints, row-major."""
        vals = []
        for e in entries:
            if isinstance(e, int):
                vals.append(QuadInt(e, 0, params))
            else:
                vals.append(QuadInt(e[0], e[1], params))
        return cls(*vals, check=check)

    @classmethod
    def identity(cls, params: RingParams) -> "GroupElement":
        return cls(params.one, params.zero, params.zero, params.one, check=False)

    @classmethod
    def translation(cls, s: QuadInt) -> "GroupElement":
        p = s.params
        return cls(p.one, s, p.zero, p.one, check=False)

    @property
    def params(self) -> RingParams:
        return self.a.params

    def entries(self) -> tuple[QuadInt, QuadInt, QuadInt, QuadInt]:
        return self.a, self.b, self.c, self.d

    def __mul__(self, o: "GroupElement") -> "GroupElement":
        a, b, c, d = self.a, self.b, self.c, self.d
        return GroupElement(
            a * o.a + b * o.c,
            a * o.b + b * o.d,
            c * o.a + d * o.c,
            c * o.b + d * o.d,
            check=False,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a, check=False)

    def __neg__(self) -> "GroupElement":
        return GroupElement(-self.a, -self.b, -self.c, -self.d, check=False)

    def __pow__(self, e: int) -> "GroupElement":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = GroupElement.identity(self.params)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def det(self) -> QuadInt:
        return self.a * self.d - self.b * self.c

    def is_identity(self) -> bool:
        """True for +I and -I."""
        return (
            not self.b
            and not self.c
            and self.a == self.d
            and (self.a == 1 or self.a == -1)
        )

    def fixes_infinity(self) -> bool:
        return not self.c

    def normalized(self) -> "GroupElement":
        """Sign representative: first nonzero of (c, a, b) is canonical."""
        for e in (self.c, self.a, self.b):
            if e:
                return self if e.is_canonical() else -self
        return self

    def key(self) -> tuple:
        if self._key is None:
            n = self.normalized()
            self._key = tuple((e.x, e.y) for e in n.entries())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.params == other.params and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"
