"""Group words over named generators and their evaluation as matrices."""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from ..matrix import GroupElement
from ..ring import QuadInt

T1 = "T1"
TW = "Tw"


class Word:
    """Freely reduced product of letters (generator name, nonzero exponent)."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        self.letters = _reduce(letters)

    @classmethod
    def gen(cls, name: str, e: int = 1) -> "Word":
        return cls([(name, e)])

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __len__(self) -> int:
        """Length as a count of generator symbols, i.e. sum of |exponents|."""
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sums(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g, e in self.letters:
            out[g] = out.get(g, 0) + e
        return {g: e for g, e in out.items() if e}

    def cyclically_reduced(self) -> "Word":
        lt = list(self.letters)
        while len(lt) >= 2 and lt[0][0] == lt[-1][0]:
            g = lt[0][0]
            e = lt[0][1] + lt[-1][1]
            lt = lt[1:-1]
            if e:
                lt = [(g, e)] + lt
        return Word(lt)

    def substitute(self, name: str, replacement: "Word") -> "Word":
        out: list[tuple[str, int]] = []
        for g, e in self.letters:
            if g == name:
                out.extend((replacement ** e).letters)
            else:
                out.append((g, e))
        return Word(out)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def _reduce(letters) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for g, e in letters:
        if not e:
            continue
        if stack and stack[-1][0] == g:
            e2 = stack[-1][1] + e
            stack.pop()
            if e2:
                stack.append((g, e2))
        else:
            stack.append((g, e))
    return tuple(stack)


_TOKEN = re.compile(r"\s*(?:(\()|(\))(?:\^(-?\d+))?|([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?|(\*))")


def parse_word(text: str) -> Word:
    """Parse 'A^-1 (B U^2)^3 C'.  Juxtaposition or '*' multiplies; '1' is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return Word()
    stack: list[list[tuple[str, int]]] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        pos = m.end()
        lpar, rpar, rexp, name, nexp, _star = m.groups()
        if lpar:
            stack.append([])
        elif rpar:
            if len(stack) < 2:
                raise ValueError(f"unbalanced ')' in {text!r}")
            inner = Word(stack.pop()) ** int(rexp or 1)
            stack[-1].extend(inner.letters)
        elif name:
            stack[-1].append((name, int(nexp or 1)))
    if len(stack) != 1:
        raise ValueError(f"unbalanced '(' in {text!r}")
    return Word(stack[0])


def word_from_shift(s: QuadInt) -> Word:
    """T_s = T1^x Tw^y for s = x + y*w."""
    return Word([(T1, s.x), (TW, s.y)])


def parabolic_assignment(params) -> dict[str, GroupElement]:
    return {
        T1: GroupElement.translation(params.one),
        TW: GroupElement.translation(params.omega),
    }


def evaluate_word(w: Word, assignment: Mapping[str, GroupElement]) -> GroupElement:
    out = None
    for g, e in w.letters:
        try:
            m = assignment[g]
        except KeyError:
            raise KeyError(f"generator {g!r} has no matrix") from None
        f = m ** e
        out = f if out is None else out * f
    if out is None:
        any_m = next(iter(assignment.values()), None)
        if any_m is None:
            raise ValueError("cannot evaluate the empty word without an assignment")
        return GroupElement.identity(any_m.params)
    return out
