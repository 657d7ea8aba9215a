"""Presentations with a matrix for every generator, and their file formats.

Native format (one record per line, '#' starts a comment)::

    bianchi-presentation 1
    d -43
    h 207/1000
    gen A (1,0) (1,0) (0,0) (1,0)
    rel B^2
    rel (B A)^3

Matrix entries are (x, y) meaning x + y*w, listed row-major.  Relator lines
use the word syntax of :func:`parse_word`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..enumeration import GenSet, RawRelation
from ..matrix import GroupElement
from ..ring import make_params
from .words import T1, TW, Word, evaluate_word, parabolic_assignment, parse_word, word_from_shift

FORMAT_HEADER = "bianchi-presentation"
FORMAT_VERSION = 1


class PresentationFormatError(ValueError):
    pass


@dataclass
class Presentation:
    d: int
    generators: dict[str, GroupElement]
    relators: list[Word]
    h: Fraction | None = None
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.generators)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def bad_determinants(self) -> list[str]:
        return [name for name, m in self.generators.items() if m.det() != 1]

    def verify(self) -> list[bool]:
        """Per-relator flag: evaluates to +-I under the generator matrices."""
        return [evaluate_word(r, self.generators).is_identity() for r in self.relators]


def gen_name(i: int) -> str:
    return f"g{i}"


def relation_word(rel: RawRelation) -> Word:
    A, C = Word.gen(gen_name(rel.A)), Word.gen(gen_name(rel.C))
    tail = A * word_from_shift(rel.r) * C * word_from_shift(rel.t)
    if rel.kind == "inversion":
        return tail
    B = Word.gen(gen_name(rel.B))
    return B.inverse() * word_from_shift(-rel.s) * tail


def commutator_word() -> Word:
    return Word([(T1, 1), (TW, 1), (T1, -1), (TW, -1)])


def relator_words(raw: list[RawRelation]) -> list[Word]:
    """Words for the raw relations plus the T1/Tw commutator, identical words removed."""
    out, seen = [], set()
    for w in [relation_word(r) for r in raw] + [commutator_word()]:
        if w and w not in seen:
            seen.add(w)
            out.append(w)
    return out


def raw_presentation(gs: GenSet, raw: list[RawRelation]) -> Presentation:
    gens = parabolic_assignment(gs.params)
    for i, g in enumerate(gs.gens):
        gens[gen_name(i)] = g
    return Presentation(gs.params.d, gens, relator_words(raw), gs.h)


# -- native text format ------------------------------------------------------

_ENTRY = re.compile(r"\((-?\d+),\s*(-?\d+)\)")


def _fmt_entry(q) -> str:
    return f"({q.x},{q.y})"


def dumps(p: Presentation) -> str:
    lines = [f"{FORMAT_HEADER} {FORMAT_VERSION}", f"d {p.d}"]
    if p.h is not None:
        lines.append(f"h {p.h}")
    for k, v in p.meta.items():
        lines.append(f"meta {k} {v}")
    for name, m in p.generators.items():
        lines.append(f"gen {name} " + " ".join(_fmt_entry(e) for e in m.entries()))
    for r in p.relators:
        lines.append(f"rel {r}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Presentation:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise PresentationFormatError("empty presentation file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != FORMAT_HEADER:
        raise PresentationFormatError(f"missing '{FORMAT_HEADER} <version>' header")
    if int(head[1]) != FORMAT_VERSION:
        raise PresentationFormatError(f"unsupported format version {head[1]}")
    d = h = None
    meta: dict[str, str] = {}
    gens: dict[str, GroupElement] = {}
    rels: list[Word] = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        try:
            if key == "d":
                d = int(rest)
            elif key == "h":
                h = Fraction(rest.strip())
            elif key == "meta":
                k, _, v = rest.partition(" ")
                meta[k] = v
            elif key == "gen":
                if d is None:
                    raise PresentationFormatError("'gen' before 'd'")
                name, _, ents = rest.partition(" ")
                vals = [(int(x), int(y)) for x, y in _ENTRY.findall(ents)]
                if len(vals) != 4:
                    raise PresentationFormatError(f"generator {name} needs four entries")
                gens[name] = GroupElement.from_ints(make_params(d), vals, check=False)
            elif key == "rel":
                rels.append(parse_word(rest))
            else:
                raise PresentationFormatError(f"unknown record {key!r}")
        except PresentationFormatError:
            raise
        except ValueError as exc:
            raise PresentationFormatError(f"bad line {ln!r}: {exc}") from exc
    if d is None:
        raise PresentationFormatError("missing 'd' record")
    for r in rels:
        missing = r.generators() - gens.keys()
        if missing:
            raise PresentationFormatError(f"relator {r} uses undeclared generators {sorted(missing)}")
    return Presentation(d, gens, rels, h, meta)


def load(path) -> Presentation:
    return loads(Path(path).read_text())


def dump(p: Presentation, path) -> None:
    Path(path).write_text(dumps(p))


# -- computer algebra export -------------------------------------------------


def _cas_word(w: Word) -> str:
    if not w.letters:
        return "Id(F)"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in w.letters)


def to_cas(p: Presentation) -> str:
    """Finitely presented group in Magma syntax."""
    names = p.names
    body = ",\n    ".join(_cas_word(r) for r in p.relators)
    return (
        f"// PSL_2(O_{p.d}); {len(names)} generators, {len(p.relators)} relators\n"
        f"F<{','.join(names)}> := FreeGroup({len(names)});\n"
        f"G := quo< F |\n    {body}\n>;\n"
    )
