from .presentation import (
    Presentation,
    PresentationFormatError,
    dump,
    dumps,
    load,
    loads,
    raw_presentation,
    relation_word,
    relator_words,
    to_cas,
)
from .snf import AbelianInvariants, abelian_invariants_from_rows, smith_normal_form
from .tietze import tietze_cleanup
from .words import T1, TW, Word, evaluate_word, parse_word, word_from_shift


def exponent_rows(p: Presentation) -> list[dict[int, int]]:
    col = {g: k for k, g in enumerate(p.names)}
    return [{col[g]: e for g, e in r.exponent_sums().items()} for r in p.relators]


def abelianize(p: Presentation) -> AbelianInvariants:
    """Invariants of the abelianization from the relator exponent-sum matrix."""
    return abelian_invariants_from_rows(exponent_rows(p), len(p.generators))


__all__ = [
    "AbelianInvariants",
    "Presentation",
    "PresentationFormatError",
    "T1",
    "TW",
    "Word",
    "abelianize",
    "abelian_invariants_from_rows",
    "dump",
    "dumps",
    "evaluate_word",
    "exponent_rows",
    "load",
    "loads",
    "parse_word",
    "raw_presentation",
    "relation_word",
    "relator_words",
    "smith_normal_form",
    "tietze_cleanup",
    "to_cas",
    "word_from_shift",
]
