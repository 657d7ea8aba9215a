"""Best-effort presentation cleanup by Tietze moves.

Moves used, all of which preserve the group:
  * free and cyclic reduction of relators, dropping trivial ones;
  * dropping relators equal to another up to rotation and inversion;
  * eliminating a generator x that occurs exactly once, with exponent +-1,
    in some relator r = u x^e v: x is replaced by (v u)^-e everywhere, and r
    and x are removed.
"""

from __future__ import annotations

import logging
from collections import defaultdict

from .presentation import Presentation
from .words import Word

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 3
DEFAULT_MAX_SUBST = 12


def _canon(w: Word) -> tuple:
    """Key identifying w up to cyclic rotation and inversion."""
    best = None
    for cand in (w, w.inverse()):
        lt = cand.letters
        for k in range(len(lt)):
            rot = lt[k:] + lt[:k]
            if best is None or rot < best:
                best = rot
    return best or ()


def _tidy(relators: list[Word]) -> list[Word]:
    out, seen = [], set()
    for r in relators:
        r = r.cyclically_reduced()
        if not r:
            continue
        key = _canon(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def _solve_for(r: Word, x: str) -> Word | None:
    """If x occurs once in r with exponent +-1, return the word equal to x."""
    hits = [k for k, (g, _) in enumerate(r.letters) if g == x]
    if len(hits) != 1:
        return None
    k = hits[0]
    e = r.letters[k][1]
    if abs(e) != 1:
        return None
    u = Word(r.letters[:k])
    v = Word(r.letters[k + 1 :])
    # u x^e v = 1  =>  x^e = u^-1 v^-1 = (v u)^-1
    sub = (v * u).inverse()
    return sub if e == 1 else sub.inverse()


def tietze_cleanup(
    p: Presentation,
    budget: int = DEFAULT_BUDGET,
    max_subst: int = DEFAULT_MAX_SUBST,
    protected: frozenset[str] = frozenset(),
) -> Presentation:
    """Simplify p; stops after `budget` consecutive passes without progress."""
    gens = dict(p.generators)
    rels = _tidy(p.relators)
    stale = 0
    limit = max_subst
    while stale < budget:
        before = (len(gens), sum(len(r) for r in rels))
        occ: dict[str, set[int]] = defaultdict(set)
        for k, r in enumerate(rels):
            for g, _ in r.letters:
                occ[g].add(k)
        dead_rel: set[int] = set()
        touched: set[int] = set()
        for k in sorted(range(len(rels)), key=lambda k: len(rels[k])):
            if k in dead_rel or k in touched or len(rels[k]) > limit + 1:
                continue
            r = rels[k]
            choice = None
            for g in sorted(r.generators(), key=lambda g: (len(occ[g]), g)):
                if g in protected:
                    continue
                sub = _solve_for(r, g)
                if sub is not None:
                    choice = (g, sub)
                    break
            if choice is None:
                continue
            g, sub = choice
            # substitute only into relators not already rewritten in this pass
            if any(j in touched for j in occ[g] if j != k):
                continue
            for j in occ[g]:
                if j == k or j in dead_rel:
                    continue
                rels[j] = rels[j].substitute(g, sub)
                touched.add(j)
                for h_, _ in sub.letters:
                    occ[h_].add(j)
            dead_rel.add(k)
            del gens[g]
            occ.pop(g, None)
        rels = _tidy([r for k, r in enumerate(rels) if k not in dead_rel])
        after = (len(gens), sum(len(r) for r in rels))
        if after < before:
            stale = 0
        else:
            stale += 1
            limit *= 2
        log.debug("tietze pass: %s -> %s", before, after)
    return Presentation(p.d, gens, rels, p.h, dict(p.meta))
