"""End-to-end run: generators, cover certificate, relations, presentation."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AbelianInvariants, Presentation, abelianize, raw_presentation, tietze_cleanup
from .coverage import DEFAULT_GRID, DEFAULT_GRID_CAP, CoverResult
from .enumeration import PACKAGED_HEIGHTS, GenSet, RawRelation, find_generators, find_relations
from .ring import ring_params

log = logging.getLogger(__name__)

AUTO_START = Fraction(1, 2)
AUTO_FACTOR = Fraction(9, 10)
AUTO_FLOOR = Fraction(1, 50)


class CoverFailure(RuntimeError):
    def __init__(self, h, cover: CoverResult):
        super().__init__(f"circles at h={h} not certified to cover D ({len(cover.uncovered_cells)} open cells at n={cover.n})")
        self.h = h
        self.cover = cover


@dataclass
class RunReport:
    d: int
    height: Fraction
    grid: int
    raw_generators: int  # Gens(h) plus T1, Tw
    raw_relations: int
    depth: int
    search_depth: int
    invariants: AbelianInvariants | None = None
    cleaned_generators: int | None = None
    cleaned_relators: int | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, str]]:
        rows = [
            ("d", str(self.d)),
            ("height", str(self.height)),
            ("height_decimal", f"{float(self.height):.6f}"),
            ("grid", str(self.grid)),
            ("raw_generators", str(self.raw_generators)),
            ("raw_relations", str(self.raw_relations)),
            ("depth", str(self.depth)),
            ("search_depth", str(self.search_depth)),
        ]
        if self.invariants is not None:
            rows.append(("torsion", ",".join(map(str, self.invariants.torsion)) or "-"))
            rows.append(("free_rank", str(self.invariants.free_rank)))
            rows.append(("abelianization", str(self.invariants)))
        if self.cleaned_generators is not None:
            rows.append(("cleaned_generators", str(self.cleaned_generators)))
            rows.append(("cleaned_relators", str(self.cleaned_relators)))
        for k, v in self.timings.items():
            rows.append((f"time_{k}", f"{v:.3f}"))
        return rows


@dataclass
class RunResult:
    gens: GenSet
    cover: CoverResult
    relations: list[RawRelation]
    presentation: Presentation
    cleaned: Presentation | None
    report: RunReport


def certified_generators(d: int, h=None, auto: bool = False, grid: int = DEFAULT_GRID, grid_cap: int = DEFAULT_GRID_CAP):
    """Gens(h) with a successful cover certificate; descends h in auto mode."""
    params = ring_params(d)
    if auto:
        h = AUTO_START
        while True:
            gs, cover = find_generators(params, h, grid, grid_cap)
            if cover.covered:
                return gs, cover
            nxt = h * AUTO_FACTOR
            if nxt < AUTO_FLOOR:
                raise CoverFailure(h, cover)
            h = nxt
    h = PACKAGED_HEIGHTS[d] if h is None else Fraction(h)
    gs, cover = find_generators(params, h, grid, grid_cap)
    if not cover.covered:
        raise CoverFailure(h, cover)
    return gs, cover


def run(
    d: int,
    h=None,
    auto: bool = False,
    grid: int = DEFAULT_GRID,
    grid_cap: int = DEFAULT_GRID_CAP,
    workers: int = 1,
    cleanup: bool = False,
    abelian: bool = True,
) -> RunResult:
    timings = {}
    t0 = time.perf_counter()
    gs, cover = certified_generators(d, h, auto, grid, grid_cap)
    timings["generators"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    rels = find_relations(gs, workers)
    timings["relations"] = time.perf_counter() - t0
    pres = raw_presentation(gs, rels)
    report = RunReport(
        d=d,
        height=gs.h,
        grid=cover.n,
        raw_generators=len(gs) + 2,
        raw_relations=len(pres.relators),
        depth=gs.depth,
        search_depth=gs.search_depth,
    )
    if abelian:
        t0 = time.perf_counter()
        report.invariants = abelianize(pres)
        timings["abelianize"] = time.perf_counter() - t0
    cleaned = None
    if cleanup:
        t0 = time.perf_counter()
        cleaned = tietze_cleanup(pres)
        timings["cleanup"] = time.perf_counter() - t0
        report.cleaned_generators = len(cleaned.generators)
        report.cleaned_relators = len(cleaned.relators)
    report.timings = timings
    log.info("d=%d: %d generators, %d relators, %s", d, report.raw_generators, report.raw_relations, report.invariants)
    return RunResult(gs, cover, rels, pres, cleaned, report)
