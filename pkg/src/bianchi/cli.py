"""Command line entry point: ``bianchi compute | check-cover | verify | abelianize | export``."""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import algebra
from .coverage import DEFAULT_GRID, DEFAULT_GRID_CAP, check_cover
from .enumeration import PACKAGED_HEIGHTS, build_gens
from .pipeline import CoverFailure, certified_generators, run
from .ring import UnsupportedRingError, ring_params

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_COVER_FAILED = 3
EXIT_INTERNAL = 4

log = logging.getLogger("bianchi")


def _rational(text: str) -> Fraction:
    try:
        h = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if h <= 0:
        raise argparse.ArgumentTypeError("height must be positive")
    return h


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return k


def published_path(d: int) -> Path:
    return Path(str(resources.files("bianchi") / "data" / f"published_{abs(d)}.txt"))


def _emit_rows(rows, out=None):
    for k, v in rows:
        print(f"{k}\t{v}", file=out or sys.stdout)


def cmd_compute(args) -> int:
    res = run(
        args.d,
        h=args.height,
        auto=args.auto_height,
        grid=args.grid,
        grid_cap=args.grid_cap,
        workers=args.workers,
        cleanup=args.cleanup,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"d{abs(args.d)}"
    algebra.dump(res.presentation, out / f"{stem}_raw.txt")
    if res.cleaned is not None:
        algebra.dump(res.cleaned, out / f"{stem}_clean.txt")
    if args.export_cas:
        (out / f"{stem}_raw.mgm").write_text(algebra.to_cas(res.presentation))
        if res.cleaned is not None:
            (out / f"{stem}_clean.mgm").write_text(algebra.to_cas(res.cleaned))
    rows = res.report.rows()
    with open(out / f"{stem}_report.tsv", "w") as fh:
        _emit_rows(rows, fh)
    if args.figure:
        from .plotting import render_figure

        render_figure(res.gens.params, res.gens.circles(), res.cover, out / f"{stem}_cover.svg")
    _emit_rows(rows)
    return EXIT_OK


def cmd_check_cover(args) -> int:
    params = ring_params(args.d)
    if args.auto_height:
        try:
            gs, cover = certified_generators(args.d, auto=True, grid=args.grid, grid_cap=args.grid_cap)
        except CoverFailure as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_COVER_FAILED
    else:
        h = PACKAGED_HEIGHTS[args.d] if args.height is None else args.height
        gs = build_gens(params, h)
        cover = check_cover(params, gs.circles(), args.grid)
        n = args.grid
        while not cover.covered and args.retry and 2 * n <= args.grid_cap:
            n *= 2
            cover = check_cover(params, gs.circles(), n)
    _emit_rows(
        [
            ("d", str(args.d)),
            ("height", str(gs.h)),
            ("generators", str(len(gs))),
            ("grid", str(cover.n)),
            ("covered", "yes" if cover.covered else "no"),
            ("uncovered_cells", str(len(cover.uncovered_cells))),
        ]
    )
    for cell in cover.uncovered_cells[: args.list_cells]:
        print(f"open\t{cell.i}\t{cell.j}")
    if args.figure:
        from .plotting import render_figure

        render_figure(params, gs.circles(), cover, args.figure)
    return EXIT_OK if cover.covered else EXIT_COVER_FAILED


def _load_target(args) -> algebra.Presentation:
    if args.published is not None:
        return algebra.load(published_path(args.published))
    if args.path is None:
        raise algebra.PresentationFormatError("give a presentation file or --published D")
    return algebra.load(args.path)


def cmd_verify(args) -> int:
    p = _load_target(args)
    bad_det = p.bad_determinants()
    for name in bad_det:
        print(f"det\t{name}\tFAIL\tdeterminant is not 1 (suspected transcription error)")
    if not p.relators:
        print("warning: presentation has no relators; nothing to verify", file=sys.stderr)
    ok = p.verify() if not bad_det else [False] * len(p.relators)
    for k, (r, good) in enumerate(zip(p.relators, ok)):
        status = "ok" if good else "FAIL"
        note = "" if good else "\tsuspected typo in source"
        print(f"rel\t{k}\t{status}\t{r}{note}")
    failed = len(ok) - sum(ok)
    print(f"summary\t{len(ok)} relators\t{failed} failed")
    return EXIT_OK if not failed and not bad_det else EXIT_VERIFY_FAILED


def cmd_abelianize(args) -> int:
    p = _load_target(args)
    inv = algebra.abelianize(p)
    _emit_rows(
        [
            ("torsion", ",".join(map(str, inv.torsion)) or "-"),
            ("free_rank", str(inv.free_rank)),
            ("abelianization", str(inv)),
        ]
    )
    return EXIT_OK


def cmd_export(args) -> int:
    p = _load_target(args)
    if args.cleanup:
        p = algebra.tietze_cleanup(p)
    text = algebra.to_cas(p) if args.format == "cas" else algebra.dumps(p)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_height_opts(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--height", type=_rational, help="exact height p/q (default: packaged value for d)")
    g.add_argument("--auto-height", action="store_true", help="descend from 1/2 by 9/10 until the cover certifies")
    sp.add_argument("--grid", type=_positive, default=DEFAULT_GRID)
    sp.add_argument("--grid-cap", type=_positive, default=DEFAULT_GRID_CAP)


def _add_source_opts(sp):
    sp.add_argument("path", nargs="?")
    sp.add_argument("--published", type=int, metavar="D", help="use the bundled published presentation for d=D")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bianchi", description="Presentations of PSL_2(O_d) from horoball covers.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("compute", help="run the full pipeline for one d")
    sp.add_argument("--d", type=int, required=True)
    _add_height_opts(sp)
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--out", default=".")
    sp.add_argument("--figure", action="store_true", help="also write the cover diagram (SVG)")
    sp.add_argument("--cleanup", action="store_true", help="also write a Tietze-simplified presentation")
    sp.add_argument("--export-cas", action="store_true", help="also write Magma input files")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("check-cover", help="certify that Gens(h) circles cover the fundamental cell")
    sp.add_argument("--d", type=int, required=True)
    _add_height_opts(sp)
    sp.add_argument("--no-retry", dest="retry", action="store_false", help="do not refine the grid on failure")
    sp.add_argument("--figure", metavar="PATH")
    sp.add_argument("--list-cells", type=int, default=20, metavar="K", help="print at most K open cells")
    sp.set_defaults(func=cmd_check_cover)

    sp = sub.add_parser("verify", help="check every relator as a matrix identity")
    _add_source_opts(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("abelianize", help="abelian invariants of a presentation")
    _add_source_opts(sp)
    sp.set_defaults(func=cmd_abelianize)

    sp = sub.add_parser("export", help="rewrite a presentation file")
    _add_source_opts(sp)
    sp.add_argument("--format", choices=("native", "cas"), default="cas")
    sp.add_argument("--cleanup", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UnsupportedRingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CoverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVER_FAILED
    except (algebra.PresentationFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
