"""Command-line interface: ``tempovis <command> --input timing.csv ...``."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import density
from .charts import compose
from .errors import TempovisError
from .ingest import load_meta, load_sections, load_timing
from .pipeline import CHART_COMMANDS, RunConfig, build_scene, select_recordings, stats_table
from .svg import render

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2

GUIDE = """\
which chart answers which question:
  where does one performer deviate from another at specific bars?   tempograph
  the same, for more than five recordings                           multiples
  how consistently is the mean tempo held?                          histogram
  how does one tempo distribution compare with many others?         ridgeline
  how is time distributed across formal sections?                   stackedbar
  mean tempo, variability and metronome references together?        combo
  everything at once for a small set of recordings                  panel

conventions: bar means are unweighted (one bar, one vote); standard deviations
use the population form (divide by N); the ridgeline bandwidth is
--bandwidth x population std of each recording's BPM values.
"""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad flags are validation errors, not I/O errors
        raise _UsageError(message)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tempovis",
        description="Charts for bar-level tempo data.",
        epilog=GUIDE,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in CHART_COMMANDS + ("stats",):
        p = sub.add_parser(name, help=f"{name} chart" if name != "stats" else "summary statistics as CSV")
        p.add_argument("--input", required=True, help="timing CSV (timestamp_ms or bpm layout)")
        p.add_argument("--sections", help="section CSV: name,start_bar,end_bar")
        p.add_argument("--meta", help="metadata CSV: recording_id,label,year,color")
        if name != "stats":
            p.add_argument("--out", required=True, help="output SVG path")
            p.add_argument("--width", type=int, help="output width in px (default: scene size)")
            p.add_argument("--height", type=int, help="output height in px (default: scene size)")
        p.add_argument("--recordings", help="comma-separated recording ids to keep, in this order")
        p.add_argument("--section", help="compute combo/stats statistics over this section only (e.g. Allegro)")
        p.add_argument("--bins", type=int, default=density.DEFAULT_BINS)
        p.add_argument("--bandwidth", type=float, default=density.DEFAULT_BANDWIDTH_FACTOR,
                       help="KDE bandwidth as a multiple of the population std")
        p.add_argument("--grid-points", type=int, default=density.DEFAULT_PDF_POINTS,
                       help="evaluation points of the spline density")
        p.add_argument("--kde-points", type=int, default=density.DEFAULT_KDE_POINTS)
        p.add_argument("--epsilon", type=float, default=density.DEFAULT_EPSILON,
                       help="offset of the padded CDF end points (BPM)")
        p.add_argument("--jitter", type=float, default=density.DEFAULT_JITTER,
                       help="uniform jitter amplitude before binning (BPM)")
        p.add_argument("--seed", type=int, default=0, help="jitter seed")
        p.add_argument("--percent", action="store_true", help="stacked bars as percent of each total")
        p.add_argument("--scale", type=float, default=compose.RIDGE_SCALE, help="ridge height multiplier")
        p.add_argument("--offsets", type=_floats, help="ridge baselines, top first, comma-separated")
    return parser


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"tempovis: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    cfg = RunConfig(
        bins=args.bins,
        bandwidth=args.bandwidth,
        pdf_points=args.grid_points,
        kde_points=args.kde_points,
        epsilon=args.epsilon,
        jitter=args.jitter,
        seed=args.seed,
        percent=args.percent,
        section=args.section,
        scale=args.scale,
        offsets=args.offsets,
    )
    try:
        series = load_timing(args.input)
        sections = load_sections(args.sections) if args.sections else None
        meta = load_meta(args.meta) if args.meta else []
    except OSError as exc:
        print(f"tempovis: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    except TempovisError as exc:
        print(f"tempovis: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        ids = [i for i in args.recordings.split(",") if i] if args.recordings else None
        series = select_recordings(series, ids)
        if args.command == "stats":
            sys.stdout.write(stats_table(series, sections, args.section))
            return EXIT_OK
        scene = build_scene(args.command, series, sections, meta, cfg)
        doc = render(scene, args.width, args.height)
    except TempovisError as exc:
        print(f"tempovis {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"tempovis {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        _write_atomic(Path(args.out), doc.text)
    except OSError as exc:
        print(f"tempovis: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
