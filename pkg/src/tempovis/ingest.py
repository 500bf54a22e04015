"""Reading timing, section and metadata CSV files.

Two timing layouts are accepted, told apart by the header only::

    recording_id,bar_index,n_beats,timestamp_ms   # cumulative lap times
    recording_id,bar_index,n_beats,bpm            # per-bar tempo

In the timestamp layout each value is the time at the *end* of the bar. A row
with ``bar_index`` 0 sets that recording's timer origin (``start_ms``);
without one the origin is 0.
"""

from __future__ import annotations

import csv
import io
import math
import re
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DomainError, ParseError
from .model import BarRecord, RecordingMeta, Section, SectionMap, TempoSeries, section_map_problems, validate_series

TIMESTAMP_HEADER = ("recording_id", "bar_index", "n_beats", "timestamp_ms")
BPM_HEADER = ("recording_id", "bar_index", "n_beats", "bpm")
SECTION_HEADER = ("name", "start_bar", "end_bar")
META_HEADER = ("recording_id", "label", "year", "color")

_HEX_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")
_YEAR = re.compile(r"^\s*(\d{4})\s*(?:[-–/]\s*(\d{2}|\d{4}))?\s*$")


def bpm_from_bar(n_beats: int, duration_s: float, bar_index: int | None = None) -> float:
    """Tempo of a bar: ``n_beats * 60 / duration_s``."""
    if not duration_s > 0:
        where = f"bar {bar_index}: " if bar_index is not None else ""
        raise DomainError(f"{where}duration must be positive, got {duration_s!r}")
    return n_beats * 60.0 / duration_s


def duration_from_bpm(n_beats: int, bpm: float, bar_index: int | None = None) -> float:
    """Bar duration in seconds: ``60 * n_beats / bpm``."""
    if not bpm > 0:
        where = f"bar {bar_index}: " if bar_index is not None else ""
        raise DomainError(f"{where}bpm must be positive, got {bpm!r}")
    return 60.0 * n_beats / bpm


def cumulative_to_durations(timestamps_ms: Sequence[int], start_ms: int = 0) -> list[float]:
    """Turn cumulative end-of-bar timestamps into bar durations in seconds.

    Raises:
        ParseError: a timestamp does not exceed its predecessor; ``rows``
            carries the 1-based position in ``timestamps_ms``.
    """
    out = []
    prev = start_ms
    for k, ts in enumerate(timestamps_ms, start=1):
        if ts <= prev:
            what = "start_ms" if k == 1 else f"row {k - 1}"
            raise ParseError(f"row {k}: timestamp {ts} ms does not exceed {what} ({prev} ms)", rows=(k,))
        out.append((ts - prev) / 1000.0)
        prev = ts
    return out


def _reader(content: str) -> tuple[list[str], list[tuple[int, list[str]]]]:
    reader = csv.reader(io.StringIO(content.lstrip("﻿")))
    header: list[str] | None = None
    rows = []
    for rec in reader:
        if not rec or all(not c.strip() for c in rec):
            continue
        rec = [c.strip() for c in rec]
        if header is None:
            header = rec
        else:
            rows.append((reader.line_num, rec))
    if header is None:
        raise ParseError("empty file: no header row")
    return header, rows


def _int(value: str, column: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"line {line}: {column} must be an integer, got {value!r}", rows=(line,)) from None


def _float(value: str, column: str, line: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ParseError(f"line {line}: {column} must be a number, got {value!r}", rows=(line,)) from None
    if not math.isfinite(x):
        raise ParseError(f"line {line}: {column} must be finite, got {value!r}", rows=(line,))
    return x


def parse_timing_csv(content: str) -> list[TempoSeries]:
    """Parse a timing CSV into one series per recording, sorted by recording id.

    Rows may come in any order. Line numbers in errors count the header as
    line 1.
    """
    header, rows = _reader(content)
    cols = tuple(header)
    if "timestamp_ms" in cols and "bpm" in cols:
        raise ParseError("mixed schemas: header has both timestamp_ms and bpm columns", rows=(1,))
    if cols == TIMESTAMP_HEADER:
        schema = "timestamp"
    elif cols == BPM_HEADER:
        schema = "bpm"
    else:
        raise ParseError(
            f"unknown header {','.join(header)!r}; expected {','.join(TIMESTAMP_HEADER)!r} "
            f"or {','.join(BPM_HEADER)!r}",
            rows=(1,),
        )

    by_rec: dict[str, dict[int, tuple[int, int, float | int]]] = defaultdict(dict)
    starts: dict[str, tuple[int, int]] = {}
    for line, rec in rows:
        if len(rec) != 4:
            raise ParseError(f"line {line}: expected 4 fields, got {len(rec)}", rows=(line,))
        rid = rec[0]
        if not rid:
            raise ParseError(f"line {line}: empty recording_id", rows=(line,))
        bar = _int(rec[1], "bar_index", line)
        if schema == "timestamp":
            value: float | int = _int(rec[3], "timestamp_ms", line)
            if value < 0:
                raise ParseError(f"line {line}: timestamp_ms must be non-negative", rows=(line,))
            if bar == 0:
                if rid in starts:
                    raise ParseError(
                        f"line {line}: second start_ms row for {rid!r} (first on line {starts[rid][1]})",
                        rows=(starts[rid][1], line),
                    )
                starts[rid] = (value, line)
                continue
        else:
            value = _float(rec[3], "bpm", line)
            if value <= 0:
                raise ParseError(f"line {line}: bar {bar}: bpm must be positive, got {rec[3]}", rows=(line,))
        n_beats = _int(rec[2], "n_beats", line)
        if n_beats < 1:
            raise ParseError(f"line {line}: bar {bar}: n_beats must be >= 1, got {n_beats}", rows=(line,))
        if bar in by_rec[rid]:
            first = by_rec[rid][bar][0]
            raise ParseError(
                f"line {line}: duplicate bar {bar} for {rid!r} (first on line {first})", rows=(first, line)
            )
        by_rec[rid][bar] = (line, n_beats, value)

    orphan = sorted(set(starts) - set(by_rec))
    if orphan:
        line = starts[orphan[0]][1]
        raise ParseError(f"line {line}: start_ms row for {orphan[0]!r} which has no bars", rows=(line,))

    out = []
    for rid in sorted(by_rec):
        bars = sorted(by_rec[rid].items())
        lines = {bar: entry[0] for bar, entry in bars}
        if schema == "timestamp":
            start = starts.get(rid, (0, 0))[0]
            try:
                durations = cumulative_to_durations([e[2] for _, e in bars], start)
            except ParseError as exc:
                k = exc.rows[0]
                line = bars[k - 1][1][0]
                raise ParseError(f"{rid!r} line {line}: {exc}", rows=(line,)) from None
            records = [
                BarRecord.from_duration(bar, e[1], d) for (bar, e), d in zip(bars, durations)
            ]
        else:
            records = [BarRecord.from_bpm(bar, e[1], e[2]) for bar, e in bars]
        series = TempoSeries(rid, tuple(records))
        violations = validate_series(series)
        if violations:
            bad = tuple(lines[v.bar_index] for v in violations if v.bar_index in lines)
            detail = "; ".join(
                f"line {lines[v.bar_index]}: {v}" if v.bar_index in lines else str(v) for v in violations
            )
            raise ParseError(f"recording {rid!r}: {detail}", rows=bad)
        out.append(series)
    return out


def format_timing_csv(series_list: Iterable[TempoSeries], schema: str = "bpm") -> str:
    """Serialise series back to CSV.

    ``bpm`` values are written with 9 significant digits. The ``timestamp``
    layout writes cumulative milliseconds from origin 0, rounded to integers.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if schema == "bpm":
        w.writerow(BPM_HEADER)
        for s in series_list:
            for b in s.bars:
                w.writerow([s.recording_id, b.bar_index, b.n_beats, format(b.bpm, ".9g")])
    elif schema == "timestamp":
        w.writerow(TIMESTAMP_HEADER)
        for s in series_list:
            acc = 0.0
            for b in s.bars:
                acc += b.duration_s
                w.writerow([s.recording_id, b.bar_index, b.n_beats, int(round(acc * 1000.0))])
    else:
        raise ValueError(f"unknown schema {schema!r}")
    return buf.getvalue()


def parse_section_csv(content: str) -> SectionMap:
    """Parse ``name,start_bar,end_bar`` rows into a validated :class:`SectionMap`."""
    header, rows = _reader(content)
    if tuple(header) != SECTION_HEADER:
        raise ParseError(f"unknown header {','.join(header)!r}; expected {','.join(SECTION_HEADER)!r}", rows=(1,))
    sections = []
    lines = []
    for line, rec in rows:
        if len(rec) != 3:
            raise ParseError(f"line {line}: expected 3 fields, got {len(rec)}", rows=(line,))
        if not rec[0]:
            raise ParseError(f"line {line}: empty section name", rows=(line,))
        sections.append(Section(rec[0], _int(rec[1], "start_bar", line), _int(rec[2], "end_bar", line)))
        lines.append(line)
    if not sections:
        raise ParseError("section file has no rows")
    names = [s.name for s in sections]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ParseError(f"duplicate section name(s): {', '.join(dupes)}")
    # check incrementally so the first offending section can be named with its line
    for i in range(len(sections)):
        problems = section_map_problems(sections[: i + 1])
        if problems:
            raise ParseError(f"line {lines[i]}: {problems[0]}", rows=(lines[i],))
    return SectionMap(tuple(sections))


def format_section_csv(sections: SectionMap) -> str:
    lines = [",".join(SECTION_HEADER)]
    lines += [f"{s.name},{s.start_bar},{s.end_bar}" for s in sections.sections]
    return "\n".join(lines) + "\n"


def parse_year(text: str) -> tuple[int, int]:
    """``"2012"`` -> (2012, 2012); ``"1930-39"`` -> (1930, 1939)."""
    m = _YEAR.match(text)
    if not m:
        raise ValueError(f"bad year {text!r}")
    first = int(m.group(1))
    if m.group(2) is None:
        return first, first
    tail = m.group(2)
    last = int(tail) if len(tail) == 4 else (first // 100) * 100 + int(tail)
    if last < first:
        raise ValueError(f"year range {text!r} ends before it starts")
    return first, last


def parse_meta_csv(content: str) -> list[RecordingMeta]:
    """Parse recording metadata. The ``color`` column may be omitted or left blank."""
    header, rows = _reader(content)
    cols = tuple(header)
    if cols not in (META_HEADER, META_HEADER[:3]):
        raise ParseError(f"unknown header {','.join(header)!r}; expected {','.join(META_HEADER)!r}", rows=(1,))
    out = []
    seen: dict[str, int] = {}
    for line, rec in rows:
        if len(rec) == 3 and len(cols) == 4:
            rec = rec + [""]
        if len(rec) != len(cols):
            raise ParseError(f"line {line}: expected {len(cols)} fields, got {len(rec)}", rows=(line,))
        rid, label, year = rec[0], rec[1], rec[2]
        color = rec[3] if len(rec) > 3 and rec[3] else None
        if rid in seen:
            raise ParseError(f"line {line}: duplicate recording_id {rid!r} (first on line {seen[rid]})",
                             rows=(seen[rid], line))
        seen[rid] = line
        try:
            years = parse_year(year)
        except ValueError as exc:
            raise ParseError(f"line {line}: {exc}", rows=(line,)) from None
        if color is not None and not _HEX_COLOR.match(color):
            raise ParseError(f"line {line}: color must look like #RRGGBB, got {color!r}", rows=(line,))
        out.append(RecordingMeta(rid, label or rid, years, color.lower() if color else None))
    return out


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_timing(path: str | Path) -> list[TempoSeries]:
    return parse_timing_csv(read_text(path))


def load_sections(path: str | Path) -> SectionMap:
    return parse_section_csv(read_text(path))


def load_meta(path: str | Path) -> list[RecordingMeta]:
    return parse_meta_csv(read_text(path))
