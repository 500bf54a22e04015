"""Shared domain types for bar-level tempo data.

Everything here is immutable and free of I/O. Bars are numbered from 1, as in
the score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError

# relative tolerance for bpm * duration == beats * 60
CONSISTENCY_RTOL = 1e-9


@dataclass(frozen=True)
class BarRecord:
    """One measured bar.

    Construction does not validate; use :func:`validate_series` so that
    inconsistent data can be reported rather than refused.
    """

    bar_index: int
    n_beats: int
    duration_s: float
    bpm: float

    @classmethod
    def from_duration(cls, bar_index: int, n_beats: int, duration_s: float) -> BarRecord:
        if not duration_s > 0:
            raise DomainError(f"bar {bar_index}: duration must be positive, got {duration_s!r}")
        return cls(bar_index, n_beats, float(duration_s), n_beats * 60.0 / duration_s)

    @classmethod
    def from_bpm(cls, bar_index: int, n_beats: int, bpm: float) -> BarRecord:
        if not bpm > 0:
            raise DomainError(f"bar {bar_index}: bpm must be positive, got {bpm!r}")
        return cls(bar_index, n_beats, 60.0 * n_beats / bpm, float(bpm))


@dataclass(frozen=True)
class TempoSeries:
    """Ordered bars of one recording."""

    recording_id: str
    bars: tuple[BarRecord, ...]

    def __post_init__(self) -> None:
        # accept any sequence but store a tuple so the series stays hashable/immutable
        if not isinstance(self.bars, tuple):
            object.__setattr__(self, "bars", tuple(self.bars))

    def __len__(self) -> int:
        return len(self.bars)

    @property
    def bar_indices(self) -> list[int]:
        return [b.bar_index for b in self.bars]

    @property
    def bpms(self) -> list[float]:
        return [b.bpm for b in self.bars]

    @property
    def durations(self) -> list[float]:
        return [b.duration_s for b in self.bars]

    @property
    def total_duration_s(self) -> float:
        return math.fsum(self.durations)

    def select(self, start_bar: int, end_bar: int) -> list[BarRecord]:
        """Bars whose index lies in ``[start_bar, end_bar]``."""
        return [b for b in self.bars if start_bar <= b.bar_index <= end_bar]


@dataclass(frozen=True)
class RecordingMeta:
    """Display metadata for one recording.

    ``year`` is a ``(first, last)`` pair; a single year has ``first == last``.
    """

    recording_id: str
    label: str
    year: tuple[int, int]
    color: str | None = None

    @property
    def sort_key(self) -> tuple[int, int, str]:
        return (self.year[0], self.year[1], self.recording_id)


@dataclass(frozen=True)
class Section:
    name: str
    start_bar: int
    end_bar: int

    @property
    def n_bars(self) -> int:
        return self.end_bar - self.start_bar + 1


@dataclass(frozen=True)
class SectionMap:
    """Contiguous formal divisions starting at bar 1."""

    sections: tuple[Section, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.sections, tuple):
            object.__setattr__(self, "sections", tuple(self.sections))
        problems = section_map_problems(self.sections)
        if problems:
            raise DomainError("; ".join(problems))

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, int, int]]) -> SectionMap:
        return cls(tuple(Section(n, int(s), int(e)) for n, s, e in triples))

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.sections]

    @property
    def last_bar(self) -> int:
        return self.sections[-1].end_bar if self.sections else 0

    def section_of(self, bar_index: int) -> Section:
        for s in self.sections:
            if s.start_bar <= bar_index <= s.end_bar:
                return s
        raise DomainError(f"bar {bar_index} is not covered by the section map")

    def get(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise DomainError(f"unknown section {name!r}; known: {', '.join(self.names)}")


def section_map_problems(sections: Sequence[Section]) -> list[str]:
    """Describe every contiguity/ordering problem in ``sections``."""
    problems = []
    expected_start = 1
    for s in sections:
        if s.end_bar < s.start_bar:
            problems.append(f"section {s.name!r}: end_bar {s.end_bar} before start_bar {s.start_bar}")
        if s.start_bar > expected_start:
            if expected_start == 1:
                problems.append(f"section {s.name!r}: map must start at bar 1, starts at {s.start_bar}")
            else:
                problems.append(
                    f"section {s.name!r}: gap after bar {expected_start - 1} (starts at {s.start_bar})"
                )
        elif s.start_bar < expected_start:
            problems.append(
                f"section {s.name!r}: overlaps or precedes previous section (starts at {s.start_bar}, "
                f"expected {expected_start})"
            )
        expected_start = max(expected_start, s.end_bar + 1)
    return problems


@dataclass(frozen=True)
class SummaryStats:
    mean_bpm: float
    std_bpm: float
    n_bars: int
    total_duration_s: float


@dataclass(frozen=True)
class Violation:
    """A broken invariant in a :class:`TempoSeries`."""

    bar_index: int | None
    rule: str
    detail: str = field(default="")

    def __str__(self) -> str:
        where = "series" if self.bar_index is None else f"bar {self.bar_index}"
        return f"{where}: {self.rule}" + (f" ({self.detail})" if self.detail else "")


def validate_series(series: TempoSeries) -> list[Violation]:
    """Check a series against its invariants; returns an empty list when valid."""
    out: list[Violation] = []
    if not series.bars:
        return [Violation(None, "empty series")]
    expected = 1
    for bar in series.bars:
        if bar.bar_index != expected:
            if bar.bar_index > expected:
                rule = f"gap after bar {expected - 1}" if expected > 1 else "series must start at bar 1"
            else:
                rule = f"bar index not increasing after bar {expected - 1}"
            out.append(Violation(bar.bar_index, rule, f"expected bar {expected}"))
        expected = max(expected, bar.bar_index) + 1
        if bar.n_beats < 1:
            out.append(Violation(bar.bar_index, "n_beats must be >= 1", f"got {bar.n_beats}"))
        if not bar.duration_s > 0:
            out.append(Violation(bar.bar_index, "duration_s must be positive", f"got {bar.duration_s}"))
        if not bar.bpm > 0:
            out.append(Violation(bar.bar_index, "bpm must be positive", f"got {bar.bpm}"))
        beats = bar.bpm * bar.duration_s / 60.0
        if not math.isclose(beats, bar.n_beats, rel_tol=CONSISTENCY_RTOL, abs_tol=0.0):
            out.append(
                Violation(
                    bar.bar_index,
                    "bpm x duration_s != n_beats x 60",
                    f"{bar.bpm:g} x {bar.duration_s:g} != {bar.n_beats * 60}",
                )
            )
    return out
