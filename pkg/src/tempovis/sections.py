"""Per-recording summary statistics and sectional durations.

Means are unweighted over bars (each bar counts once), and spreads are
population standard deviations. This is *not* the same as total beats over
total time when bar lengths vary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import SectionMap, SummaryStats, TempoSeries


@dataclass(frozen=True)
class SectionDurations:
    recording_id: str
    entries: tuple[tuple[str, float], ...]

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.entries]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def __getitem__(self, name: str) -> float:
        for n, v in self.entries:
            if n == name:
                return v
        raise KeyError(name)


def summary_stats(series: TempoSeries, bar_range: tuple[int, int] | None = None) -> SummaryStats:
    """Mean and population std of bar BPM, optionally over ``bar_range`` (inclusive)."""
    if bar_range is None:
        bars = list(series.bars)
    else:
        start, end = bar_range
        if end < start:
            raise DomainError(f"bar range {start}-{end} is reversed")
        first, last = series.bars[0].bar_index, series.bars[-1].bar_index
        if start < first or end > last:
            raise DomainError(
                f"bar range {start}-{end} exceeds {series.recording_id!r} bars {first}-{last}"
            )
        bars = series.select(start, end)
    if not bars:
        raise DomainError(f"no bars selected from {series.recording_id!r}")
    bpm = np.array([b.bpm for b in bars])
    mean = float(bpm.mean())
    std = float(np.sqrt(np.mean((bpm - mean) ** 2)))
    return SummaryStats(mean, std, len(bars), math.fsum(b.duration_s for b in bars))


def section_stats(series: TempoSeries, sections: SectionMap, name: str) -> SummaryStats:
    s = sections.get(name)
    return summary_stats(series, (s.start_bar, s.end_bar))


def section_durations(series: TempoSeries, sections: SectionMap) -> SectionDurations:
    """Sum bar durations within each section, in section-map order.

    The map must cover exactly the bars of the series.
    """
    first, last = series.bars[0].bar_index, series.bars[-1].bar_index
    if first != 1 or last != sections.last_bar:
        if sections.last_bar < last:
            missing = f"bars {sections.last_bar + 1}-{last} are not covered by the section map"
        else:
            missing = f"section map runs to bar {sections.last_bar} but the series ends at bar {last}"
        raise DomainError(f"{series.recording_id!r}: {missing}")
    entries = []
    for s in sections.sections:
        entries.append((s.name, math.fsum(b.duration_s for b in series.select(s.start_bar, s.end_bar))))
    return SectionDurations(series.recording_id, tuple(entries))
