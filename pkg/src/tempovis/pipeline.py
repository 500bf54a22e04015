"""Glue from parsed series to finished chart scenes.

The CLI is a thin wrapper over :func:`build_scene` and :func:`stats_table`.
"""

from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import density
from .charts import compose
from .charts.scene import ChartScene
from .errors import DomainError
from .model import RecordingMeta, Section, SectionMap, SummaryStats, TempoSeries
from .sections import SectionDurations, section_durations, summary_stats

CHART_COMMANDS = ("tempograph", "multiples", "histogram", "ridgeline", "stackedbar", "combo", "panel")
WHOLE_MOVEMENT = "Movement"


@dataclass(frozen=True)
class RunConfig:
    bins: int = density.DEFAULT_BINS
    bandwidth: float = density.DEFAULT_BANDWIDTH_FACTOR
    pdf_points: int = density.DEFAULT_PDF_POINTS
    kde_points: int = density.DEFAULT_KDE_POINTS
    kde_min: float = density.DEFAULT_KDE_RANGE[0]
    kde_max: float = density.DEFAULT_KDE_RANGE[1]
    epsilon: float = density.DEFAULT_EPSILON
    jitter: float = density.DEFAULT_JITTER
    seed: int = 0
    percent: bool = False
    section: str | None = None
    scale: float = compose.RIDGE_SCALE
    offsets: tuple[float, ...] | None = None


def recording_seed(seed: int, recording_id: str) -> int:
    """Per-recording jitter seed; independent of which other recordings are loaded."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, zlib.crc32(recording_id.encode("utf-8"))])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def select_recordings(series_list: Sequence[TempoSeries], ids: Sequence[str] | None) -> list[TempoSeries]:
    if not ids:
        return list(series_list)
    by_id = {s.recording_id: s for s in series_list}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise DomainError(f"unknown recording id(s): {', '.join(missing)}; available: {', '.join(by_id)}")
    return [by_id[i] for i in ids]


def order_chronologically(series_list: Sequence[TempoSeries], meta: Sequence[RecordingMeta]) -> list[TempoSeries]:
    """Sort by metadata year, ties and unknown years broken by recording id."""
    years = {m.recording_id: m.year for m in meta}
    return sorted(series_list, key=lambda s: (*years.get(s.recording_id, (10**6, 10**6)), s.recording_id))


def stats_for(series: TempoSeries, sections: SectionMap | None, section: str | None) -> SummaryStats:
    if section is None:
        return summary_stats(series)
    if sections is None:
        raise DomainError(f"--section {section!r} needs a section map")
    s = sections.get(section)
    return summary_stats(series, (s.start_bar, s.end_bar))


def durations_for(series_list: Sequence[TempoSeries], sections: SectionMap | None) -> list[SectionDurations]:
    """Section durations; without a map every recording is one whole-movement section."""
    out = []
    for s in series_list:
        smap = sections or SectionMap((Section(WHOLE_MOVEMENT, 1, s.bars[-1].bar_index),))
        out.append(section_durations(s, smap))
    return out


def histogram_products(series_list: Sequence[TempoSeries], cfg: RunConfig):
    out = []
    for s in series_list:
        hist, pdf = density.spline_pdf(s.bpms, cfg.bins, cfg.pdf_points, cfg.epsilon, cfg.jitter,
                                       recording_seed(cfg.seed, s.recording_id))
        out.append((hist, pdf, summary_stats(s)))
    return out


def kde_products(series_list: Sequence[TempoSeries], cfg: RunConfig) -> list[density.KdeCurve]:
    # widen the default grid only when a recording would otherwise be cut off
    hi = cfg.kde_max
    lo = cfg.kde_min
    for s in series_list:
        h = cfg.bandwidth * density.population_std(s.bpms)
        hi = max(hi, max(s.bpms) + 5 * h)
        lo = min(lo, min(s.bpms) - 5 * h)
    return [density.gaussian_kde(s.bpms, cfg.bandwidth, lo, hi, cfg.kde_points) for s in series_list]


def build_scene(
    command: str,
    series_list: Sequence[TempoSeries],
    sections: SectionMap | None,
    meta: Sequence[RecordingMeta],
    cfg: RunConfig = RunConfig(),
) -> ChartScene:
    """Run the analysis behind one chart command and return its scene."""
    if command not in CHART_COMMANDS:
        raise ValueError(f"unknown chart command {command!r}")
    if not series_list:
        raise DomainError("no recordings to plot")
    series_list = order_chronologically(series_list, meta)
    styles = compose.resolve_meta([s.recording_id for s in series_list], meta)

    if command == "tempograph":
        return compose.tempograph(series_list, sections, styles)
    if command == "multiples":
        return compose.small_multiples(series_list, styles)
    if command == "histogram":
        products = histogram_products(series_list, cfg)
        return compose.histogram_row([(h, p, st, m) for (h, p, st), m in zip(products, styles)])
    if command == "ridgeline":
        return compose.ridgeline(kde_products(series_list, cfg), cfg.offsets, cfg.scale, styles,
                                 [float(np.mean(s.bpms)) for s in series_list])
    if command == "stackedbar":
        return compose.stacked_bars(durations_for(series_list, sections), compose.SECTION_COLORS, cfg.percent, styles)
    combo = compose.combination_inputs([stats_for(s, sections, cfg.section) for s in series_list], styles)
    if command == "combo":
        return compose.combination_chart(combo)
    return compose.five_panel(
        series_list,
        sections,
        styles,
        histogram_products(series_list, cfg),
        kde_products(series_list, cfg),
        [float(np.mean(s.bpms)) for s in series_list],
        durations_for(series_list, sections),
        combo,
        offsets=cfg.offsets,
        scale=cfg.scale,
        percent=cfg.percent,
    )


def stats_table(
    series_list: Sequence[TempoSeries],
    sections: SectionMap | None,
    section: str | None = None,
) -> str:
    """CSV text with two blocks: summary statistics, then section durations."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["recording_id", "scope", "mean_bpm", "std_bpm", "n_bars", "total_duration_s"])
    for s in series_list:
        st = stats_for(s, sections, section)
        w.writerow([s.recording_id, section or "all", f"{st.mean_bpm:.4f}", f"{st.std_bpm:.4f}", st.n_bars,
                    f"{st.total_duration_s:.3f}"])
    w.writerow([])
    w.writerow(["recording_id", "section", "duration_s"])
    for d in durations_for(series_list, sections):
        for name, value in d.entries:
            w.writerow([d.recording_id, name, f"{value:.3f}"])
    return buf.getvalue()
