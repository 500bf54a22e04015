"""Build chart scenes from analysis results.

Every function here is pure: it reads its inputs, returns a new
:class:`~tempovis.charts.scene.ChartScene` and never touches the renderer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..density import HistogramResult, KdeCurve, SplinePdf
from ..errors import DomainError
from ..model import RecordingMeta, SectionMap, SummaryStats, TempoSeries
from ..sections import SectionDurations
from .scene import (
    ChartScene,
    Frame,
    Group,
    Legend,
    LegendEntry,
    Marker,
    Polygon,
    Polyline,
    Rect,
    Span,
    Text,
    fmt_tick,
    nice_ticks,
    nice_upper,
    text_width,
)

RECORDING_COLORS = ("#2166ac", "#d6604d", "#4daf4a", "#984ea3", "#ff7f00")
SECTION_COLORS = ("#d1e5f0", "#fddbc7", "#e0f3db", "#fee090", "#f5f5f5")
# darker companions of SECTION_COLORS, readable at 15% opacity behind a curve
SECTION_BAND_COLORS = ("#4393c3", "#f4a582", "#5aae61", "#fdb863", "#878787")
STD_COLOR = "#555555"
MEAN_LINE_COLOR = "#222222"

MAX_OVERLAID = 5
RIDGE_OFFSETS = (0.55, 0.0)
RIDGE_SCALE = 4.5
RIDGE_MAX_OVERLAP = 0.3

TITLE_SIZE = 11.0


@dataclass(frozen=True)
class ReferenceLine:
    bpm: float
    label: str
    color: str
    dash: str = "dashed"


REFERENCE_LINES = (
    ReferenceLine(160.0, "Czerny", "#e41a1c", "dashed"),
    ReferenceLine(160.0, "Moscheles", "#ff7f00", "dotted"),
    ReferenceLine(126.0, "Kolisch", "#4daf4a", "dashdot"),
)


@dataclass(frozen=True)
class CombinationBar:
    label: str
    mean_bpm: float
    std_bpm: float
    color: str
    edge_color: str


@dataclass(frozen=True)
class CombinationInputs:
    recordings: tuple[CombinationBar, ...]
    references: tuple[ReferenceLine, ...] = REFERENCE_LINES

    def __post_init__(self) -> None:
        if not self.recordings:
            raise DomainError("combination chart needs at least one recording")
        for ref in self.references:
            if not ref.bpm > 0:
                raise DomainError(f"reference line {ref.label!r} must have a positive bpm")


def resolve_meta(recording_ids: Sequence[str], meta: Sequence[RecordingMeta] = ()) -> list[RecordingMeta]:
    """Metadata for each id, in order; unknown ids get their id as label and a palette color."""
    by_id = {m.recording_id: m for m in meta}
    out = []
    for i, rid in enumerate(recording_ids):
        m = by_id.get(rid)
        color = RECORDING_COLORS[i % len(RECORDING_COLORS)]
        if m is None:
            out.append(RecordingMeta(rid, rid, (0, 0), color))
        elif m.color is None:
            out.append(RecordingMeta(m.recording_id, m.label, m.year, color))
        else:
            out.append(m)
    return out


def _padded(lo: float, hi: float, frac: float = 0.05) -> tuple[float, float]:
    if hi <= lo:
        return lo - 1.0, hi + 1.0
    pad = (hi - lo) * frac
    return lo - pad, hi + pad


def _title(width: float, text: str) -> Text:
    return Text(width / 2, 16, text, anchor="middle", size=TITLE_SIZE, weight="bold")


def _categorical(n: int, labels: Sequence[str]) -> list[tuple[float, str]]:
    return [(float(i), labels[i]) for i in range(n)]


def tempograph(
    series_list: Sequence[TempoSeries],
    sections: SectionMap | None = None,
    meta: Sequence[RecordingMeta] = (),
    width: float = 900.0,
    height: float = 300.0,
    title: str = "",
) -> ChartScene:
    """Overlaid bar-by-bar tempo curves with optional shaded sections.

    Refuses more than five recordings; use :func:`small_multiples` for those.
    """
    if not series_list:
        raise DomainError("tempograph needs at least one recording")
    if len(series_list) > MAX_OVERLAID:
        raise DomainError(
            f"{len(series_list)} recordings overlaid in one tempograph are illegible "
            f"(limit {MAX_OVERLAID}); use small multiples ('multiples') instead"
        )
    styles = resolve_meta([s.recording_id for s in series_list], meta)
    last_bar = max(s.bars[-1].bar_index for s in series_list)
    if sections is not None:
        last_bar = max(last_bar, sections.last_bar)
    all_bpm = [b for s in series_list for b in s.bpms]
    lo, hi = _padded(min(all_bpm), max(all_bpm))
    lo = max(lo, 0.0)
    frame = Frame(56, 28, width - 56 - 16, height - 28 - 40, (0.5, last_bar + 0.5), (lo, hi))

    els: list = []
    if sections is not None:
        for i, sec in enumerate(sections.sections):
            x, y, w, h = frame.rect(sec.start_bar - 0.5, sec.end_bar + 0.5, lo, hi)
            els.append(Span(x, y, w, h, SECTION_BAND_COLORS[i % len(SECTION_BAND_COLORS)], 0.15))
        for sec in sections.sections:
            x, _, w, _ = frame.rect(sec.start_bar - 0.5, sec.end_bar + 0.5, lo, hi)
            size = 8.0
            if text_width(sec.name, size) + 4 <= w:
                els.append(Text(x + w / 2, frame.top + 10, sec.name, anchor="middle", size=size, color="#444444"))
            else:
                # too narrow for horizontal text: run it down the band
                els.append(Text(x + w / 2 - 3, frame.top + 4, sec.name, size=size, color="#444444", rotate=90))
    els.append(frame.x_axis(nice_ticks(1, last_bar, 8), "Bar number"))
    els.append(frame.y_axis(nice_ticks(lo, hi), "Tempo (BPM)"))
    for s, m in zip(series_list, styles):
        els.append(Polyline(frame.points(s.bar_indices, s.bpms), m.color, 0.9))
    # bottom right: clear of the section labels along the top edge
    legend_h = len(styles) * (9.0 + 5) + 6
    els.append(Legend(frame.right - 4, frame.bottom - legend_h - 4,
                      tuple(LegendEntry(m.label, m.color) for m in styles)))
    if title:
        els.append(_title(width, title))
    return ChartScene(width, height, tuple(els))


def _mini_tempograph(series: TempoSeries, m: RecordingMeta, ylim: tuple[float, float],
                     width: float, height: float) -> ChartScene:
    last = series.bars[-1].bar_index
    frame = Frame(34, 18, width - 34 - 8, height - 18 - 20, (0.5, last + 0.5), ylim)
    return ChartScene(width, height, (
        frame.x_axis(nice_ticks(1, last, 3)),
        frame.y_axis(nice_ticks(ylim[0], ylim[1], 3)),
        Polyline(frame.points(series.bar_indices, series.bpms), m.color, 0.9),
        Text(width / 2, 12, m.label, anchor="middle", size=9.0, weight="bold"),
    ))


def grid_shape(n: int) -> tuple[int, int]:
    """(rows, cols) of a near-square grid holding ``n`` panels."""
    cols = math.ceil(math.sqrt(n))
    return math.ceil(n / cols), cols


def small_multiples(
    series_list: Sequence[TempoSeries],
    meta: Sequence[RecordingMeta] = (),
    panel_width: float = 240.0,
    panel_height: float = 130.0,
) -> ChartScene:
    """One mini tempograph per recording, all sharing the overall BPM range."""
    if not series_list:
        raise DomainError("small multiples need at least one recording")
    styles = resolve_meta([s.recording_id for s in series_list], meta)
    all_bpm = [b for s in series_list for b in s.bpms]
    ylim = (min(all_bpm), max(all_bpm))
    if ylim[0] == ylim[1]:
        ylim = (ylim[0] - 1.0, ylim[1] + 1.0)
    rows, cols = grid_shape(len(series_list))
    els = []
    for i, (s, m) in enumerate(zip(series_list, styles)):
        r, c = divmod(i, cols)
        sub = _mini_tempograph(s, m, ylim, panel_width, panel_height)
        els.append(Group(sub, c * panel_width, r * panel_height))
    return ChartScene(cols * panel_width, rows * panel_height, tuple(els))


def histogram_chart(
    hist: HistogramResult,
    pdf: SplinePdf,
    stats: SummaryStats,
    meta: RecordingMeta,
    width: float = 420.0,
    height: float = 300.0,
) -> ChartScene:
    """Density-scaled histogram with the smoothed density drawn bold and a dashed mean line."""
    heights = hist.density_heights()
    top = nice_upper(max(float(heights.max()), float(pdf.density.max())) * 1.05)
    frame = Frame(56, 28, width - 56 - 12, height - 28 - 40, (float(hist.edges[0]), float(hist.edges[-1])),
                  (0.0, top))
    color = meta.color or RECORDING_COLORS[0]
    els: list = [frame.x_axis(nice_ticks(*frame.xlim), "Tempo (BPM)"),
                 frame.y_axis(nice_ticks(0.0, top, 4), "Density")]
    for k in range(hist.n_bins):
        x, y, w, h = frame.rect(hist.edges[k], hist.edges[k + 1], 0.0, heights[k])
        els.append(Rect(x, y, w, h, color, "#ffffff", 0.5, 0.35))
    els.append(Polyline(frame.points(pdf.grid, pdf.density), color, 2.2))
    els.append(Polyline(frame.points([stats.mean_bpm] * 2, [0.0, top]), MEAN_LINE_COLOR, 1.2, "dashed"))
    els.append(Legend(frame.right - 4, frame.top + 4, (
        LegendEntry("spline PDF", color),
        LegendEntry(f"mean {stats.mean_bpm:.1f} BPM", MEAN_LINE_COLOR, dash="dashed"),
    )))
    els.append(_title(width, meta.label))
    return ChartScene(width, height, tuple(els))


def histogram_row(panels: Sequence[tuple[HistogramResult, SplinePdf, SummaryStats, RecordingMeta]],
                  width: float = 420.0, height: float = 300.0) -> ChartScene:
    """Histograms side by side, one per recording."""
    els = tuple(Group(histogram_chart(h, p, s, m, width, height), i * width, 0.0)
                for i, (h, p, s, m) in enumerate(panels))
    return ChartScene(width * len(panels), height, els)


def auto_offsets(kdes: Sequence[KdeCurve], scale: float, overlap: float = RIDGE_MAX_OVERLAP) -> list[float]:
    """Evenly spaced baselines, top ridge first, so neighbours overlap at most ``overlap`` of the tallest ridge."""
    peak = max(float(k.density.max()) for k in kdes) * scale
    step = (1.0 - overlap) * peak
    n = len(kdes)
    return [(n - 1 - i) * step for i in range(n)]


def coolwarm(t: float) -> str:
    """Blue-white-red diverging color for ``t`` in [0, 1]."""
    stops = ((0.0, (59, 76, 192)), (0.5, (221, 221, 221)), (1.0, (180, 4, 38)))
    t = min(max(t, 0.0), 1.0)
    (t0, c0), (t1, c1) = (stops[0], stops[1]) if t <= 0.5 else (stops[1], stops[2])
    f = (t - t0) / (t1 - t0)
    rgb = [round(a + (b - a) * f) for a, b in zip(c0, c1)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def ridgeline(
    kdes: Sequence[KdeCurve],
    offsets: Sequence[float] | None = None,
    scale: float = RIDGE_SCALE,
    meta: Sequence[RecordingMeta] = (),
    means: Sequence[float] = (),
    width: float = 640.0,
    height: float | None = None,
) -> ChartScene:
    """Stacked density ridges on a shared BPM axis.

    ``offsets`` are the baselines, top ridge first. Left as ``None`` they
    default to ``(0.55, 0.0)`` for two ridges and to even spacing otherwise.
    """
    n = len(kdes)
    if n == 0:
        raise DomainError("ridgeline needs at least one density")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")
    if offsets is None:
        offsets = list(RIDGE_OFFSETS) if n == 2 else auto_offsets(kdes, scale)
    if len(offsets) != n:
        raise DomainError(f"{len(offsets)} offsets for {n} densities")
    if means and len(means) != n:
        raise DomainError(f"{len(means)} means for {n} densities")
    if meta and len(meta) != n:
        raise DomainError(f"{len(meta)} metadata entries for {n} densities")
    if height is None:
        height = 100.0 + 60.0 * n

    labels = [m.label for m in meta] if meta else [f"#{i + 1}" for i in range(n)]
    colors = [m.color for m in meta] if meta else [None] * n
    if any(c is None for c in colors):
        if n > 2 and means:
            lo, hi = min(means), max(means)
            fallback = [coolwarm((v - lo) / (hi - lo) if hi > lo else 0.5) for v in means]
        else:
            fallback = [RECORDING_COLORS[i % len(RECORDING_COLORS)] for i in range(n)]
        colors = [c or f for c, f in zip(colors, fallback)]

    tops = [off + float(k.density.max()) * scale for k, off in zip(kdes, offsets)]
    xlim = (min(float(k.grid[0]) for k in kdes), max(float(k.grid[-1]) for k in kdes))
    ylo = min(offsets)
    yhi = max(tops)
    yhi += 0.08 * (yhi - ylo if yhi > ylo else 1.0)
    frame = Frame(90, 24, width - 90 - 16, height - 24 - 40, xlim, (ylo, yhi))

    els: list = [frame.x_axis(nice_ticks(*xlim, 8), "Tempo (BPM)"), frame.y_axis(())]
    for i, (k, off) in enumerate(zip(kdes, offsets)):
        curve = frame.points(k.grid, k.density * scale + off)
        base = (frame.point(float(k.grid[-1]), off), frame.point(float(k.grid[0]), off))
        els.append(Polygon(curve + base, colors[i], 0.55))
        els.append(Polyline(curve, colors[i], 2.0))
        if means:
            els.append(Polyline(frame.points([means[i]] * 2, [off, tops[i]]), colors[i], 1.3, "dotted", 0.85))
        els.append(Text(frame.left - 6, frame.sy(off) - 3, labels[i], anchor="end", size=9.0))
    return ChartScene(width, height, tuple(els))


def stacked_bars(
    durations: Sequence[SectionDurations],
    section_colors: Sequence[str] = SECTION_COLORS,
    percent: bool = False,
    meta: Sequence[RecordingMeta] = (),
    width: float = 360.0,
    height: float = 300.0,
) -> ChartScene:
    """One bar per recording, built from section durations stacked in section order."""
    if not durations:
        raise DomainError("stacked bars need at least one recording")
    names = durations[0].names
    for d in durations[1:]:
        if d.names != names:
            raise DomainError(
                f"section names differ: {d.recording_id!r} has {d.names}, "
                f"{durations[0].recording_id!r} has {names}"
            )
    if not section_colors:
        raise DomainError("no section colors given")
    styles = resolve_meta([d.recording_id for d in durations], meta)
    n = len(durations)
    if percent:
        top = 100.0
        stacks = [[100.0 * v / d.total for v in d.values] for d in durations]
    else:
        top = nice_upper(max(d.total for d in durations) * 1.05)
        stacks = [d.values for d in durations]
    legend_w = max(text_width(s, 9.0) for s in names) + 34
    frame = Frame(56, 28, width - 56 - 12 - legend_w, height - 28 - 40, (-0.6, n - 0.4), (0.0, top))
    els: list = [frame.x_axis(_categorical(n, [m.label for m in styles])),
                 frame.y_axis(nice_ticks(0.0, top), "Share of duration (%)" if percent else "Duration (s)")]
    for i, vals in enumerate(stacks):
        bottom = 0.0
        for j, v in enumerate(vals):
            x, y, w, h = frame.rect(i - 0.3, i + 0.3, bottom, bottom + v)
            els.append(Rect(x, y, w, h, section_colors[j % len(section_colors)], "#ffffff", 1.0))
            bottom += v
    els.append(Legend(width - 8, frame.top, tuple(
        LegendEntry(s, section_colors[j % len(section_colors)], "patch") for j, s in enumerate(names))))
    return ChartScene(width, height, tuple(els))


def combination_chart(inputs: CombinationInputs, width: float = 420.0, height: float = 320.0) -> ChartScene:
    """Mean-tempo bars (left axis), std markers (right axis) and reference tempo lines."""
    recs = inputs.recordings
    n = len(recs)
    left_top = nice_upper(max([r.mean_bpm for r in recs] + [ref.bpm for ref in inputs.references]) * 1.05)
    right_top = nice_upper(max(r.std_bpm for r in recs) * 1.05)
    frame = Frame(56, 28, width - 56 - 56, height - 28 - 40, (-0.6, n - 0.4), (0.0, left_top))
    right = frame.with_ylim((0.0, right_top))
    els: list = [
        frame.x_axis(_categorical(n, [r.label for r in recs])),
        frame.y_axis(nice_ticks(0.0, left_top), "Mean tempo (BPM)"),
        right.y_axis(nice_ticks(0.0, right_top), "Std. deviation (BPM)", side="right"),
    ]
    for i, r in enumerate(recs):
        x, y, w, h = frame.rect(i - 0.3, i + 0.3, 0.0, r.mean_bpm)
        els.append(Rect(x, y, w, h, r.color, r.edge_color, 1.2))
    for ref in inputs.references:
        els.append(Polyline(frame.points(frame.xlim, [ref.bpm, ref.bpm]), ref.color, 1.3, ref.dash))
    pts = right.points(range(n), [r.std_bpm for r in recs])
    if n > 1:
        els.append(Polyline(pts, STD_COLOR, 1.5, "dashed"))
    for p in pts:
        els.append(Marker(p[0], p[1], 3.5, STD_COLOR))
    entries = [LegendEntry(f"{ref.label} ({fmt_tick(ref.bpm)})", ref.color, dash=ref.dash) for ref in inputs.references]
    entries.append(LegendEntry("Std. deviation", STD_COLOR, "marker"))
    els.append(Legend(frame.right - 4, frame.top + 4, tuple(entries)))
    return ChartScene(width, height, tuple(els))


def _placeholder(width: float, height: float, message: str) -> ChartScene:
    return ChartScene(width, height, (
        Rect(8, 8, width - 16, height - 16, "#fafafa", "#cccccc", 1.0),
        Text(width / 2, height / 2, message, anchor="middle", size=10.0, color="#777777"),
    ))


@dataclass(frozen=True)
class PanelLayout:
    width: float = 1200.0
    tempo_height: float = 300.0
    hist_height: float = 300.0
    bottom_height: float = 320.0


def five_panel(
    series_list: Sequence[TempoSeries],
    sections: SectionMap | None,
    meta: Sequence[RecordingMeta],
    histograms: Sequence[tuple[HistogramResult, SplinePdf, SummaryStats]],
    kdes: Sequence[KdeCurve],
    means: Sequence[float],
    durations: Sequence[SectionDurations] | None,
    combination: CombinationInputs,
    *,
    offsets: Sequence[float] | None = None,
    scale: float = RIDGE_SCALE,
    percent: bool = False,
    layout: PanelLayout = PanelLayout(),
) -> ChartScene:
    """Tempograph across the top, one histogram per recording below it, then
    ridgeline, stacked bars and combination chart side by side.

    Each sub-scene is exactly what the standalone builder returns for the
    slot's size; see :func:`panel_scenes`.
    """
    subs = panel_scenes(series_list, sections, meta, histograms, kdes, means, durations, combination,
                        offsets=offsets, scale=scale, percent=percent, layout=layout)
    els: list = []
    for letter, (scene, x, y) in zip("abcde", subs):
        els.append(Group(scene, x, y))
        els.append(Text(x + 6, y + 16, f"({letter})", size=12.0, weight="bold"))
    height = layout.tempo_height + layout.hist_height + layout.bottom_height
    return ChartScene(layout.width, height, tuple(els))


def panel_scenes(
    series_list, sections, meta, histograms, kdes, means, durations, combination,
    *, offsets=None, scale=RIDGE_SCALE, percent=False, layout: PanelLayout = PanelLayout(),
) -> list[tuple[ChartScene, float, float]]:
    """The five sub-scenes of :func:`five_panel` with their top-left positions."""
    if len(histograms) != len(series_list):
        raise DomainError(f"{len(histograms)} histograms for {len(series_list)} recordings")
    styles = resolve_meta([s.recording_id for s in series_list], meta)
    W = layout.width
    y_b = layout.tempo_height
    y_c = y_b + layout.hist_height
    third = W / 3
    hist_w = W / len(histograms)
    a = tempograph(series_list, sections, styles, W, layout.tempo_height)
    b = histogram_row([(h, p, s, m) for (h, p, s), m in zip(histograms, styles)], hist_w, layout.hist_height)
    c = ridgeline(kdes, offsets, scale, styles, means, third, layout.bottom_height)
    if durations:
        d = stacked_bars(durations, SECTION_COLORS, percent, styles, third, layout.bottom_height)
    else:
        d = _placeholder(third, layout.bottom_height, "no section map")
    e = combination_chart(combination, third, layout.bottom_height)
    return [(a, 0.0, 0.0), (b, 0.0, y_b), (c, 0.0, y_c), (d, third, y_c), (e, 2 * third, y_c)]


def combination_inputs(
    stats: Sequence[SummaryStats],
    meta: Sequence[RecordingMeta],
    references: Sequence[ReferenceLine] = REFERENCE_LINES,
) -> CombinationInputs:
    bars = tuple(
        CombinationBar(m.label, s.mean_bpm, s.std_bpm, _lighten(m.color or RECORDING_COLORS[0]), m.color or "#333333")
        for s, m in zip(stats, meta)
    )
    return CombinationInputs(bars, tuple(references))


def _lighten(color: str, amount: float = 0.45) -> str:
    rgb = np.array([int(color[i:i + 2], 16) for i in (1, 3, 5)], dtype=float)
    rgb = rgb + (255.0 - rgb) * amount
    return "#{:02x}{:02x}{:02x}".format(*(int(round(v)) for v in rgb))
