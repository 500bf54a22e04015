"""Visualising bar-level tempo data from music performances."""

from .density import empirical_cdf, gaussian_kde, histogram, jitter, spline_pdf
from .errors import DomainError, ParseError, TempovisError
from .ingest import (
    bpm_from_bar,
    duration_from_bpm,
    load_meta,
    load_sections,
    load_timing,
    parse_section_csv,
    parse_timing_csv,
)
from .model import BarRecord, RecordingMeta, SectionMap, SummaryStats, TempoSeries, validate_series
from .sections import section_durations, summary_stats
from .spline import fit_clamped_spline

__version__ = "0.1.0"

__all__ = [
    "BarRecord",
    "DomainError",
    "ParseError",
    "RecordingMeta",
    "SectionMap",
    "SummaryStats",
    "TempoSeries",
    "TempovisError",
    "bpm_from_bar",
    "duration_from_bpm",
    "empirical_cdf",
    "fit_clamped_spline",
    "gaussian_kde",
    "histogram",
    "jitter",
    "load_meta",
    "load_sections",
    "load_timing",
    "parse_section_csv",
    "parse_timing_csv",
    "section_durations",
    "spline_pdf",
    "summary_stats",
    "validate_series",
]
