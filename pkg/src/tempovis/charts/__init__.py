"""Chart scenes for the five tempo views and their composite."""

from .compose import (
    REFERENCE_LINES,
    CombinationBar,
    CombinationInputs,
    ReferenceLine,
    auto_offsets,
    combination_chart,
    five_panel,
    histogram_chart,
    ridgeline,
    small_multiples,
    stacked_bars,
    tempograph,
)
from .scene import ChartScene, Frame

__all__ = [
    "REFERENCE_LINES",
    "ChartScene",
    "CombinationBar",
    "CombinationInputs",
    "Frame",
    "ReferenceLine",
    "auto_offsets",
    "combination_chart",
    "five_panel",
    "histogram_chart",
    "ridgeline",
    "small_multiples",
    "stacked_bars",
    "tempograph",
]
