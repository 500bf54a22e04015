"""Renderer-independent chart description.

A :class:`ChartScene` is a flat, ordered list of drawing primitives in
abstract scene units with the origin at the top left and y pointing down.
Later elements paint over earlier ones. Data coordinates reach the scene
only through a :class:`Frame`, whose per-axis maps are affine; anything
outside the frame's plot region is clamped onto its border rather than
dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Point = tuple[float, float]

DASHES = ("solid", "dashed", "dotted", "dashdot")


@dataclass(frozen=True)
class Axis:
    """An axis line with ticks.

    ``side`` is ``bottom``, ``left`` or ``right``. ``lo``/``hi`` is the data
    range and ``start``/``end`` the matching scene coordinates along the axis
    (x for a bottom axis, y for the vertical ones). ``at`` is the scene
    coordinate of the axis line itself.
    """

    side: str
    lo: float
    hi: float
    start: float
    end: float
    at: float
    ticks: tuple[tuple[float, str], ...] = ()
    label: str = ""
    color: str = "#333333"

    def to_scene(self, value: float) -> float:
        return self.start + (value - self.lo) * (self.end - self.start) / (self.hi - self.lo)

    def to_data(self, coord: float) -> float:
        return self.lo + (coord - self.start) * (self.hi - self.lo) / (self.end - self.start)


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    color: str
    width: float = 1.0
    dash: str = "solid"
    opacity: float = 1.0


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    fill: str
    opacity: float = 1.0


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float
    fill: str
    edge: str | None = None
    edge_width: float = 0.0
    opacity: float = 1.0


@dataclass(frozen=True)
class Span:
    """Axis-aligned shaded band (e.g. a formal section behind a tempo curve)."""

    x: float
    y: float
    w: float
    h: float
    fill: str
    opacity: float = 0.15


@dataclass(frozen=True)
class Text:
    x: float
    y: float
    content: str
    anchor: str = "start"
    size: float = 10.0
    color: str = "#222222"
    weight: str = "normal"
    rotate: float = 0.0


@dataclass(frozen=True)
class Marker:
    """Filled circle, e.g. a statistic plotted as a dot."""

    x: float
    y: float
    radius: float
    fill: str
    edge: str | None = None


@dataclass(frozen=True)
class LegendEntry:
    label: str
    color: str
    kind: str = "line"  # line | patch | marker
    dash: str = "solid"
    opacity: float = 1.0


@dataclass(frozen=True)
class Legend:
    """Legend box anchored at its top-right corner ``(x, y)``."""

    x: float
    y: float
    entries: tuple[LegendEntry, ...]
    size: float = 9.0


@dataclass(frozen=True)
class Group:
    """A nested scene placed at ``(x, y)`` and scaled uniformly."""

    scene: ChartScene
    x: float
    y: float
    scale: float = 1.0


Element = Union[Axis, Polyline, Polygon, Rect, Span, Text, Marker, Legend, Group]


@dataclass(frozen=True)
class ChartScene:
    width: float
    height: float
    elements: tuple[Element, ...] = field(default=())

    def of_type(self, kind: type) -> list:
        return [e for e in self.elements if isinstance(e, kind)]

    def walk(self) -> Iterable[Element]:
        """Every element, descending into groups."""
        for e in self.elements:
            yield e
            if isinstance(e, Group):
                yield from e.scene.walk()


@dataclass(frozen=True)
class Frame:
    """Plot region of a chart and the data ranges mapped onto it."""

    left: float
    top: float
    width: float
    height: float
    xlim: tuple[float, float]
    ylim: tuple[float, float]

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    def sx(self, x: float) -> float:
        lo, hi = self.xlim
        return self.left + (x - lo) * self.width / (hi - lo)

    def sy(self, y: float) -> float:
        lo, hi = self.ylim
        return self.bottom - (y - lo) * self.height / (hi - lo)

    def point(self, x: float, y: float) -> Point:
        return (_clamp(self.sx(x), self.left, self.right), _clamp(self.sy(y), self.top, self.bottom))

    def points(self, xs: Sequence[float], ys: Sequence[float]) -> tuple[Point, ...]:
        return tuple(self.point(float(x), float(y)) for x, y in zip(xs, ys))

    def rect(self, x0: float, x1: float, y0: float, y1: float) -> tuple[float, float, float, float]:
        """Scene ``(x, y, w, h)`` of the data box, clipped to the plot region."""
        (ax, ay), (bx, by) = self.point(x0, y0), self.point(x1, y1)
        return min(ax, bx), min(ay, by), abs(bx - ax), abs(by - ay)

    def x_axis(self, ticks: Iterable[tuple[float, str]], label: str = "") -> Axis:
        return Axis("bottom", self.xlim[0], self.xlim[1], self.left, self.right, self.bottom,
                    _visible(ticks, self.xlim), label)

    def y_axis(self, ticks: Iterable[tuple[float, str]], label: str = "", side: str = "left") -> Axis:
        at = self.left if side == "left" else self.right
        return Axis(side, self.ylim[0], self.ylim[1], self.bottom, self.top, at,
                    _visible(ticks, self.ylim), label)

    def with_ylim(self, ylim: tuple[float, float]) -> Frame:
        return Frame(self.left, self.top, self.width, self.height, self.xlim, ylim)


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def _visible(ticks: Iterable[tuple[float, str]], lim: tuple[float, float]) -> tuple[tuple[float, str], ...]:
    lo, hi = min(lim), max(lim)
    span = hi - lo
    return tuple((v, s) for v, s in ticks if lo - 1e-9 * span <= v <= hi + 1e-9 * span)


def nice_step(span: float, target: int = 5) -> float:
    """A 1/2/5 x 10^k step giving roughly ``target`` intervals over ``span``."""
    if span <= 0 or not math.isfinite(span):
        return 1.0
    raw = span / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag * (1 + 1e-12):
            return m * mag
    return 10.0 * mag


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[tuple[float, str]]:
    step = nice_step(hi - lo, target)
    first = math.ceil(lo / step - 1e-9)
    out = []
    k = first
    while k * step <= hi + 1e-9 * step:
        v = k * step
        out.append((v, fmt_tick(v)))
        k += 1
    return out


def nice_upper(value: float, target: int = 5) -> float:
    """Smallest multiple of a nice step that is >= ``value`` (for 0-based axes)."""
    if value <= 0:
        return 1.0
    step = nice_step(value, target)
    return math.ceil(value / step - 1e-9) * step


def fmt_tick(v: float) -> str:
    if abs(v) < 1e-12:
        return "0"
    return f"{v:.6g}"


# Approximate advance widths in em for a generic sans-serif face. Only used
# for layout, so identical on every platform.
_NARROW = set("iljtfI.,:;'|!()[] ")
_WIDE = set("mwMW@%")
_CAPS = set("ABCDEFGHJKLNOPQRSTUVXYZ&")


def char_width(ch: str) -> float:
    if ch in _NARROW:
        return 0.3
    if ch in _WIDE:
        return 0.85
    if ch in _CAPS or not ch.isascii():
        return 0.68
    return 0.56


def text_width(text: str, size: float) -> float:
    return size * sum(char_width(c) for c in text)
