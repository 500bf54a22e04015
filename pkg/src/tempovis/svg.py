"""Serialise a :class:`ChartScene` to a standalone SVG document.

Output is byte-for-byte reproducible: numbers are written with exactly three
decimals (halves rounded away from zero), there are no ids or timestamps, and
styling uses presentation attributes only.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from xml.sax.saxutils import escape, quoteattr

from .charts.scene import (
    Axis,
    ChartScene,
    Group,
    Legend,
    Marker,
    Polygon,
    Polyline,
    Rect,
    Span,
    Text,
    text_width,
)

FONT_FAMILY = "sans-serif"
DASH_ARRAYS = {
    "solid": None,
    "dashed": "6,4",
    "dotted": "1.5,3",
    "dashdot": "7,3,1.5,3",
}
TICK_LENGTH = 4.0
TICK_LABEL_SIZE = 9.0
AXIS_LABEL_SIZE = 10.0

_MILLI = Decimal("0.001")


@dataclass(frozen=True)
class SvgDocument:
    text: str
    width_px: int
    height_px: int

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.text)


def fmt(value: float) -> str:
    """Fixed three-decimal rendering, rounding halves away from zero."""
    d = Decimal(repr(float(value))).quantize(_MILLI, rounding=ROUND_HALF_UP)
    s = f"{d:.3f}"
    return "0.000" if s == "-0.000" else s


def _attrs(**kw) -> str:
    parts = []
    for k, v in kw.items():
        if v is None:
            continue
        if isinstance(v, float):
            v = fmt(v)
        parts.append(f"{k.replace('_', '-')}={quoteattr(str(v))}")
    return " ".join(parts)


def _pts(points) -> str:
    return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)


def _opacity(value: float, name: str = "opacity") -> dict:
    return {} if value >= 1.0 else {name: float(value)}


def _text(x, y, content, *, size, anchor="start", color="#222222", weight="normal", rotate=0.0,
          baseline: float = 0.0) -> str:
    attrs = dict(x=float(x), y=float(y + baseline), font_family=FONT_FAMILY, font_size=float(size),
                 fill=color, text_anchor=anchor)
    if weight != "normal":
        attrs["font_weight"] = weight
    if rotate:
        attrs["transform"] = f"rotate({fmt(rotate)} {fmt(x)} {fmt(y)})"
    return f"<text {_attrs(**attrs)}>{escape(content)}</text>"


def _axis(a: Axis) -> list[str]:
    out = []
    horizontal = a.side == "bottom"
    if horizontal:
        out.append(f"<line {_attrs(x1=float(a.start), y1=float(a.at), x2=float(a.end), y2=float(a.at), stroke=a.color, stroke_width=1.0)}/>")
    else:
        out.append(f"<line {_attrs(x1=float(a.at), y1=float(a.start), x2=float(a.at), y2=float(a.end), stroke=a.color, stroke_width=1.0)}/>")
    sign = -1.0 if a.side == "left" else 1.0
    for value, label in a.ticks:
        p = a.to_scene(value)
        if horizontal:
            out.append(f"<line {_attrs(x1=float(p), y1=float(a.at), x2=float(p), y2=float(a.at + TICK_LENGTH), stroke=a.color, stroke_width=1.0)}/>")
            out.append(_text(p, a.at + TICK_LENGTH + TICK_LABEL_SIZE, label, size=TICK_LABEL_SIZE, anchor="middle",
                             color=a.color))
        else:
            tip = a.at + sign * TICK_LENGTH
            out.append(f"<line {_attrs(x1=float(a.at), y1=float(p), x2=float(tip), y2=float(p), stroke=a.color, stroke_width=1.0)}/>")
            out.append(_text(tip + sign * 2.0, p, label, size=TICK_LABEL_SIZE,
                             anchor="end" if a.side == "left" else "start", color=a.color,
                             baseline=TICK_LABEL_SIZE * 0.35))
    if a.label:
        mid = (a.start + a.end) / 2
        if horizontal:
            out.append(_text(mid, a.at + TICK_LENGTH + TICK_LABEL_SIZE + 16, a.label, size=AXIS_LABEL_SIZE,
                             anchor="middle", color=a.color))
        else:
            widest = max((text_width(s, TICK_LABEL_SIZE) for _, s in a.ticks), default=0.0)
            x = a.at + sign * (TICK_LENGTH + widest + 10)
            out.append(_text(x, mid, a.label, size=AXIS_LABEL_SIZE, anchor="middle", color=a.color,
                             rotate=-90.0 if a.side == "left" else 90.0))
    return out


def _legend(lg: Legend) -> list[str]:
    if not lg.entries:
        return []
    row = lg.size + 5
    swatch = 18.0
    width = swatch + 12 + max(text_width(e.label, lg.size) for e in lg.entries)
    height = row * len(lg.entries) + 6
    x0 = lg.x - width
    out = [f"<rect {_attrs(x=float(x0), y=float(lg.y), width=float(width), height=float(height), fill='#ffffff', fill_opacity=0.85, stroke='#cccccc', stroke_width=0.5)}/>"]
    for i, e in enumerate(lg.entries):
        cy = lg.y + 3 + row * i + row / 2
        sx = x0 + 4
        if e.kind == "patch":
            out.append(f"<rect {_attrs(x=float(sx), y=float(cy - lg.size / 2), width=swatch, height=float(lg.size), fill=e.color, stroke='#999999', stroke_width=0.5, **_opacity(e.opacity, 'fill_opacity'))}/>")
        elif e.kind == "marker":
            out.append(_circle(sx + swatch / 2, cy, 3.0, e.color, None))
        else:
            out.append(f"<line {_attrs(x1=float(sx), y1=float(cy), x2=float(sx + swatch), y2=float(cy), stroke=e.color, stroke_width=1.5, stroke_dasharray=DASH_ARRAYS[e.dash], **_opacity(e.opacity, 'stroke_opacity'))}/>")
        out.append(_text(sx + swatch + 4, cy, e.label, size=lg.size, baseline=lg.size * 0.35))
    return out


def _circle(x: float, y: float, r: float, fill: str, edge: str | None) -> str:
    d = (f"M {fmt(x - r)},{fmt(y)} A {fmt(r)},{fmt(r)} 0 1 0 {fmt(x + r)},{fmt(y)} "
         f"A {fmt(r)},{fmt(r)} 0 1 0 {fmt(x - r)},{fmt(y)} Z")
    return f"<path {_attrs(d=d, fill=fill, stroke=edge, stroke_width=1.0 if edge else None)}/>"


def render_elements(elements) -> list[str]:
    """SVG lines for ``elements`` in paint order, one element per line."""
    out: list[str] = []
    for e in elements:
        if isinstance(e, Span):
            out.append(f"<rect {_attrs(x=float(e.x), y=float(e.y), width=float(e.w), height=float(e.h), fill=e.fill, fill_opacity=float(e.opacity))}/>")
        elif isinstance(e, Rect):
            out.append(f"<rect {_attrs(x=float(e.x), y=float(e.y), width=float(e.w), height=float(e.h), fill=e.fill, stroke=e.edge, stroke_width=float(e.edge_width) if e.edge else None, **_opacity(e.opacity, 'fill_opacity'))}/>")
        elif isinstance(e, Polyline):
            out.append(f"<polyline {_attrs(points=_pts(e.points), fill='none', stroke=e.color, stroke_width=float(e.width), stroke_dasharray=DASH_ARRAYS[e.dash], stroke_linejoin='round', **_opacity(e.opacity, 'stroke_opacity'))}/>")
        elif isinstance(e, Polygon):
            out.append(f"<polygon {_attrs(points=_pts(e.points), fill=e.fill, stroke='none', **_opacity(e.opacity, 'fill_opacity'))}/>")
        elif isinstance(e, Text):
            out.append(_text(e.x, e.y, e.content, size=e.size, anchor=e.anchor, color=e.color, weight=e.weight,
                             rotate=e.rotate))
        elif isinstance(e, Marker):
            out.append(_circle(e.x, e.y, e.radius, e.fill, e.edge))
        elif isinstance(e, Axis):
            out.extend(_axis(e))
        elif isinstance(e, Legend):
            out.extend(_legend(e))
        elif isinstance(e, Group):
            transform = f"translate({fmt(e.x)},{fmt(e.y)})"
            if e.scale != 1.0:
                transform += f" scale({fmt(e.scale)})"
            out.append(f"<g {_attrs(transform=transform)}>")
            out.extend(render_elements(e.scene.elements))
            out.append("</g>")
        else:
            raise TypeError(f"cannot render {type(e).__name__}")
    return out


def render(scene: ChartScene, width_px: int | None = None, height_px: int | None = None) -> SvgDocument:
    """Render ``scene``; pixel size defaults to the scene size rounded to integers."""
    w = int(round(scene.width)) if width_px is None else int(width_px)
    h = int(round(scene.height)) if height_px is None else int(height_px)
    if w <= 0 or h <= 0:
        raise ValueError(f"pixel dimensions must be positive, got {w}x{h}")
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {fmt(scene.width)} {fmt(scene.height)}">'
    )
    lines = [head, f'<rect x="0.000" y="0.000" width="{fmt(scene.width)}" height="{fmt(scene.height)}" fill="#ffffff"/>']
    lines.extend(render_elements(scene.elements))
    lines.append("</svg>")
    return SvgDocument("\n".join(lines) + "\n", w, h)
