"""Deterministic SVG 1.1 charts: log-log rooflines and linear OI curves.

SVG is generated directly as text with fixed number formatting, so a chart
built from the same inputs is byte-identical across runs and platforms.
No plotting library is involved.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .analysis import OICurveSet, RooflineDataset
from .formatting import fmt

# External-literature decorations for classic kernels; purely optional
# markers, not produced (or acceptance-tested) by this toolkit.
DEFAULT_REFERENCE_MARKERS = (
    ("SpMV", 0.166),
    ("7pt stencil", 0.5),
    ("3DFFT", 1.64),
)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

WIDTH = 720
HEIGHT = 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 44, 56


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple  # ((x, y), ...)
    color: str
    dashed: bool = False


@dataclass(frozen=True)
class PointMarker:
    label: str
    x: float
    y: float
    color: str
    filled: bool = False


@dataclass(frozen=True)
class RefLine:
    label: str
    value: float
    orient: str  # "h" | "v"


@dataclass(frozen=True)
class ChartSpec:
    """Renderable chart description.

    kind "roofline" uses log-log axes and always carries the two roof
    segments (bandwidth slope + compute roof) in `series`; kind "oi-curve"
    uses linear axes.
    """

    kind: str
    title: str
    x_label: str
    y_label: str
    log_axes: bool
    series: tuple = ()
    markers: tuple = ()
    ref_lines: tuple = ()
    shade_from_x: Optional[float] = None  # compute-bound highlight start
    shade_to_y: Optional[float] = None  # roof height of the highlight


def roofline_chart(dataset: RooflineDataset, ref_markers=(), title=None) -> ChartSpec:
    """Chart spec for one machine's roofline plus its pinned points."""
    m = dataset.machine
    slope, flat = dataset.roof_segments
    series = [
        Series(f"bandwidth {fmt(m.peak_bw_achievable)} GB/s", slope, "#333333"),
        Series(f"compute roof {fmt(m.peak_gflops_achievable)} GFLOPS", flat, "#333333"),
    ]
    markers = []
    for i, p in enumerate(dataset.points):
        color = _PALETTE[i % len(_PALETTE)]
        markers.append(PointMarker(p.label, p.oi, p.attainable_gflops, color))
        if p.measured_gflops is not None:
            markers.append(
                PointMarker(f"{p.label} measured", p.oi, p.measured_gflops, color, filled=True)
            )
    ref_lines = [RefLine(f"ridge {fmt(dataset.ridge)}", dataset.ridge, "v")]
    for label, oi in ref_markers:
        ref_lines.append(RefLine(label, oi, "v"))
    return ChartSpec(
        kind="roofline",
        title=title or f"Roofline: {m.name}",
        x_label="operational intensity [FLOPs/byte]",
        y_label="attainable [GFLOPS]",
        log_axes=True,
        series=tuple(series),
        markers=tuple(markers),
        ref_lines=tuple(ref_lines),
        shade_from_x=dataset.ridge,
        shade_to_y=m.peak_gflops_achievable,
    )


def oi_curve_chart(curves: OICurveSet, title=None) -> ChartSpec:
    """Chart spec for OI-vs-stencil-size curves with ridge markers."""
    series = [
        Series(s.equation, s.points, _PALETTE[i % len(_PALETTE)])
        for i, s in enumerate(curves.series)
    ]
    ref_lines = [
        RefLine(f"{name} I_min {fmt(imin)}", imin, "h")
        for name, imin in curves.ridge_markers
    ]
    return ChartSpec(
        kind="oi-curve",
        title=title or "Operational intensity vs stencil size",
        x_label="stencil size k",
        y_label="OI [FLOPs/byte]",
        log_axes=False,
        series=tuple(series),
        markers=(),
        ref_lines=tuple(ref_lines),
    )


def _data_ranges(spec: ChartSpec):
    xs, ys = [], []
    for s in spec.series:
        for x, y in s.points:
            xs.append(x)
            ys.append(y)
    for p in spec.markers:
        xs.append(p.x)
        ys.append(p.y)
    for r in spec.ref_lines:
        (xs if r.orient == "v" else ys).append(r.value)
    if not xs:
        xs = [0.1, 1.0]
    if not ys:
        ys = [0.1, 1.0]
    return min(xs), max(xs), min(ys), max(ys)


def _nice_step(span: float) -> float:
    raw = span / 5.0 if span > 0 else 1.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def _linear_ticks(lo: float, hi: float):
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi * (1 + 1e-9):
        ticks.append(round(t, 10))
        t += step
    return ticks


def _log_ticks(lo: float, hi: float):
    return [
        10.0 ** n
        for n in range(math.ceil(math.log10(lo) - 1e-9), math.floor(math.log10(hi) + 1e-9) + 1)
    ]


class _Frame:
    """Data-to-pixel transform over the plot rectangle."""

    def __init__(self, spec, x_range, y_range):
        self.log = spec.log_axes
        self.x_lo, self.x_hi = x_range
        self.y_lo, self.y_hi = y_range
        self.px_lo = MARGIN_L
        self.px_hi = WIDTH - MARGIN_R
        self.py_lo = HEIGHT - MARGIN_B
        self.py_hi = MARGIN_T

    def _t(self, v, lo, hi):
        if self.log:
            return (math.log10(v) - math.log10(lo)) / (math.log10(hi) - math.log10(lo))
        return (v - lo) / (hi - lo)

    def x(self, v) -> float:
        return self.px_lo + self._t(v, self.x_lo, self.x_hi) * (self.px_hi - self.px_lo)

    def y(self, v) -> float:
        return self.py_lo + self._t(v, self.y_lo, self.y_hi) * (self.py_hi - self.py_lo)


def _px(v: float) -> str:
    return f"{v:.2f}"


def render_svg(spec: ChartSpec) -> str:
    """Render a ChartSpec to SVG text (deterministic for fixed inputs)."""
    x_min, x_max, y_min, y_max = _data_ranges(spec)
    if spec.log_axes:
        x_range = (x_min / 1.5, x_max * 1.5)
        y_range = (y_min / 2.0, y_max * 2.0)
        x_ticks = _log_ticks(*x_range)
        y_ticks = _log_ticks(*y_range)
    else:
        span_x = (x_max - x_min) or 1.0
        x_range = (x_min - 0.02 * span_x, x_max + 0.05 * span_x)
        y_range = (0.0, (y_max or 1.0) * 1.08)
        x_ticks = _linear_ticks(*x_range)
        y_ticks = _linear_ticks(*y_range)
    f = _Frame(spec, x_range, y_range)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="15">{spec.title}</text>',
    ]

    # Compute-bound region highlight (roofline only).
    if spec.shade_from_x is not None and spec.shade_to_y is not None:
        x0 = f.x(max(spec.shade_from_x, x_range[0]))
        y0 = f.y(min(spec.shade_to_y, y_range[1]))
        out.append(
            f'<rect x="{_px(x0)}" y="{_px(y0)}" width="{_px(f.px_hi - x0)}" '
            f'height="{_px(f.py_lo - y0)}" fill="#fdf0d5"/>'
        )

    # Grid and ticks.
    for t in x_ticks:
        xp = f.x(t)
        out.append(
            f'<line x1="{_px(xp)}" y1="{f.py_hi}" x2="{_px(xp)}" y2="{f.py_lo}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_px(xp)}" y="{f.py_lo + 18}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{fmt(t)}</text>'
        )
    for t in y_ticks:
        yp = f.y(t)
        out.append(
            f'<line x1="{f.px_lo}" y1="{_px(yp)}" x2="{f.px_hi}" y2="{_px(yp)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{f.px_lo - 6}" y="{_px(yp + 4)}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{fmt(t)}</text>'
        )

    # Axes frame and labels.
    out.append(
        f'<rect x="{f.px_lo}" y="{f.py_hi}" width="{f.px_hi - f.px_lo}" '
        f'height="{f.py_lo - f.py_hi}" fill="none" stroke="#000000" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{(f.px_lo + f.px_hi) // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{spec.x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{(f.py_lo + f.py_hi) // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 18 {(f.py_lo + f.py_hi) // 2})">{spec.y_label}</text>'
    )

    # Reference lines.
    for r in spec.ref_lines:
        if r.orient == "v":
            if not x_range[0] <= r.value <= x_range[1]:
                continue
            xp = f.x(r.value)
            out.append(
                f'<line x1="{_px(xp)}" y1="{f.py_hi}" x2="{_px(xp)}" y2="{f.py_lo}" '
                f'stroke="#999999" stroke-width="1" stroke-dasharray="5,4"/>'
            )
            out.append(
                f'<text x="{_px(xp + 4)}" y="{f.py_hi + 14}" font-family="monospace" '
                f'font-size="10" fill="#555555">{r.label}</text>'
            )
        else:
            if not y_range[0] <= r.value <= y_range[1]:
                continue
            yp = f.y(r.value)
            out.append(
                f'<line x1="{f.px_lo}" y1="{_px(yp)}" x2="{f.px_hi}" y2="{_px(yp)}" '
                f'stroke="#999999" stroke-width="1" stroke-dasharray="5,4"/>'
            )
            out.append(
                f'<text x="{f.px_hi - 4}" y="{_px(yp - 4)}" text-anchor="end" '
                f'font-family="monospace" font-size="10" fill="#555555">{r.label}</text>'
            )

    # Series polylines.
    for s in spec.series:
        pts = " ".join(f"{_px(f.x(x))},{_px(f.y(y))}" for x, y in s.points)
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(
            f'<polyline fill="none" stroke="{s.color}" stroke-width="2"{dash} '
            f'points="{pts}"/>'
        )

    # Point markers.
    for p in spec.markers:
        cx, cy = f.x(p.x), f.y(p.y)
        if p.filled:
            out.append(
                f'<circle cx="{_px(cx)}" cy="{_px(cy)}" r="5" fill="{p.color}"/>'
            )
        else:
            out.append(
                f'<circle cx="{_px(cx)}" cy="{_px(cy)}" r="5" fill="#ffffff" '
                f'stroke="{p.color}" stroke-width="2"/>'
            )

    # Legend: series first, then named points.
    entries = [(s.label, s.color, "line") for s in spec.series]
    entries += [(p.label, p.color, "dot") for p in spec.markers]
    ly = MARGIN_T + 14
    for label, color, kind in entries:
        if kind == "line":
            out.append(
                f'<line x1="{f.px_lo + 10}" y1="{ly - 4}" x2="{f.px_lo + 34}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
            )
        else:
            out.append(
                f'<circle cx="{f.px_lo + 22}" cy="{ly - 4}" r="4" fill="{color}"/>'
            )
        out.append(
            f'<text x="{f.px_lo + 40}" y="{ly}" font-family="monospace" '
            f'font-size="11">{label}</text>'
        )
        ly += 16

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(spec: ChartSpec, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(spec))
