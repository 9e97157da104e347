"""Minimal self-contained SVG line and step charts."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000", "#aec7e8")

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 60, 150, 30, 50


def _f(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def render_svg(series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
               xlabel: str = "", ylabel: str = "", title: str = "",
               step: bool = False) -> str:
    """
    Render named point series as an SVG document.

    Parameters
    ----------
    series : sequence of (name, points)
    step : bool
        Draw each series as a staircase (horizontal then vertical), as
        suited to cumulative distributions.
    """
    if not series or any(len(pts) == 0 for _, pts in series):
        raise ValueError("render_svg needs at least one non-empty series")
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.2f}" y="18" text-anchor="middle" '
                   f'font-size="13">{escape(title)}</text>')
    for t in _ticks(x0, x1):
        out.append(f'<text x="{_f(px(t))}" y="{TOP + ph + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{LEFT - 5}" y="{_f(py(t) + 4)}" text-anchor="end">{t:.3g}</text>')
    if xlabel:
        out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 10}" '
                   f'text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="15" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 15 {TOP + ph / 2:.2f})">{escape(ylabel)}</text>')
    for idx, (name, pts) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        coords = []
        prev = None
        for x, y in pts:
            if step and prev is not None:
                coords.append((x, prev[1]))
            coords.append((x, y))
            prev = (x, y)
        path = " ".join(f"{_f(px(x))},{_f(py(y))}" for x, y in coords)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = TOP + 12 + 16 * idx
        lx = LEFT + pw + 10
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="2"/>')
        out.append(f'<text x="{lx + 25}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
