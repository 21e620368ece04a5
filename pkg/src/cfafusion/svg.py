"""Minimal SVG line chart for rank-score series, standard library only."""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 1000, 600
_PAD_LEFT, _PAD_RIGHT, _PAD_TOP, _PAD_BOTTOM = 70.0, 170.0, 40.0, 60.0
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
# Longer series are thinned to this many points per polyline.
_MAX_POINTS = 2000


def _thin(points: Sequence[tuple[float, float]]) -> Sequence[tuple[float, float]]:
    if len(points) <= _MAX_POINTS:
        return points
    step = (len(points) - 1) / (_MAX_POINTS - 1)
    return [points[round(i * step)] for i in range(_MAX_POINTS)]


def render_rsc_chart(series: Mapping[str, Sequence[tuple[float, float]]], title: str = "Rank-score characteristic") -> str:
    """One polyline per system, score (y, 0..1) against rank (x, 1..n)."""
    if not series:
        raise ValueError("no series to plot")
    n = max(len(pts) for pts in series.values())
    plot_w = WIDTH - _PAD_LEFT - _PAD_RIGHT
    plot_h = HEIGHT - _PAD_TOP - _PAD_BOTTOM
    x_span = max(n - 1, 1)

    def px(rank: float) -> float:
        return _PAD_LEFT + (rank - 1) / x_span * plot_w

    def py(score: float) -> float:
        return _PAD_TOP + (1.0 - score) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>',
    ]
    x0, x1 = _PAD_LEFT, _PAD_LEFT + plot_w
    y0, y1 = _PAD_TOP, _PAD_TOP + plot_h
    out.append(f'<line x1="{x0:.1f}" y1="{y1:.1f}" x2="{x1:.1f}" y2="{y1:.1f}" stroke="black"/>')
    out.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" y2="{y1:.1f}" stroke="black"/>')
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = py(tick)
        out.append(f'<line x1="{x0 - 5:.1f}" y1="{y:.1f}" x2="{x0:.1f}" y2="{y:.1f}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8:.1f}" y="{y + 4:.1f}" text-anchor="end" font-family="sans-serif" font-size="12">{tick:.2f}</text>'
        )
    for rank in sorted({1, (n + 1) // 2, n}):
        x = px(rank)
        out.append(
            f'<text x="{x:.1f}" y="{y1 + 18:.1f}" text-anchor="middle" font-family="sans-serif" font-size="12">{rank}</text>'
        )
    out.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" font-family="sans-serif" font-size="13">rank</text>'
    )
    out.append(
        f'<text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">normalized score</text>'
    )

    for k, (sid, pts) in enumerate(series.items()):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{px(r):.2f},{py(s):.2f}" for r, s in _thin(pts))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = _PAD_TOP + 10 + 22 * k
        lx = x1 + 20
        out.append(f'<line x1="{lx:.1f}" y1="{ly:.1f}" x2="{lx + 24:.1f}" y2="{ly:.1f}" stroke="{color}" stroke-width="3"/>')
        out.append(
            f'<text x="{lx + 30:.1f}" y="{ly + 4:.1f}" font-family="sans-serif" font-size="13">{escape(sid)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
