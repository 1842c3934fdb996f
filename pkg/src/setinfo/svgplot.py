"""Self-contained SVG line plots of rolling-mean MI trajectories.

No plotting dependency: the figure is a single hand-assembled SVG document
with axes, ticks, a legend, and one polyline per (agent, series) curve.
Single-point series degenerate to a marker so they stay visible.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol, Sequence


class EmptySelection(ValueError):
    """The series selection resolved to nothing."""


class SeriesProvider(Protocol):
    agent: str
    rolling: dict[str, list[float]]


_PALETTE = (
    "#1b6ca8", "#c23b22", "#2e8b57", "#8a2be2",
    "#d4870f", "#16848c", "#a6325b", "#556b2f",
)

_MARGIN_LEFT = 70
_MARGIN_RIGHT = 180
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 55


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def write_svg(
    results: Sequence[SeriesProvider],
    series: Sequence[str] | str,
    path: str | Path,
    width: int = 900,
    height: int = 480,
    title: str = "",
) -> None:
    """Render the selected rolling-mean series of every result into one SVG."""
    if not results:
        raise ValueError("write_svg needs at least one result")
    if isinstance(series, str):
        names = [s.strip() for s in series.split(",") if s.strip()]
    else:
        names = [s for s in series if s]
    if not names:
        raise EmptySelection("no series selected")

    curves: list[tuple[str, list[float]]] = []
    for result in results:
        for name in names:
            if name not in result.rolling:
                known = sorted(result.rolling)
                raise ValueError(f"unknown series {name!r}; known: {known}")
            values = list(result.rolling[name])
            if values:
                curves.append((f"{result.agent}: {name}", values))
    if not curves:
        raise EmptySelection("selected series contain no points")

    x_max = max(len(values) for _, values in curves)
    y_lo = min(min(values) for _, values in curves)
    y_hi = max(max(values) for _, values in curves)
    if y_hi == y_lo:
        y_lo -= 0.5
        y_hi += 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(i: int) -> float:
        frac = i / (x_max - 1) if x_max > 1 else 0.5
        return _MARGIN_LEFT + frac * plot_w

    def sy(v: float) -> float:
        frac = (v - y_lo) / (y_hi - y_lo)
        return _MARGIN_TOP + (1.0 - frac) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" '
            f'font-size="15">{_esc(title)}</text>'
        )

    axis_color = "#333333"
    x0, y0 = _MARGIN_LEFT, _MARGIN_TOP + plot_h
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="{axis_color}"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{_MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="{axis_color}"/>'
    )
    for tick in _ticks(0, max(x_max - 1, 1)):
        tx = sx(round(tick))
        parts.append(f'<line x1="{tx:.1f}" y1="{y0}" x2="{tx:.1f}" y2="{y0 + 5}" stroke="{axis_color}"/>')
        parts.append(
            f'<text x="{tx:.1f}" y="{y0 + 18}" text-anchor="middle">{round(tick)}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        ty = sy(tick)
        parts.append(f'<line x1="{x0 - 5}" y1="{ty:.1f}" x2="{x0}" y2="{ty:.1f}" stroke="{axis_color}"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{ty + 4:.1f}" text-anchor="end">{tick:.3g}</text>'
        )
    parts.append(
        f'<text x="{x0 + plot_w / 2:.1f}" y="{height - 14}" text-anchor="middle">step k</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MARGIN_TOP + plot_h / 2:.1f})">MI (nats)</text>'
    )

    legend_x = _MARGIN_LEFT + plot_w + 16
    for idx, (label, values) in enumerate(curves):
        color = _PALETTE[idx % len(_PALETTE)]
        if len(values) == 1:
            parts.append(
                f'<circle cx="{sx(0):.1f}" cy="{sy(values[0]):.1f}" r="4" fill="{color}"/>'
            )
        else:
            points = " ".join(f"{sx(i):.1f},{sy(v):.1f}" for i, v in enumerate(values))
            parts.append(
                f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.6"/>'
            )
        ly = _MARGIN_TOP + 14 + idx * 18
        parts.append(
            f'<line x1="{legend_x}" y1="{ly - 4}" x2="{legend_x + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{legend_x + 28}" y="{ly}">{_esc(label)}</text>')

    parts.append("</svg>")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("\n".join(parts) + "\n", encoding="utf-8")
