"""Minimal standalone SVG line charts, so runs can plot without any
plotting dependency. Layout is fixed-size with simple linear axes."""

from __future__ import annotations

import math

WIDTH = 640
HEIGHT = 420
MARGIN_L = 72
MARGIN_R = 24
MARGIN_T = 40
MARGIN_B = 52

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return [0.0]
    if lo == hi:
        pad = 1.0 if lo == 0 else abs(lo) * 0.1
        lo, hi = lo - pad, hi + pad
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.4g}"


class LineChart:
    """Collect series, then render one SVG file."""

    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.series: list[tuple[str, list[float], list[float], bool]] = []
        self.hlines: list[tuple[float, str]] = []

    def add_series(self, label: str, xs, ys, dashed: bool = False) -> None:
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]
        if len(xs) != len(ys):
            raise ValueError("x and y lengths differ")
        if xs:
            self.series.append((label, xs, ys, dashed))

    def add_hline(self, y: float, label: str) -> None:
        self.hlines.append((float(y), label))

    def _bounds(self) -> tuple[float, float, float, float]:
        xs = [x for _, sx, _, _ in self.series for x in sx]
        ys = [y for _, _, sy, _ in self.series for y in sy]
        ys += [y for y, _ in self.hlines]
        if not xs:
            xs = [0.0, 1.0]
        if not ys:
            ys = [0.0, 1.0]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        if x_lo == x_hi:
            x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
        if y_lo == y_hi:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
        y_pad = (y_hi - y_lo) * 0.05
        return x_lo, x_hi, y_lo - y_pad, y_hi + y_pad

    def render(self) -> str:
        x_lo, x_hi, y_lo, y_hi = self._bounds()
        plot_w = WIDTH - MARGIN_L - MARGIN_R
        plot_h = HEIGHT - MARGIN_T - MARGIN_B

        def px(x: float) -> float:
            return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

        def py(y: float) -> float:
            return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">'
            f"{self.title}</text>",
        ]
        for tick in _ticks(x_lo, x_hi):
            x = px(tick)
            parts.append(
                f'<line x1="{x:.1f}" y1="{MARGIN_T}" x2="{x:.1f}" '
                f'y2="{HEIGHT - MARGIN_B}" stroke="#dddddd"/>'
            )
            parts.append(
                f'<text x="{x:.1f}" y="{HEIGHT - MARGIN_B + 18}" '
                f'text-anchor="middle">{_fmt(tick)}</text>'
            )
        for tick in _ticks(y_lo, y_hi):
            y = py(tick)
            parts.append(
                f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" '
                f'y2="{y:.1f}" stroke="#dddddd"/>'
            )
            parts.append(
                f'<text x="{MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(tick)}</text>'
            )
        parts.append(
            f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
            f'fill="none" stroke="#333333"/>'
        )
        for y_val, label in self.hlines:
            y = py(y_val)
            parts.append(
                f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
                f'stroke="#555555" stroke-dasharray="6 4"/>'
            )
            parts.append(
                f'<text x="{WIDTH - MARGIN_R - 4}" y="{y - 5:.1f}" text-anchor="end" '
                f'fill="#555555">{label}</text>'
            )
        for i, (label, xs, ys, dashed) in enumerate(self.series):
            color = PALETTE[i % len(PALETTE)]
            points = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(xs, ys))
            dash = ' stroke-dasharray="4 3"' if dashed else ""
            parts.append(
                f'<polyline points="{points}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"{dash}/>'
            )
            parts.append(
                f'<text x="{MARGIN_L + 10}" y="{MARGIN_T + 16 + 16 * i}" '
                f'fill="{color}">{label}</text>'
            )
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle">'
            f"{self.xlabel}</text>"
        )
        parts.append(
            f'<text x="18" y="{HEIGHT / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 18 {HEIGHT / 2:.1f})">{self.ylabel}</text>'
        )
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())
