"""Minimal self-contained SVG charts: scatter, line, bar, matrix grid.

Just enough to render every figure the pipeline emits without pulling in a
plotting dependency. Output is a complete standalone SVG document string.
"""

from __future__ import annotations

import math

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 20, 36, 48

_STYLE = (
    "text{font-family:sans-serif;font-size:12px;fill:#222}"
    ".title{font-size:14px;font-weight:bold}"
    ".axis{stroke:#222;stroke-width:1}"
    ".grid{stroke:#ddd;stroke-width:0.5}"
)


def _document(body: list[str], width=WIDTH, height=HEIGHT) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f"<style>{_STYLE}</style>\n"
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (1 * mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 else t)
        t += step
    return out


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e6:
        return str(int(v))
    return f"{v:.4g}"


class _Frame:
    """Maps data coordinates onto the plot area and draws the axes."""

    def __init__(self, xs, ys, title, x_label, y_label):
        pad = lambda lo, hi: (lo - 0.05 * (hi - lo or 1.0), hi + 0.05 * (hi - lo or 1.0))
        self.x0, self.x1 = pad(min(xs), max(xs))
        self.y0, self.y1 = pad(min(ys), max(ys))
        self.title, self.x_label, self.y_label = title, x_label, y_label

    def px(self, x: float) -> float:
        span = self.x1 - self.x0
        return MARGIN_L + (x - self.x0) / span * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        span = self.y1 - self.y0
        return HEIGHT - MARGIN_B - (y - self.y0) / span * (HEIGHT - MARGIN_T - MARGIN_B)

    def axes(self) -> list[str]:
        left, right = MARGIN_L, WIDTH - MARGIN_R
        top, bottom = MARGIN_T, HEIGHT - MARGIN_B
        parts = [
            f'<text class="title" x="{WIDTH / 2:.0f}" y="20" text-anchor="middle">{self.title}</text>',
            f'<line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>',
            f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/>',
            f'<text x="{(left + right) / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle">{self.x_label}</text>',
            f'<text x="16" y="{(top + bottom) / 2:.0f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {(top + bottom) / 2:.0f})">{self.y_label}</text>',
        ]
        for t in _ticks(self.x0, self.x1):
            x = self.px(t)
            parts.append(f'<line class="grid" x1="{x:.1f}" y1="{top}" x2="{x:.1f}" y2="{bottom}"/>')
            parts.append(f'<text x="{x:.1f}" y="{bottom + 16}" text-anchor="middle">{_fmt(t)}</text>')
        for t in _ticks(self.y0, self.y1):
            y = self.py(t)
            parts.append(f'<line class="grid" x1="{left}" y1="{y:.1f}" x2="{right}" y2="{y:.1f}"/>')
            parts.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">{_fmt(t)}</text>')
        return parts


def scatter_svg(
    points,
    *,
    title: str,
    x_label: str,
    y_label: str,
    lines=(),
    h_lines=(),
    color: str = "#1f77b4",
) -> str:
    """Scatter plot with optional overlaid polylines and horizontal rules.

    ``lines`` is a sequence of (points, color) polylines in data coordinates;
    ``h_lines`` a sequence of (y, color, dashed) horizontal reference lines.
    """
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    for series, _ in lines:
        xs += [p[0] for p in series]
        ys += [p[1] for p in series]
    for y, _, _ in h_lines:
        ys.append(y)
    frame = _Frame(xs, ys, title, x_label, y_label)
    body = frame.axes()
    for y, col, dashed in h_lines:
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        body.append(
            f'<line x1="{MARGIN_L}" y1="{frame.py(y):.1f}" x2="{WIDTH - MARGIN_R}" '
            f'y2="{frame.py(y):.1f}" stroke="{col}" stroke-width="1.2"{dash}/>'
        )
    for series, col in lines:
        pts = " ".join(f"{frame.px(x):.1f},{frame.py(y):.1f}" for x, y in series)
        body.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="1.5"/>')
    for x, y in points:
        body.append(
            f'<circle cx="{frame.px(x):.1f}" cy="{frame.py(y):.1f}" r="2.5" '
            f'fill="{color}" fill-opacity="0.7"/>'
        )
    return _document(body)


def bar_svg(labels, values, *, title: str, y_label: str, threshold=None) -> str:
    """Vertical bars with an optional dashed threshold rule."""
    ys = list(values) + [0.0] + ([threshold] if threshold is not None else [])
    frame = _Frame([0, len(labels)], ys, title, "", y_label)
    body = frame.axes()
    span = (WIDTH - MARGIN_L - MARGIN_R) / max(len(labels), 1)
    for i, (label, v) in enumerate(zip(labels, values)):
        x = MARGIN_L + i * span + 0.15 * span
        y0, y1 = frame.py(0.0), frame.py(v)
        body.append(
            f'<rect x="{x:.1f}" y="{min(y0, y1):.1f}" width="{0.7 * span:.1f}" '
            f'height="{abs(y0 - y1):.1f}" fill="#1f77b4" fill-opacity="0.8"/>'
        )
        body.append(
            f'<text x="{x + 0.35 * span:.1f}" y="{HEIGHT - MARGIN_B + 16}" '
            f'text-anchor="middle">{label}</text>'
        )
    if threshold is not None:
        y = frame.py(threshold)
        body.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
            f'stroke="#d62728" stroke-width="1.2" stroke-dasharray="6 4"/>'
        )
    return _document(body)


def stem_svg(points, *, title: str, x_label: str, y_label: str, band=None) -> str:
    """Vertical stems from zero, with an optional +-band (dotted rules)."""
    ys = [p[1] for p in points] + [0.0] + ([band, -band] if band else [])
    frame = _Frame([p[0] for p in points], ys, title, x_label, y_label)
    body = frame.axes()
    body.append(
        f'<line x1="{MARGIN_L}" y1="{frame.py(0):.1f}" x2="{WIDTH - MARGIN_R}" '
        f'y2="{frame.py(0):.1f}" stroke="#222" stroke-width="1"/>'
    )
    if band:
        for b in (band, -band):
            body.append(
                f'<line x1="{MARGIN_L}" y1="{frame.py(b):.1f}" x2="{WIDTH - MARGIN_R}" '
                f'y2="{frame.py(b):.1f}" stroke="#1f77b4" stroke-width="1" '
                f'stroke-dasharray="2 4"/>'
            )
    for x, y in points:
        body.append(
            f'<line x1="{frame.px(x):.1f}" y1="{frame.py(0):.1f}" '
            f'x2="{frame.px(x):.1f}" y2="{frame.py(y):.1f}" stroke="#444" stroke-width="1.5"/>'
        )
    return _document(body)


def matrix_svg(names, values, mask, *, title: str) -> str:
    """Correlation-style grid; cells failing ``mask`` get a cross mark."""
    m = len(names)
    size = 44
    left, top = 110, 70
    width = left + m * size + 20
    height = top + m * size + 20
    body = [f'<text class="title" x="{width / 2:.0f}" y="24" text-anchor="middle">{title}</text>']
    for i, name in enumerate(names):
        body.append(
            f'<text x="{left - 8}" y="{top + i * size + size / 2 + 4:.0f}" '
            f'text-anchor="end">{name}</text>'
        )
        body.append(
            f'<text x="{left + i * size + size / 2:.0f}" y="{top - 10}" '
            f'text-anchor="middle">{name}</text>'
        )
    for i in range(m):
        for j in range(m):
            v = float(values[i][j])
            # blue for positive, red for negative, white near zero
            intensity = int(round(255 * (1 - abs(v))))
            rgb = (
                f"rgb({intensity},{intensity},255)" if v >= 0 else f"rgb(255,{intensity},{intensity})"
            )
            x, y = left + j * size, top + i * size
            body.append(
                f'<rect x="{x}" y="{y}" width="{size}" height="{size}" '
                f'fill="{rgb}" stroke="#999"/>'
            )
            body.append(
                f'<text x="{x + size / 2:.0f}" y="{y + size / 2 + 4:.0f}" '
                f'text-anchor="middle">{v:.2f}</text>'
            )
            if not mask[i][j]:
                body.append(
                    f'<line x1="{x + 4}" y1="{y + 4}" x2="{x + size - 4}" y2="{y + size - 4}" '
                    f'stroke="#d62728" stroke-width="2"/>'
                )
                body.append(
                    f'<line x1="{x + 4}" y1="{y + size - 4}" x2="{x + size - 4}" y2="{y + 4}" '
                    f'stroke="#d62728" stroke-width="2"/>'
                )
    return _document(body, width=width, height=height)
