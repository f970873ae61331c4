"""A tiny deterministic SVG writer for single-panel line and scatter charts.

Output depends only on the data passed in, so charts can be diffed byte for byte.
"""

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=40, bottom=55)
PALETTE = ("#1f5fa8", "#c4402f", "#2e8b57", "#8a5cb8", "#b8860b", "#444444")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _span(values) -> tuple:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


class _Frame:
    def __init__(self, xs, ys):
        self.x0, self.x1 = _span(xs)
        self.y0, self.y1 = _span(ys)
        self.w = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * self.w

    def py(self, y):
        return MARGIN["top"] + (1 - (y - self.y0) / (self.y1 - self.y0)) * self.h

    def axes(self, title, xlabel, ylabel) -> list:
        left, top = MARGIN["left"], MARGIN["top"]
        bottom = top + self.h
        out = [
            f'<rect x="{left}" y="{top}" width="{self.w}" height="{self.h}" fill="none" stroke="#000"/>',
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
            f'<text x="{left + self.w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="13">'
            f"{escape(xlabel)}</text>",
            f'<text x="16" y="{top + self.h / 2:.1f}" text-anchor="middle" font-size="13" '
            f'transform="rotate(-90 16 {top + self.h / 2:.1f})">{escape(ylabel)}</text>',
        ]
        for t in np.linspace(0, 1, 5):
            xv = self.x0 + t * (self.x1 - self.x0)
            yv = self.y0 + t * (self.y1 - self.y0)
            x, y = self.px(xv), self.py(yv)
            out.append(f'<line x1="{_fmt(x)}" y1="{bottom}" x2="{_fmt(x)}" y2="{bottom + 5}" stroke="#000"/>')
            out.append(f'<text x="{_fmt(x)}" y="{bottom + 19}" text-anchor="middle" font-size="11">{xv:.3g}</text>')
            out.append(f'<line x1="{left - 5}" y1="{_fmt(y)}" x2="{left}" y2="{_fmt(y)}" stroke="#000"/>')
            out.append(f'<text x="{left - 8}" y="{_fmt(y + 4)}" text-anchor="end" font-size="11">{yv:.3g}</text>')
        return out


def _document(body: list) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">')
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>', *body, "</svg>"]) + "\n"


def line_chart(x, series: dict, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """One polyline per entry of ``series`` (label -> y values), with a legend."""
    x = np.asarray(x, dtype=float)
    frame = _Frame(x, np.concatenate([np.asarray(v, dtype=float) for v in series.values()]))
    body = frame.axes(title, xlabel, ylabel)
    for i, (label, ys) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(frame.px(a))},{_fmt(frame.py(b))}" for a, b in zip(x, ys))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN["top"] + 16 + 16 * i
        lx = WIDTH - MARGIN["right"] - 130
        body.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{lx + 24}" y="{ly}" font-size="11">{escape(label)}</text>')
    return _document(body)


def scatter_chart(x, y, groups, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Points colored by a discrete group label (e.g. a sign)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    frame = _Frame(x, y)
    body = frame.axes(title, xlabel, ylabel)
    labels = sorted(set(groups))
    colors = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(labels)}
    for a, b, g in zip(x, y, groups):
        body.append(f'<circle cx="{_fmt(frame.px(a))}" cy="{_fmt(frame.py(b))}" r="2.5" fill="{colors[g]}"/>')
    for i, g in enumerate(labels):
        ly = MARGIN["top"] + 16 + 16 * i
        lx = WIDTH - MARGIN["right"] - 90
        body.append(f'<circle cx="{lx + 6}" cy="{ly - 4}" r="4" fill="{colors[g]}"/>')
        body.append(f'<text x="{lx + 16}" y="{ly}" font-size="11">{escape(str(g))}</text>')
    return _document(body)
