"""Hand-emitted SVG charts: grouped bars and point/line series with error bars.

No plotting dependency; output is deterministic byte-for-byte for fixed
inputs. Bar semantics are carried by CSS classes (``no-guarantee`` renders
shaded, ``fixed-budget`` renders hatched).
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH = 720
HEIGHT = 440
MARGIN_LEFT = 80
MARGIN_RIGHT = 24
MARGIN_TOP = 48
MARGIN_BOTTOM = 84

STYLE = """
  text { font-family: sans-serif; font-size: 13px; fill: #222; }
  .title { font-size: 16px; }
  .axis { stroke: #222; stroke-width: 1; }
  .grid { stroke: #ddd; stroke-width: 1; }
  .bar { fill: #4878a8; }
  .bar.no-guarantee { fill: #b8c6d8; }
  .bar.fixed-budget { fill: url(#hatch); }
  .err { stroke: #222; stroke-width: 1.2; }
  .series { stroke: #4878a8; stroke-width: 1.5; fill: none; }
  .point { fill: #4878a8; }
"""

HATCH = (
    '<pattern id="hatch" width="6" height="6" patternTransform="rotate(45)" '
    'patternUnits="userSpaceOnUse"><rect width="6" height="6" fill="#dce6f0"/>'
    '<line x1="0" y1="0" x2="0" y2="6" stroke="#4878a8" stroke-width="1.5"/></pattern>'
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ceiling(value: float) -> float:
    """Smallest 1/2/5 x 10^k at or above value."""
    if value <= 0.0:
        return 1.0
    exp = math.floor(math.log10(value))
    for mult in (1.0, 2.0, 5.0, 10.0):
        candidate = mult * 10.0 ** exp
        if candidate >= value:
            return candidate
    return 10.0 ** (exp + 1)


def _frame(title: str, ylabel: str, y_max: float, body: list[str]) -> str:
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<style>{STYLE}</style>",
        f"<defs>{HATCH}</defs>",
        f'<text class="title" x="{WIDTH // 2}" y="24" text-anchor="middle">{escape(title)}</text>',
        f'<text x="18" y="{(y0 + y1) // 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(y0 + y1) // 2})">{escape(ylabel)}</text>',
    ]
    n_ticks = 5
    for i in range(n_ticks + 1):
        frac = i / n_ticks
        y = y0 - frac * (y0 - y1)
        value = frac * y_max
        parts.append(f'<line class="grid" x1="{x0}" y1="{_fmt(y)}" x2="{x1}" y2="{_fmt(y)}"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(y + 4)}" text-anchor="end">{value:.10g}</text>'
        )
    parts.extend(body)
    parts.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>')
    parts.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _error_bar(x: float, y_lo: float, y_hi: float, half_width: float) -> str:
    return (
        f'<g class="err">'
        f'<line x1="{_fmt(x)}" y1="{_fmt(y_lo)}" x2="{_fmt(x)}" y2="{_fmt(y_hi)}"/>'
        f'<line x1="{_fmt(x - half_width)}" y1="{_fmt(y_hi)}" x2="{_fmt(x + half_width)}" y2="{_fmt(y_hi)}"/>'
        f'<line x1="{_fmt(x - half_width)}" y1="{_fmt(y_lo)}" x2="{_fmt(x + half_width)}" y2="{_fmt(y_lo)}"/>'
        f"</g>"
    )


def bar_chart(
    labels: list[str],
    means: list[float],
    stds: list[float],
    classes: list[str] | None = None,
    *,
    title: str = "",
    ylabel: str = "mean regret",
) -> str:
    """One bar per label with a +/- std error bar; returns the SVG text."""
    n = len(labels)
    if not (n and len(means) == n and len(stds) == n):
        raise ValueError("labels, means and stds must be equal-length and non-empty")
    classes = classes or [""] * n
    y_max = _nice_ceiling(max(m + s for m, s in zip(means, stds)))
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    slot = (x1 - x0) / n
    bar_w = slot * 0.62

    def ypix(v: float) -> float:
        return y0 - (v / y_max) * (y0 - y1)

    body = []
    for i, (label, mean, std, cls) in enumerate(zip(labels, means, stds, classes)):
        xc = x0 + (i + 0.5) * slot
        top = ypix(mean)
        cls_attr = f"bar {cls}".strip()
        body.append(
            f'<rect class="{cls_attr}" x="{_fmt(xc - bar_w / 2)}" y="{_fmt(top)}" '
            f'width="{_fmt(bar_w)}" height="{_fmt(y0 - top)}"/>'
        )
        body.append(_error_bar(xc, ypix(max(mean - std, 0.0)), ypix(min(mean + std, y_max)), bar_w / 4))
        body.append(
            f'<text x="{_fmt(xc)}" y="{y0 + 16}" text-anchor="end" '
            f'transform="rotate(-35 {_fmt(xc)} {y0 + 16})">{escape(label)}</text>'
        )
    return _frame(title, ylabel, y_max, body)


def line_chart(
    x_labels: list[str],
    means: list[float],
    stds: list[float],
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "mean regret",
) -> str:
    """Evenly spaced points joined by a line, each with a +/- std error bar."""
    n = len(x_labels)
    if not (n and len(means) == n and len(stds) == n):
        raise ValueError("x_labels, means and stds must be equal-length and non-empty")
    y_max = _nice_ceiling(max(m + s for m, s in zip(means, stds)))
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    slot = (x1 - x0) / n

    def ypix(v: float) -> float:
        return y0 - (v / y_max) * (y0 - y1)

    xs = [x0 + (i + 0.5) * slot for i in range(n)]
    pts = " ".join(f"{_fmt(x)},{_fmt(ypix(m))}" for x, m in zip(xs, means))
    body = [f'<polyline class="series" points="{pts}"/>']
    for x, label, mean, std in zip(xs, x_labels, means, stds):
        body.append(_error_bar(x, ypix(max(mean - std, 0.0)), ypix(min(mean + std, y_max)), 5.0))
        body.append(f'<circle class="point" cx="{_fmt(x)}" cy="{_fmt(ypix(mean))}" r="3.5"/>')
        body.append(f'<text x="{_fmt(x)}" y="{y0 + 18}" text-anchor="middle">{escape(label)}</text>')
    if xlabel:
        body.append(
            f'<text x="{(x0 + x1) // 2}" y="{HEIGHT - 14}" text-anchor="middle">{escape(xlabel)}</text>'
        )
    return _frame(title, ylabel, y_max, body)
