"""Standalone SVG rendering of curves, markers, and isocost lines.

No plotting dependency: the document is assembled as text.  Curves render
as staircases whose vertical step at each operating point precedes the
horizontal run, so the drawn area under a curve equals the rectangular-rule
area the library integrates.  Output is byte-identical for identical inputs.
"""

from __future__ import annotations

from .cost import isocost_slope
from .curve import Curve, OperatingPoint
from .errors import MixedCoordinates

__all__ = ["render_svg"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70, 30, 40, 60


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _axis_label(axis: str) -> str:
    return axis.replace("_", " ")


def render_svg(
    curves: list[Curve],
    markers: list[OperatingPoint] | None = None,
    isocost: tuple[float, float] | None = None,
    labels: list[str] | None = None,
) -> str:
    """Render one or more curves (same coordinate system) as an SVG document.

    ``markers`` draws labeled circles at the given operating points;
    ``isocost=(c, level)`` draws the equal-cost line of slope -c/(1-c).
    Raises :class:`MixedCoordinates` when the curves disagree on axes.
    """
    if not curves:
        raise ValueError("need at least one curve")
    coords = curves[0].coords
    if any(c.coords != coords for c in curves[1:]):
        raise MixedCoordinates("curves use different coordinate systems")
    markers = list(markers or [])
    if labels is None:
        labels = [f"curve {i + 1}" for i in range(len(curves))]

    x_max = max(max(float(c.xs().max()) for c in curves), 1e-12)
    y_values = [float(c.ys().max()) for c in curves]
    y_values += [p.value(coords.y_axis) for p in markers]
    y_max = max(max(y_values), 1e-12)
    x_max *= 1.05
    y_max *= 1.05

    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def px(x: float) -> float:
        return _ML + (x / x_max) * plot_w

    def py(y: float) -> float:
        return _H - _MB - (y / y_max) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]

    # Grid and ticks.
    for i in range(6):
        gx = _ML + plot_w * i / 5
        gy = _H - _MB - plot_h * i / 5
        out.append(
            f'<line x1="{_fmt(gx)}" y1="{_MT}" x2="{_fmt(gx)}" y2="{_H - _MB}" '
            'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<line x1="{_ML}" y1="{_fmt(gy)}" x2="{_W - _MR}" y2="{_fmt(gy)}" '
            'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(gx)}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{_fmt(x_max * i / 5)}</text>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{_fmt(gy + 4)}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{_fmt(y_max * i / 5)}</text>'
        )

    # Axes.
    out.append(
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<text x="{_fmt(_ML + plot_w / 2)}" y="{_H - 16}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{_escape(_axis_label(coords.x_axis))}</text>'
    )
    mid_y = _MT + plot_h / 2
    out.append(
        f'<text x="18" y="{_fmt(mid_y)}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {_fmt(mid_y)})">'
        f'{_escape(_axis_label(coords.y_axis))}</text>'
    )

    # Isocost line, clipped to the plot box.
    if isocost is not None:
        c, level = float(isocost[0]), float(isocost[1])
        slope = isocost_slope(c)
        if slope == float("-inf"):
            x_line = level  # vertical: c == 1 means cost is the x-metric alone
            out.append(
                f'<line x1="{_fmt(px(x_line))}" y1="{_MT}" x2="{_fmt(px(x_line))}" '
                f'y2="{_H - _MB}" stroke="#555555" stroke-width="1" stroke-dasharray="6 4"/>'
            )
        else:
            y0 = level / (1.0 - c)
            y1 = (level - c * x_max) / (1.0 - c)
            out.append(
                f'<line x1="{_fmt(px(0.0))}" y1="{_fmt(py(y0))}" '
                f'x2="{_fmt(px(x_max))}" y2="{_fmt(py(y1))}" '
                'stroke="#555555" stroke-width="1" stroke-dasharray="6 4"/>'
            )
        out.append(
            f'<text x="{_W - _MR - 4}" y="{_MT + 14}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif" fill="#555555">isocost c={_fmt(c)} '
            f'level={_fmt(level)}</text>'
        )

    # Staircase paths: drop to the next y, then run to the next x.
    clip = (
        f'<clipPath id="plot"><rect x="{_ML}" y="{_MT}" width="{plot_w}" '
        f'height="{plot_h}"/></clipPath>'
    )
    out.append(f"<defs>{clip}</defs>")
    for i, curve in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        xs = curve.xs()
        ys = curve.ys()
        parts = [f"M {_fmt(px(float(xs[0])))} {_fmt(py(float(ys[0])))}"]
        for x, y in zip(xs[1:], ys[1:]):
            parts.append(f"V {_fmt(py(float(y)))}")
            parts.append(f"H {_fmt(px(float(x)))}")
        out.append(
            f'<path d="{" ".join(parts)}" fill="none" stroke="{color}" '
            'stroke-width="2" clip-path="url(#plot)"/>'
        )

    # Legend (only useful with several curves, but harmless with one).
    if len(curves) > 1:
        for i, label in enumerate(labels[: len(curves)]):
            color = _COLORS[i % len(_COLORS)]
            ly = _MT + 16 + i * 18
            out.append(
                f'<line x1="{_W - _MR - 120}" y1="{_fmt(ly - 4)}" '
                f'x2="{_W - _MR - 96}" y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="2"/>'
            )
            out.append(
                f'<text x="{_W - _MR - 90}" y="{_fmt(ly)}" font-size="11" '
                f'font-family="sans-serif">{_escape(label)}</text>'
            )

    # Operating-point markers.
    for point in markers:
        mx = px(point.value(coords.x_axis))
        my = py(point.value(coords.y_axis))
        out.append(
            f'<circle cx="{_fmt(mx)}" cy="{_fmt(my)}" r="4" fill="#000000"/>'
        )
        out.append(
            f'<text x="{_fmt(mx + 6)}" y="{_fmt(my - 6)}" font-size="11" '
            f'font-family="sans-serif">k={_fmt(point.k)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
