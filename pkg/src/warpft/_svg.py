"""Minimal deterministic SVG line plots.

Self-contained output: no scripts, no external references, no
timestamps, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import numpy as np

__all__ = ["render_line_plot"]

_W, _H = 640.0, 420.0
_ML, _MR, _MT, _MB = 64.0, 20.0, 36.0, 48.0


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_line_plot(
    kgrid: np.ndarray,
    values: np.ndarray,
    errs: np.ndarray,
    title: str = "",
    ylabel: str = "|ghat(k)|",
) -> str:
    """Line plot of values over kgrid with a shaded +/- errs band."""
    k = np.asarray(kgrid, dtype=float)
    v = np.asarray(values, dtype=float)
    e = np.asarray(errs, dtype=float)
    if k.size < 2:
        k = np.concatenate([k, k + 1.0])
        v = np.concatenate([v, v])
        e = np.concatenate([e, e])
    kmin, kmax = float(k[0]), float(k[-1])
    lo = v - e
    hi = v + e
    ymin = min(0.0, float(np.min(lo)))
    ymax = float(np.max(hi))
    if ymax <= ymin:
        ymax = ymin + 1.0
    span = ymax - ymin
    ymax += 0.05 * span
    ymin -= 0.02 * span

    def px(kk: float) -> float:
        return _ML + (kk - kmin) / (kmax - kmin) * (_W - _ML - _MR)

    def py(vv: float) -> float:
        return _H - _MB - (vv - ymin) / (ymax - ymin) * (_H - _MT - _MB)

    def path(xs, ys) -> str:
        return " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))

    band = path(k, hi) + " " + path(k[::-1], lo[::-1])
    line = path(k, v)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_W:.0f}" height="{_H:.0f}" viewBox="0 0 {_W:.0f} {_H:.0f}">',
        f'<rect width="{_W:.0f}" height="{_H:.0f}" fill="white"/>',
        f'<polygon points="{band}" fill="#aaccee" stroke="none"/>',
        f'<polyline points="{line}" fill="none" stroke="#204060" stroke-width="1.5"/>',
    ]
    # axes
    x0, y0 = _ML, _H - _MB
    parts.append(
        f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{_W - _MR:.1f}" y2="{y0:.1f}" '
        'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" y2="{_MT:.1f}" '
        'stroke="black" stroke-width="1"/>'
    )
    for i in range(5):
        kk = kmin + (kmax - kmin) * i / 4.0
        xx = px(kk)
        parts.append(
            f'<line x1="{xx:.2f}" y1="{y0:.1f}" x2="{xx:.2f}" y2="{y0 + 5:.1f}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xx:.2f}" y="{y0 + 20:.1f}" font-size="12" '
            f'text-anchor="middle" font-family="monospace">{_fmt(kk)}</text>'
        )
        vv = ymin + (ymax - ymin) * i / 4.0
        yy = py(vv)
        parts.append(
            f'<line x1="{x0 - 5:.1f}" y1="{yy:.2f}" x2="{x0:.1f}" y2="{yy:.2f}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.1f}" y="{yy + 4:.2f}" font-size="12" '
            f'text-anchor="end" font-family="monospace">{_fmt(vv)}</text>'
        )
    if title:
        parts.append(
            f'<text x="{_W / 2:.1f}" y="{_MT - 12:.1f}" font-size="14" '
            f'text-anchor="middle" font-family="monospace">{title}</text>'
        )
    parts.append(
        f'<text x="{_W / 2:.1f}" y="{_H - 10:.1f}" font-size="12" '
        'text-anchor="middle" font-family="monospace">k</text>'
    )
    parts.append(
        f'<text x="16" y="{_H / 2:.1f}" font-size="12" text-anchor="middle" '
        f'font-family="monospace" transform="rotate(-90 16 {_H / 2:.1f})">{ylabel}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
