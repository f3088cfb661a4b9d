"""Tiny hand-rolled SVG writer for decay tables (no plotting dependency)."""

from __future__ import annotations

import math

import numpy as np

W, H = 640, 440
ML, MR, MT, MB = 70, 24, 24, 52

_SERIES = (  # (attribute, legend label, color, dash pattern)
    ("norms", "norm", "#1f77b4", None),
    ("bound_alpha_gamma", "bound_alpha_gamma", "#d62728", "6,4"),
    ("bound_gamma", "bound_gamma", "#7f7f7f", "2,4"),
)


def _log_range(arrays):
    vals = np.concatenate([np.asarray(a, dtype=np.float64).ravel() for a in arrays])
    vals = vals[np.isfinite(vals) & (vals > 0.0)]
    if vals.size < 2:
        raise ValueError("nothing positive to plot")
    lo, hi = math.log10(vals.min()), math.log10(vals.max())
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.04 * (hi - lo)
    return lo - pad, hi + pad


def render_decay_svg(table) -> str:
    """Log-log polylines for the norm and both reference curves, with legend."""
    x0, x1 = _log_range([table.times])
    y0, y1 = _log_range([table.norms, table.bound_alpha_gamma, table.bound_gamma])
    plot_w, plot_h = W - ML - MR, H - MT - MB

    def px(t):
        return ML + (math.log10(t) - x0) / (x1 - x0) * plot_w

    def py(v):
        return MT + (y1 - math.log10(v)) / (y1 - y0) * plot_h

    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (W, H, W, H),
        '<rect width="%d" height="%d" fill="white"/>' % (W, H),
        '<g font-family="monospace" font-size="11" fill="#222">',
    ]
    # frame
    out.append(
        '<rect x="%d" y="%d" width="%d" height="%d" fill="none" stroke="#222"/>'
        % (ML, MT, plot_w, plot_h)
    )
    # decade ticks
    for d in range(math.ceil(x0), math.floor(x1) + 1):
        x = ML + (d - x0) / (x1 - x0) * plot_w
        out.append('<line x1="%.2f" y1="%d" x2="%.2f" y2="%d" stroke="#222"/>'
                   % (x, MT + plot_h, x, MT + plot_h + 5))
        out.append('<text x="%.2f" y="%d" text-anchor="middle">1e%d</text>'
                   % (x, MT + plot_h + 18, d))
    for d in range(math.ceil(y0), math.floor(y1) + 1):
        y = MT + (y1 - d) / (y1 - y0) * plot_h
        out.append('<line x1="%d" y1="%.2f" x2="%d" y2="%.2f" stroke="#222"/>'
                   % (ML - 5, y, ML, y))
        out.append('<text x="%d" y="%.2f" text-anchor="end">1e%d</text>'
                   % (ML - 8, y + 4, d))
    out.append('<text x="%d" y="%d" text-anchor="middle">t</text>'
               % (ML + plot_w // 2, H - 14))
    # curves
    for attr, _, color, dash in _SERIES:
        series = np.asarray(getattr(table, attr), dtype=np.float64)
        pts = [
            "%.2f,%.2f" % (px(t), py(v))
            for t, v in zip(table.times, series)
            if math.isfinite(v) and v > 0.0
        ]
        if len(pts) < 2:
            continue
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        out.append('<polyline points="%s" fill="none" stroke="%s" stroke-width="1.5"%s/>'
                   % (" ".join(pts), color, dash_attr))
    # legend
    lx, ly = ML + 12, MT + 14
    for i, (_, label, color, dash) in enumerate(_SERIES):
        y = ly + 16 * i
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                   'stroke-width="1.5"%s/>' % (lx, y, lx + 26, y, color, dash_attr))
        out.append('<text x="%d" y="%d">%s</text>' % (lx + 32, y + 4, label))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
