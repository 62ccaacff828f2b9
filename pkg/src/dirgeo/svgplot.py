"""Hand-rolled SVG output for curves and heatmaps.

No plotting dependency: the CLI needs byte-identical artifacts across
runs and platforms, which rules out library version drift.  Everything
here is deterministic; coordinates are formatted with %.6g and the
viewport, palette and layout are fixed constants.
"""

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 800.0
HEIGHT = 560.0
_ML, _MR, _MT, _MB = 72.0, 26.0, 44.0, 56.0
# Extra right margin when a colorbar is drawn.
_MR_BAR = 104.0

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

# Diverging ramp for heatmaps (low, mid, high).
_RAMP = ((49, 54, 149), (255, 255, 255), (165, 0, 38))


def _num(v):
    return "%.6g" % float(v)


@dataclass(frozen=True)
class Series:
    """One labeled curve; ``dashed`` selects the dashed stroke style."""

    label: str
    x: np.ndarray
    y: np.ndarray
    dashed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=np.float64))
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise ValueError(
                f"series {self.label!r}: x and y must be 1-D of equal length, "
                f"got {self.x.shape} and {self.y.shape}"
            )
        if self.x.size == 0:
            raise ValueError(f"series {self.label!r} is empty")


@dataclass(frozen=True)
class HeatMap:
    """Matrix over cell centers; values[i, j] sits at (x[j], y[i])."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=np.float64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.x.ndim != 1 or self.y.ndim != 1:
            raise ValueError("heatmap axes must be 1-D")
        if self.values.shape != (self.y.size, self.x.size):
            raise ValueError(
                f"heatmap values shape {self.values.shape} does not match "
                f"axes ({self.y.size}, {self.x.size})"
            )
        for name, a in (("x", self.x), ("y", self.y)):
            if a.size < 1 or np.any(np.diff(a) <= 0.0):
                raise ValueError(f"heatmap {name} axis must be strictly increasing")


def _check_finite(curves, heatmap):
    for i, s in enumerate(curves):
        bad = np.flatnonzero(~(np.isfinite(s.x) & np.isfinite(s.y)))
        if bad.size:
            raise ValueError(
                f"series {i} ({s.label!r}): non-finite data at indices "
                f"{bad[:20].tolist()}"
            )
    if heatmap is not None:
        for name, a in (("x", heatmap.x), ("y", heatmap.y)):
            bad = np.flatnonzero(~np.isfinite(a))
            if bad.size:
                raise ValueError(
                    f"heatmap {name} axis: non-finite at indices {bad[:20].tolist()}"
                )
        bad = np.argwhere(~np.isfinite(heatmap.values))
        if bad.size:
            raise ValueError(
                "heatmap values: non-finite at (row, col) "
                f"{[tuple(rc) for rc in bad[:20].tolist()]}"
            )


def _edges(centers, log):
    c = np.log(centers) if log else centers
    if c.size == 1:
        e = np.array([c[0] - 0.5, c[0] + 0.5])
    else:
        mid = 0.5 * (c[1:] + c[:-1])
        e = np.concatenate(([2.0 * c[0] - mid[0]], mid, [2.0 * c[-1] - mid[-1]]))
    return np.exp(e) if log else e


def _axis_range(values, log, pad=0.04):
    lo = min(values)
    hi = max(values)
    if log:
        if lo <= 0.0:
            raise ValueError(f"log axis requires positive data, got minimum {lo!r}")
        if lo == hi:
            return lo / 2.0, hi * 2.0
        r = (hi / lo) ** pad
        return lo / r, hi * r
    if lo == hi:
        return lo - 0.5, hi + 0.5
    span = hi - lo
    return lo - pad * span, hi + pad * span


def _lin_ticks(lo, hi, target=6):
    span = hi - lo
    mag = 10.0 ** math.floor(math.log10(span / target))
    step = 10.0 * mag
    for m in (1.0, 2.0, 2.5, 5.0):
        if span / (m * mag) <= target:
            step = m * mag
            break
    k0 = math.ceil(lo / step - 1e-9)
    k1 = math.floor(hi / step + 1e-9)
    return [k * step for k in range(k0, k1 + 1)]


def _log_ticks(lo, hi):
    k0 = math.ceil(math.log10(lo) - 1e-9)
    k1 = math.floor(math.log10(hi) + 1e-9)
    ticks = [10.0**k for k in range(k0, k1 + 1)]
    if len(ticks) >= 2:
        return ticks
    # Under one decade: fall back to 1-2-5 mantissa ticks.
    ticks = []
    for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1):
        for m in (1.0, 2.0, 5.0):
            v = m * 10.0**k
            if lo <= v <= hi:
                ticks.append(v)
    return ticks if ticks else [lo, hi]


def _color(t):
    # two-segment linear ramp through _RAMP, t in [0, 1]
    t = min(1.0, max(0.0, t))
    if t < 0.5:
        a, b, u = _RAMP[0], _RAMP[1], 2.0 * t
    else:
        a, b, u = _RAMP[1], _RAMP[2], 2.0 * t - 1.0
    return "#%02x%02x%02x" % tuple(round(a[i] + u * (b[i] - a[i])) for i in range(3))


def emit_svg(
    curves=(),
    heatmap=None,
    *,
    title="",
    xlabel="",
    ylabel="",
    xlog=False,
    ylog=False,
):
    """Render curves and/or a heatmap to a standalone SVG 1.1 string.

    Identical inputs produce byte-identical output.  Non-finite data is
    rejected with the offending indices in the error message.
    """
    curves = [s if isinstance(s, Series) else Series(*s) for s in curves]
    _check_finite(curves, heatmap)

    mr = _MR_BAR if heatmap is not None else _MR
    x0, x1 = _ML, WIDTH - mr
    y0, y1 = _MT, HEIGHT - _MB

    xs, ys = [], []
    for s in curves:
        xs += [float(s.x.min()), float(s.x.max())]
        ys += [float(s.y.min()), float(s.y.max())]
    if heatmap is not None:
        ex = _edges(heatmap.x, xlog)
        ey = _edges(heatmap.y, ylog)
        xs += [float(ex[0]), float(ex[-1])]
        ys += [float(ey[0]), float(ey[-1])]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    xlo, xhi = _axis_range(xs, xlog, pad=0.0 if heatmap is not None else 0.04)
    ylo, yhi = _axis_range(ys, ylog, pad=0.0 if heatmap is not None else 0.04)

    def px(v):
        if xlog:
            t = (math.log(v) - math.log(xlo)) / (math.log(xhi) - math.log(xlo))
        else:
            t = (v - xlo) / (xhi - xlo)
        return x0 + t * (x1 - x0)

    def py(v):
        if ylog:
            t = (math.log(v) - math.log(ylo)) / (math.log(yhi) - math.log(ylo))
        else:
            t = (v - ylo) / (yhi - ylo)
        return y1 - t * (y1 - y0)

    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_num(WIDTH)}" height="{_num(HEIGHT)}" '
        f'viewBox="0 0 {_num(WIDTH)} {_num(HEIGHT)}" '
        'font-family="Helvetica,Arial,sans-serif">',
        f'<rect x="0" y="0" width="{_num(WIDTH)}" height="{_num(HEIGHT)}" fill="#ffffff"/>',
        f'<clipPath id="plot"><rect x="{_num(x0)}" y="{_num(y0)}" '
        f'width="{_num(x1 - x0)}" height="{_num(y1 - y0)}"/></clipPath>',
    ]

    vlo = vhi = 0.0
    if heatmap is not None:
        vlo = float(heatmap.values.min())
        vhi = float(heatmap.values.max())
        if vlo < 0.0 < vhi:
            # symmetric range so the white midpoint sits at zero
            vhi = max(-vlo, vhi)
            vlo = -vhi
        elif vlo == vhi:
            pad = 0.5 if vlo == 0.0 else abs(vlo) * 0.5
            vlo, vhi = vlo - pad, vhi + pad
        out.append('<g shape-rendering="crispEdges" clip-path="url(#plot)">')
        for i in range(heatmap.y.size):
            ra, rb = py(ey[i]), py(ey[i + 1])
            top, hgt = min(ra, rb), abs(ra - rb)
            for j in range(heatmap.x.size):
                ca, cb = px(ex[j]), px(ex[j + 1])
                t = (heatmap.values[i, j] - vlo) / (vhi - vlo)
                out.append(
                    f'<rect x="{_num(min(ca, cb))}" y="{_num(top)}" '
                    f'width="{_num(abs(cb - ca))}" height="{_num(hgt)}" '
                    f'fill="{_color(t)}"/>'
                )
        out.append("</g>")

    if curves:
        out.append('<g fill="none" stroke-width="1.5" clip-path="url(#plot)">')
        for i, s in enumerate(curves):
            pts = " ".join(
                f"{_num(px(a))},{_num(py(b))}" for a, b in zip(s.x, s.y)
            )
            dash = ' stroke-dasharray="7,4"' if s.dashed else ""
            out.append(
                f'<polyline stroke="{PALETTE[i % len(PALETTE)]}"{dash} '
                f'points="{pts}"/>'
            )
        out.append("</g>")

    # frame
    out.append(
        f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(x1 - x0)}" '
        f'height="{_num(y1 - y0)}" fill="none" stroke="#000000" stroke-width="1"/>'
    )

    # ticks and labels
    xticks = _log_ticks(xlo, xhi) if xlog else _lin_ticks(xlo, xhi)
    yticks = _log_ticks(ylo, yhi) if ylog else _lin_ticks(ylo, yhi)
    out.append('<g stroke="#000000" stroke-width="1">')
    for v in xticks:
        c = px(v)
        out.append(f'<line x1="{_num(c)}" y1="{_num(y1)}" x2="{_num(c)}" y2="{_num(y1 + 5)}"/>')
    for v in yticks:
        c = py(v)
        out.append(f'<line x1="{_num(x0 - 5)}" y1="{_num(c)}" x2="{_num(x0)}" y2="{_num(c)}"/>')
    out.append("</g>")
    out.append('<g font-size="11" fill="#000000">')
    for v in xticks:
        out.append(
            f'<text x="{_num(px(v))}" y="{_num(y1 + 18)}" '
            f'text-anchor="middle">{escape("%g" % v)}</text>'
        )
    for v in yticks:
        out.append(
            f'<text x="{_num(x0 - 8)}" y="{_num(py(v) + 4)}" '
            f'text-anchor="end">{escape("%g" % v)}</text>'
        )
    out.append("</g>")

    if xlabel:
        out.append(
            f'<text x="{_num(0.5 * (x0 + x1))}" y="{_num(HEIGHT - 14)}" font-size="13" '
            f'text-anchor="middle" fill="#000000">{escape(xlabel)}</text>'
        )
    if ylabel:
        cx, cy = 18.0, 0.5 * (y0 + y1)
        out.append(
            f'<text x="{_num(cx)}" y="{_num(cy)}" font-size="13" text-anchor="middle" '
            f'fill="#000000" transform="rotate(-90 {_num(cx)} {_num(cy)})">'
            f"{escape(ylabel)}</text>"
        )
    if title:
        out.append(
            f'<text x="{_num(0.5 * WIDTH)}" y="{_num(y0 - 14)}" font-size="15" '
            f'text-anchor="middle" fill="#000000">{escape(title)}</text>'
        )

    if heatmap is not None:
        # colorbar: 32 bands, low at the bottom
        bx, bw = x1 + 18.0, 16.0
        nb = 32
        for k in range(nb):
            t0 = k / nb
            ya = y1 - (y1 - y0) * (k + 1) / nb
            out.append(
                f'<rect x="{_num(bx)}" y="{_num(ya)}" width="{_num(bw)}" '
                f'height="{_num((y1 - y0) / nb)}" fill="{_color((t0 + 0.5 / nb))}"/>'
            )
        out.append(
            f'<rect x="{_num(bx)}" y="{_num(y0)}" width="{_num(bw)}" '
            f'height="{_num(y1 - y0)}" fill="none" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<g font-size="11" fill="#000000"><text x="{_num(bx + bw + 4)}" '
            f'y="{_num(y1 + 4)}">{escape("%.3g" % vlo)}</text>'
            f'<text x="{_num(bx + bw + 4)}" y="{_num(y0 + 4)}">'
            f'{escape("%.3g" % vhi)}</text></g>'
        )

    labeled = [(i, s) for i, s in enumerate(curves) if s.label]
    if labeled:
        lw = max(len(s.label) for _, s in labeled) * 6.6 + 46.0
        lh = 18.0 * len(labeled) + 8.0
        lx, ly = x1 - lw - 10.0, y0 + 10.0
        out.append(
            f'<rect x="{_num(lx)}" y="{_num(ly)}" width="{_num(lw)}" height="{_num(lh)}" '
            'fill="#ffffff" fill-opacity="0.85" stroke="#888888" stroke-width="0.5"/>'
        )
        for row, (i, s) in enumerate(labeled):
            cy = ly + 17.0 + 18.0 * row
            dash = ' stroke-dasharray="7,4"' if s.dashed else ""
            out.append(
                f'<line x1="{_num(lx + 8)}" y1="{_num(cy - 4)}" x2="{_num(lx + 34)}" '
                f'y2="{_num(cy - 4)}" stroke="{PALETTE[i % len(PALETTE)]}" '
                f'stroke-width="1.5"{dash}/>'
            )
            out.append(
                f'<text x="{_num(lx + 40)}" y="{_num(cy)}" font-size="12" '
                f'fill="#000000">{escape(s.label)}</text>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"
