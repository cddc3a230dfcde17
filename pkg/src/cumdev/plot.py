"""
Deterministic SVG rendering of cumulative plots and reliability diagrams.

Documents are built as plain text so identical inputs give identical bytes.
Every plot area is a ``<g class="plot">`` element whose ``data-x0``,
``data-xscale``, ``data-y0`` and ``data-yscale`` attributes state the map from
data to pixels::

    px = x0 + xscale * x        py = y0 - yscale * y

Coordinates are written with three decimals, so each drawn point inverts to
its value within a thousandth of a pixel.

Major ticks follow a nice-number rule: the step is 1, 2 or 5 times a power
of ten, whichever puts the number of ticks in range closest to the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvalidInputError

__all__ = ["PlotSpec", "nice_ticks", "render_cumulative", "render_reliability"]

BLACK = "#000000"
GRAY = "#808080"
LIGHT_GRAY = "#c8c8c8"
FONT = 'font-family="sans-serif" font-size="12"'


@dataclass(frozen=True)
class PlotSpec:
    """
    Page layout and labelling.

    Parameters
    ----------
    width, height : int
        size of the document in pixels
    title : str, optional
        defaults to a description of the plot
    xlabel, ylabel : str, optional
        axis captions; ``xlabel`` describes the lower axis
    zoom : tuple of float, optional
        score interval ``(lo, hi)`` the curve was restricted to; it is only
        shown as a caption, since restriction happens before rendering
    include_triangle : bool
        draw the triangle of tip-to-tip height ``4 sigma`` at the origin
    ticks : int
        approximate number of major ticks per axis
    """

    width: int = 640
    height: int = 480
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    zoom: tuple | None = None
    include_triangle: bool = True
    ticks: int = 5

    def __post_init__(self):
        if self.width < 200 or self.height < 150:
            raise InvalidInputError("plots need at least 200 x 150 pixels")
        if self.ticks < 2:
            raise InvalidInputError("ticks must be at least 2")
        if self.zoom is not None:
            lo, hi = self.zoom
            if not lo < hi:
                raise InvalidInputError("zoom range must be nonempty")


def _num(v):
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _label(v):
    s = format(float(v), ".4g")
    return "0" if s == "-0" else s


def nice_ticks(lo, hi, ticks=5):
    """Multiples of a 1-2-5 step lying in ``[lo, hi]``, about ``ticks`` many."""
    if not hi > lo:
        return np.array([lo])
    power = 10.0 ** math.floor(math.log10((hi - lo) / (ticks - 1)))
    best = None
    for step in (f * power for f in (0.5, 1, 2, 5, 10)):
        first = math.ceil(lo / step - 1e-9)
        last = math.floor(hi / step + 1e-9)
        # closest count wins; ties go to the coarser step
        key = (abs(last - first + 1 - ticks), -step)
        if best is None or key < best[0]:
            best = key, step, first, last
    _, step, first, last = best
    return np.array([i * step for i in range(first, last + 1)])


class _Frame:
    """Plot area inside the page, with the data-to-pixel map."""

    def __init__(self, spec, xlim, ylim, top=64):
        self.left, self.right = 80, spec.width - 30
        self.top, self.bottom = top, spec.height - 56
        xlim = tuple(map(float, xlim))
        ylim = tuple(map(float, ylim))
        self.xlim, self.ylim = xlim, ylim
        self.xscale = (self.right - self.left) / (xlim[1] - xlim[0])
        self.yscale = (self.bottom - self.top) / (ylim[1] - ylim[0])
        self.x0 = self.left - self.xscale * xlim[0]
        self.y0 = self.bottom + self.yscale * ylim[0]

    def px(self, x):
        return self.x0 + self.xscale * x

    def py(self, y):
        return self.y0 - self.yscale * y

    def points(self, xs, ys):
        return " ".join(f"{_num(self.px(x))},{_num(self.py(y))}"
                        for x, y in zip(xs, ys))

    def open(self):
        return (f'<g class="plot" data-x0="{self.x0!r}" '
                f'data-xscale="{self.xscale!r}" data-y0="{self.y0!r}" '
                f'data-yscale="{self.yscale!r}">')

    def box(self):
        return (f'<rect x="{_num(self.left)}" y="{_num(self.top)}" '
                f'width="{_num(self.right - self.left)}" '
                f'height="{_num(self.bottom - self.top)}" fill="none" '
                f'stroke="{BLACK}"/>')


def _padded(lo, hi, frac=0.05):
    if hi <= lo:
        span = abs(lo) if lo != 0 else 1.0
        return lo - span, hi + span
    pad = (hi - lo) * frac
    return lo - pad, hi + pad


def _header(spec, title):
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{spec.width}" height="{spec.height}" '
           f'viewBox="0 0 {spec.width} {spec.height}">',
           f'<title>{escape(title)}</title>',
           f'<rect width="{spec.width}" height="{spec.height}" '
           f'fill="#ffffff"/>',
           f'<text x="{_num(spec.width / 2)}" y="20" text-anchor="middle" '
           f'font-family="sans-serif" font-size="14">{escape(title)}</text>']
    return out


def _tick(frame, x=None, y=None, side="bottom", length=6, text=None,
          cls="major"):
    if x is not None:
        p = frame.px(x)
        edge = frame.bottom if side == "bottom" else frame.top
        sign = 1 if side == "bottom" else -1
        line = (f'<line class="tick {cls} {side}" x1="{_num(p)}" '
                f'y1="{_num(edge)}" x2="{_num(p)}" '
                f'y2="{_num(edge + sign * length)}" stroke="{BLACK}"/>')
        if text is None:
            return [line]
        ty = edge + 20 if side == "bottom" else edge - 10
        return [line, f'<text x="{_num(p)}" y="{_num(ty)}" '
                      f'text-anchor="middle" {FONT}>{escape(text)}</text>']
    p = frame.py(y)
    return [f'<line class="tick {cls} left" x1="{_num(frame.left)}" '
            f'y1="{_num(p)}" x2="{_num(frame.left - length)}" y2="{_num(p)}" '
            f'stroke="{BLACK}"/>',
            f'<text x="{_num(frame.left - 9)}" y="{_num(p + 4)}" '
            f'text-anchor="end" {FONT}>{escape(_label(y))}</text>']


def _captions(spec, frame, xlabel, ylabel, upper=None):
    cy = (frame.top + frame.bottom) / 2
    out = [f'<text x="{_num((frame.left + frame.right) / 2)}" '
           f'y="{_num(spec.height - 14)}" text-anchor="middle" {FONT}>'
           f'{escape(xlabel)}</text>',
           f'<text x="18" y="{_num(cy)}" text-anchor="middle" {FONT} '
           f'transform="rotate(-90 18 {_num(cy)})">{escape(ylabel)}</text>']
    if upper is not None:
        out.append(f'<text x="{_num((frame.left + frame.right) / 2)}" '
                   f'y="38" text-anchor="middle" {FONT}>{escape(upper)}'
                   f'</text>')
    return out


def _upper_ticks(curve, ticks):
    """Indices (0-based) of the equispaced ``k`` marking major ticks."""
    n = curve.n
    chosen = []
    for q in nice_ticks(0.0, 1.0, ticks):
        if q <= 0:
            continue
        k = min(n, max(1, int(round(q * n))))
        if not chosen or chosen[-1] != k - 1:
            chosen.append(k - 1)
    return chosen


def render_cumulative(curve, spec=PlotSpec()):
    """
    SVG plot of a cumulative curve, starting from the origin.

    The lower axis shows the scores ``S_{i_k}`` and the upper axis ``k/n``,
    both at the major ticks placed at equispaced ``k``. For weighted curves
    these sit at the cumulative weights ``A_k``, and minor ticks equispaced in
    ``A`` show where they would be under uniform weights. The triangle has
    vertices ``(0, 2 sigma)``, ``(0, -2 sigma)`` and a tip on the horizontal
    axis; with ``sigma = 0`` it is omitted and a comment says so.

    Parameters
    ----------
    curve : CumulativeCurve
    spec : PlotSpec

    Returns
    -------
    str
        the SVG document
    """
    xs = np.concatenate([[0.0], curve.abscissae])
    ys = np.concatenate([[0.0], curve.ordinates])
    sigma = float(curve.sigma)
    triangle = spec.include_triangle and sigma > 0
    reach = 2 * sigma if triangle else 0.0
    ylim = _padded(min(ys.min(), -reach), max(ys.max(), reach))
    frame = _Frame(spec, (0.0, 1.0), ylim)
    axis = "A_k" if curve.weighted else "k/n"
    title = spec.title if spec.title is not None else (
        f"cumulative difference versus {axis}")
    out = _header(spec, title)
    if spec.zoom is not None:
        out.append(f'<text x="{_num(spec.width - 30)}" y="20" '
                   f'text-anchor="end" {FONT}>scores from '
                   f'{escape(_label(spec.zoom[0]))} to '
                   f'{escape(_label(spec.zoom[1]))}</text>')
    out.append(frame.open())
    out.append(frame.box())
    out.append(f'<line class="zero" x1="{_num(frame.left)}" '
               f'y1="{_num(frame.py(0))}" x2="{_num(frame.right)}" '
               f'y2="{_num(frame.py(0))}" stroke="{LIGHT_GRAY}"/>')
    for k in _upper_ticks(curve, spec.ticks):
        x = curve.abscissae[k]
        out += _tick(frame, x=x, side="top", text=_label((k + 1) / curve.n))
        out += _tick(frame, x=x, side="bottom",
                     text=_label(curve.scores_at[k]))
    if curve.weighted:
        for q in nice_ticks(0.0, 1.0, 2 * spec.ticks + 1):
            out += _tick(frame, x=q, side="top", length=3, cls="minor")
    for y in nice_ticks(ylim[0], ylim[1], spec.ticks):
        out += _tick(frame, y=y)
    if triangle:
        tip = 0.025 * (frame.right - frame.left) / frame.xscale
        out.append(f'<polygon class="triangle" points="'
                   f'{frame.points([0.0, tip, 0.0], [2 * sigma, 0.0, -2 * sigma])}'
                   f'" fill="none" stroke="{BLACK}" data-sigma="{sigma!r}"/>')
    elif spec.include_triangle:
        out.append("<!-- triangle omitted: sigma is 0 -->")
    out.append(f'<polyline class="curve" points="{frame.points(xs, ys)}" '
               f'fill="none" stroke="{BLACK}"/>')
    out.append("</g>")
    out += _captions(spec, frame,
                     spec.xlabel if spec.xlabel is not None else "score",
                     spec.ylabel if spec.ylabel is not None
                     else "cumulative difference", upper=axis)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _series(frame, points, color, cls):
    if points.shape[0] == 0:
        return []
    out = [f'<polyline class="{cls}" points="'
           f'{frame.points(points[:, 0], points[:, 1])}" fill="none" '
           f'stroke="{color}"/>']
    out += [f'<circle class="{cls}" cx="{_num(frame.px(x))}" '
            f'cy="{_num(frame.py(y))}" r="3" fill="{color}"/>'
            for x, y in points]
    return out


def render_reliability(diagram, bands=None, spec=PlotSpec()):
    """
    SVG reliability diagram.

    The subpopulation is drawn in black and the full population in gray,
    both as markers joined by lines. Bootstrap ``bands`` (diagrams of
    resampled data) are drawn beneath as light-gray polylines, one each.
    Diagrams whose reference is the diagonal draw ``y = x`` instead of a
    full population, over the unit square.

    Parameters
    ----------
    diagram : ReliabilityDiagram
    bands : sequence of ReliabilityDiagram, optional
    spec : PlotSpec

    Returns
    -------
    str
    """
    bands = list(bands or [])
    diagonal = diagram.reference == "diagonal"
    if diagonal:
        xlim = ylim = (0.0, 1.0)
    else:
        pts = np.concatenate([diagram.sub_points, diagram.full_points]
                             + [b.sub_points for b in bands])
        xlim = _padded(pts[:, 0].min(), pts[:, 0].max())
        ylim = _padded(pts[:, 1].min(), pts[:, 1].max())
    frame = _Frame(spec, xlim, ylim, top=40)
    title = spec.title if spec.title is not None else "reliability diagram"
    out = _header(spec, title)
    out.append(frame.open())
    out.append(frame.box())
    for x in nice_ticks(xlim[0], xlim[1], spec.ticks):
        out += _tick(frame, x=x, text=_label(x))
    for y in nice_ticks(ylim[0], ylim[1], spec.ticks):
        out += _tick(frame, y=y)
    for band in bands:
        p = band.sub_points
        out.append(f'<polyline class="band" points="'
                   f'{frame.points(p[:, 0], p[:, 1])}" fill="none" '
                   f'stroke="{LIGHT_GRAY}"/>')
    if diagonal:
        out.append(f'<line class="diagonal" x1="{_num(frame.px(0))}" '
                   f'y1="{_num(frame.py(0))}" x2="{_num(frame.px(1))}" '
                   f'y2="{_num(frame.py(1))}" stroke="{GRAY}" '
                   f'stroke-dasharray="4 3"/>')
    out += _series(frame, diagram.full_points, GRAY, "full")
    out += _series(frame, diagram.sub_points, BLACK, "sub")
    out.append("</g>")
    out += _captions(spec, frame,
                     spec.xlabel if spec.xlabel is not None
                     else "average score",
                     spec.ylabel if spec.ylabel is not None
                     else "average result")
    out.append("</svg>")
    return "\n".join(out) + "\n"
