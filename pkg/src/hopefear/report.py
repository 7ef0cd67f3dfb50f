"""Static SVG charts for the daily, event, polarity and regression outputs."""
from __future__ import annotations

import hashlib
import logging
import math
from datetime import date
from pathlib import Path
from typing import Mapping, Optional, Sequence
from xml.sax.saxutils import escape

from . import __version__
from .analytics import EventAnnotation, daily_column, deviation_from_mean, moving_average

log = logging.getLogger(__name__)

WIDTH, HEIGHT = 900, 420
MARGIN = dict(left=70, right=70, top=40, bottom=60)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
MAX_X_TICKS = 15


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _num(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".") if math.isfinite(v) else "0"


class Axis:
    """Linear map from a data domain to a pixel range."""

    def __init__(self, lo: float, hi: float, p0: float, p1: float):
        if hi == lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.p0, self.p1 = lo, hi, p0, p1

    def __call__(self, v: float) -> float:
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)


def _padded(values: Sequence[float], frac: float = 0.05) -> tuple[float, float]:
    lo, hi = float(min(values)), float(max(values))
    pad = (hi - lo) * frac or (abs(hi) * frac or 1.0)
    return lo - pad, hi + pad


class Svg:
    def __init__(self, title: str, inputs: Optional[Mapping[str, str]] = None, width=WIDTH, height=HEIGHT):
        self.width, self.height = width, height
        digests = " ".join(f"{k}={v}" for k, v in sorted((inputs or {}).items()))
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
            f"<!-- hopefear {__version__}; inputs: {escape(digests) or 'none'} -->",
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<text class="title" x="{width / 2}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        ]

    def add(self, s: str) -> None:
        self.parts.append(s)

    def polyline(self, pts, color, cls="series", width=1.5, dash=None):
        if not pts:
            return
        d = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(f'<polyline class="{cls}" fill="none" stroke="{color}" stroke-width="{width}"{extra} points="{d}"/>')

    def text(self, x, y, s, anchor="middle", cls="label", **attrs):
        extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.add(f'<text class="{cls}" x="{_num(x)}" y="{_num(y)}" text-anchor="{anchor}"{extra}>{escape(str(s))}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())


def _frame(svg: Svg, top: float, bottom: float):
    left, right = MARGIN["left"], svg.width - MARGIN["right"]
    svg.add(f'<line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>')
    svg.add(f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
    return left, right


def _x_ticks(svg: Svg, days: Sequence[date], xa: Axis, bottom: float) -> None:
    step = max(1, math.ceil(len(days) / MAX_X_TICKS))
    for i, d in enumerate(days):
        if i % step:
            continue
        x = xa(d.toordinal())
        svg.add(f'<g class="x-tick"><line x1="{_num(x)}" y1="{bottom}" x2="{_num(x)}" y2="{bottom + 5}" stroke="black"/>'
                f'<text x="{_num(x)}" y="{bottom + 18}" text-anchor="middle">{d.isoformat()[5:]}</text></g>')


def _y_ticks(svg: Svg, ya: Axis, x: float, anchor="end", n: int = 5, color="black") -> None:
    dx = -6 if anchor == "end" else 6
    for i in range(n + 1):
        v = ya.lo + (ya.hi - ya.lo) * i / n
        y = ya(v)
        svg.add(f'<g class="y-tick"><line x1="{x}" y1="{_num(y)}" x2="{x + (-4 if anchor == "end" else 4)}" '
                f'y2="{_num(y)}" stroke="{color}"/><text x="{x + dx}" y="{_num(y + 4)}" text-anchor="{anchor}" '
                f'fill="{color}">{v:.4g}</text></g>')


def _legend(svg: Svg, names: Sequence[str], top: float) -> None:
    x = MARGIN["left"] + 10
    for i, name in enumerate(names):
        color = COLORS[i % len(COLORS)]
        svg.add(f'<g class="legend"><rect x="{x}" y="{top + 4 + 14 * i}" width="10" height="10" fill="{color}"/>'
                f'<text x="{x + 14}" y="{top + 13 + 14 * i}">{escape(name)}</text></g>')


def interest_chart(days: Sequence[date], counts: Sequence[int], mean_upvotes: Sequence[Optional[float]],
                   inputs=None) -> Optional[Svg]:
    """Daily submission counts (left axis) and mean post upvotes (right axis)."""
    if not days:
        log.warning("interest chart skipped: empty series")
        return None
    svg = Svg("Submissions per day and mean post upvotes", inputs)
    top, bottom = MARGIN["top"], svg.height - MARGIN["bottom"]
    left, right = _frame(svg, top, bottom)
    xs = [d.toordinal() for d in days]
    xa = Axis(xs[0], xs[-1], left, right) if len(xs) > 1 else Axis(xs[0] - 1, xs[0] + 1, left, right)
    ya = Axis(0, max(max(counts), 1) * 1.05, bottom, top)
    svg.polyline([(xa(x), ya(c)) for x, c in zip(xs, counts)], COLORS[0])
    ups = [(x, u) for x, u in zip(xs, mean_upvotes) if u is not None]
    if ups:
        yb = Axis(*_padded([u for _, u in ups]), bottom, top)
        svg.polyline([(xa(x), yb(u)) for x, u in ups], COLORS[1], cls="series upvotes")
        svg.add(f'<line class="axis" x1="{right}" y1="{top}" x2="{right}" y2="{bottom}" stroke="black"/>')
        _y_ticks(svg, yb, right, anchor="start", color=COLORS[1])
    _y_ticks(svg, ya, left)
    _x_ticks(svg, days, xa, bottom)
    _legend(svg, ["submissions", "mean post upvotes"], top)
    return svg


def running_means_chart(days: Sequence[date], series: Mapping[str, Sequence[Optional[float]]], window: int = 7,
                        title="Hope and fear: daily means with 7-day moving average", inputs=None) -> Optional[Svg]:
    """Daily values (thin, dashed) and their trailing moving average (thick)."""
    clean = {}
    for name, vals in series.items():
        pts = [(d, v) for d, v in zip(days, vals) if v is not None]
        if pts:
            clean[name] = pts
    if not clean:
        log.warning("running means chart skipped: empty series")
        return None
    svg = Svg(title, inputs)
    top, bottom = MARGIN["top"], svg.height - MARGIN["bottom"]
    left, right = _frame(svg, top, bottom)
    all_days = sorted({d for pts in clean.values() for d, _ in pts})
    xa = Axis(all_days[0].toordinal(), all_days[-1].toordinal(), left, right)
    ya = Axis(*_padded([v for pts in clean.values() for _, v in pts]), bottom, top)
    for i, (name, pts) in enumerate(clean.items()):
        color = COLORS[i % len(COLORS)]
        ma = moving_average([v for _, v in pts], window)
        svg.polyline([(xa(d.toordinal()), ya(v)) for d, v in pts], color, cls="series raw", width=0.8, dash="3,2")
        svg.polyline([(xa(d.toordinal()), ya(m)) for (d, _), m in zip(pts, ma)], color, cls="series ma", width=2)
    _y_ticks(svg, ya, left)
    _x_ticks(svg, all_days, xa, bottom)
    _legend(svg, list(clean), top)
    return svg


def deviation_chart(deviation: Sequence[tuple], events: Sequence[EventAnnotation], inputs=None,
                    title="Daily hope score minus overall mean, with events") -> Optional[Svg]:
    if not deviation:
        log.warning("deviation chart skipped: empty series")
        return None
    svg = Svg(title, inputs)
    top, bottom = MARGIN["top"] + 20, svg.height - MARGIN["bottom"]
    left, right = _frame(svg, top, bottom)
    ords = [d.toordinal() for d, _ in deviation] + [e.day.toordinal() for e in events]
    xa = Axis(min(ords) - 0.5, max(ords) + 0.5, left, right)
    span = max(abs(v) for _, v in deviation) or 1.0
    ya = Axis(-span * 1.1, span * 1.1, bottom, top)
    zero = ya(0.0)
    svg.add(f'<line class="zero" x1="{left}" y1="{_num(zero)}" x2="{right}" y2="{_num(zero)}" stroke="#888"/>')
    bar_w = max(1.0, (right - left) / max(1, len(ords)) * 0.7)
    for d, v in deviation:
        x = xa(d.toordinal())
        y = ya(v)
        color = COLORS[2] if v >= 0 else COLORS[1]
        svg.add(f'<rect class="bar" x="{_num(x - bar_w / 2)}" y="{_num(min(y, zero))}" width="{_num(bar_w)}" '
                f'height="{_num(abs(zero - y))}" fill="{color}"/>')
    for e in events:
        x = xa(e.day.toordinal())
        svg.add(f'<g class="event-marker" data-index="{e.index}" data-day="{e.day.isoformat()}">'
                f'<title>{escape(e.label)}</title>'
                f'<line x1="{_num(x)}" y1="{top}" x2="{_num(x)}" y2="{bottom}" stroke="#555" stroke-dasharray="2,3"/>'
                f'<circle cx="{_num(x)}" cy="{top - 8}" r="7" fill="#ffd54f" stroke="#555"/>'
                f'<text x="{_num(x)}" y="{top - 4}" text-anchor="middle" font-size="9">{e.index}</text></g>')
    _y_ticks(svg, ya, left)
    _x_ticks(svg, sorted({d for d, _ in deviation}), xa, bottom)
    return svg


def regression_scatter(x: Sequence[float], y: Sequence[float], intercept: float, slope: float,
                       xlabel: str, ylabel: str, inputs=None) -> Optional[Svg]:
    """Scatter of (x, y) with the fitted line. The plot group carries its data
    domains so pixel coordinates can be mapped back."""
    if not x:
        log.warning("regression scatter skipped: empty series")
        return None
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    intercept, slope = float(intercept), float(slope)
    svg = Svg(f"{ylabel} vs {xlabel}", inputs)
    top, bottom = MARGIN["top"], svg.height - MARGIN["bottom"]
    left, right = _frame(svg, top, bottom)
    x0, x1 = _padded(x)
    fit = [intercept + slope * x0, intercept + slope * x1]
    y0, y1 = _padded(list(y) + fit)
    xa = Axis(x0, x1, left, right)
    ya = Axis(y0, y1, bottom, top)
    svg.add(f'<g class="plot" data-x-domain="{x0!r} {x1!r}" data-y-domain="{y0!r} {y1!r}" '
            f'data-x-range="{left} {right}" data-y-range="{bottom} {top}">')
    for xi, yi in zip(x, y):
        svg.add(f'<circle class="point" cx="{_num(xa(xi))}" cy="{_num(ya(yi))}" r="3" fill="{COLORS[0]}" fill-opacity="0.7"/>')
    svg.add(f'<line class="fit" x1="{xa(x0)!r}" y1="{ya(fit[0])!r}" x2="{xa(x1)!r}" y2="{ya(fit[1])!r}" '
            f'stroke="{COLORS[1]}" stroke-width="2"/>')
    svg.add("</g>")
    _y_ticks(svg, ya, left)
    for i in range(6):
        v = x0 + (x1 - x0) * i / 5
        svg.add(f'<g class="x-tick"><line x1="{_num(xa(v))}" y1="{bottom}" x2="{_num(xa(v))}" y2="{bottom + 5}" '
                f'stroke="black"/><text x="{_num(xa(v))}" y="{bottom + 18}" text-anchor="middle">{v:.4g}</text></g>')
    svg.text((left + right) / 2, svg.height - 15, xlabel)
    svg.text(18, (top + bottom) / 2, ylabel, transform=f"rotate(-90 18 {(top + bottom) / 2})")
    return svg


def proportions_chart(proportions: Sequence[float], inputs=None) -> Optional[Svg]:
    if len(proportions) == 0:
        log.warning("topic proportions chart skipped: no topics")
        return None
    svg = Svg("Expected topic proportions", inputs)
    top, bottom = MARGIN["top"], svg.height - MARGIN["bottom"]
    left, right = _frame(svg, top, bottom)
    ya = Axis(0, max(proportions) * 1.1, bottom, top)
    slot = (right - left) / len(proportions)
    for k, p in enumerate(proportions):
        x = left + slot * k + slot * 0.15
        svg.add(f'<rect class="bar" data-topic="{k + 1}" x="{_num(x)}" y="{_num(ya(p))}" width="{_num(slot * 0.7)}" '
                f'height="{_num(bottom - ya(p))}" fill="{COLORS[0]}"/>')
        svg.text(x + slot * 0.35, bottom + 18, f"Topic {k + 1}")
    _y_ticks(svg, ya, left)
    return svg


def emit_report(daily, events, regressions, outdir, theta=None, polarity_groups=None, inputs=None,
                emotion_column: str = "mean_hope") -> list:
    """Write every chart that has data into `outdir`; returns written paths.

    `regressions` is a list of dicts as written by the regress command (fields
    of RegressionResult plus target, regressors and data). `polarity_groups`
    maps a group name to (days, daily mean polarity).
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def save(svg, name):
        if svg is not None:
            path = out / name
            svg.save(path)
            written.append(path)

    days = [r.day for r in daily]
    save(interest_chart(days, [r.n_submissions for r in daily], [r.mean_post_upvotes for r in daily], inputs),
         "interest.svg")
    save(running_means_chart(days, {"hope": [r.mean_hope for r in daily], "fear": [r.mean_fear for r in daily]},
                             inputs=inputs), "hope_fear.svg")
    series = daily_column(daily, emotion_column)
    if series:
        save(deviation_chart(deviation_from_mean(series), events or [], inputs), "deviation.svg")
    else:
        log.warning("deviation chart skipped: no %s values", emotion_column)
    if polarity_groups:
        all_days = sorted({d for ds, _ in polarity_groups.values() for d in ds})
        aligned = {}
        for name, (ds, vals) in polarity_groups.items():
            lookup = dict(zip(ds, vals))
            aligned[name] = [lookup.get(d) for d in all_days]
        save(running_means_chart(all_days, aligned, title="Mean daily polarity with 7-day moving average",
                                 inputs=inputs), "polarity.svg")
    for i, reg in enumerate(regressions or [], 1):
        if len(reg.get("regressors", [])) != 1:
            continue
        xname = reg["regressors"][0]
        data = reg.get("data", {})
        save(regression_scatter(data.get(xname, []), data.get(reg["target"], []), reg["coefficients"][0],
                                reg["coefficients"][1], xname, reg["target"], inputs),
             f"regression_{i}_{reg['target']}_{xname}.svg".replace("/", "_"))
    if theta is not None and len(theta):
        save(proportions_chart([float(v) for v in theta.mean(axis=0)], inputs), "topic_proportions.svg")
    return written
