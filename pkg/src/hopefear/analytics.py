"""Daily aggregation, event overlays, keyword sub-corpora, correlation and OLS."""
from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from datetime import date
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import special

from .corpus import Corpus
from .scoring import ScoredSubmission


class UndefinedCorrelationError(ValueError):
    pass


class SingularDesignError(ValueError):
    pass


@dataclass
class DailyRow:
    day: date
    n_submissions: int
    mean_post_upvotes: Optional[float]
    mean_hope: Optional[float]
    mean_fear: Optional[float]
    mean_polarity: Optional[float]
    closes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EventAnnotation:
    day: date
    index: int
    label: str


@dataclass
class RegressionResult:
    coefficients: list
    std_errors: list
    t_stats: list
    p_values: list
    r_squared: float
    n: int
    ssr: float = 0.0
    names: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _mean(values) -> Optional[float]:
    values = list(values)
    if not values:
        return None
    return math.fsum(values) / len(values)


def aggregate_daily(scored: Sequence[ScoredSubmission]) -> list[DailyRow]:
    if not scored:
        raise ValueError("cannot aggregate an empty scored table")
    by_day = defaultdict(list)
    for r in scored:
        by_day[r.day].append(r)
    rows = []
    for day in sorted(by_day):
        group = by_day[day]
        rows.append(DailyRow(
            day=day,
            n_submissions=len(group),
            mean_post_upvotes=_mean(r.upvotes for r in group if r.kind == "post"),
            mean_hope=_mean(r.hope_score for r in group if r.hope_score is not None),
            mean_fear=_mean(r.fear_score for r in group if r.fear_score is not None),
            mean_polarity=_mean(r.polarity for r in group),
        ))
    return rows


def deviation_from_mean(series: Sequence[tuple]) -> list[tuple]:
    """daily value - overall mean of daily values (positive = above average)."""
    if not series:
        raise ValueError("empty series")
    overall = math.fsum(v for _, v in series) / len(series)
    return [(d, v - overall) for d, v in series]


def moving_average(series: Sequence[float], window: int = 7) -> list[float]:
    """Trailing mean; the first window-1 points average what exists."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    out = []
    for i in range(len(series)):
        chunk = series[max(0, i - window + 1): i + 1]
        out.append(math.fsum(chunk) / len(chunk))
    return out


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two 1-d series of equal length")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def keyword_subcorpus(c: Corpus, include: Sequence[str], exclude: Sequence[str] = ()) -> Corpus:
    if not include:
        raise ValueError("include list must be non-empty")
    inc = [t.lower() for t in include]
    exc = [t.lower() for t in exclude]
    keep = []
    for s in c:
        hay = f"{s.title or ''} {s.text or ''}".lower()
        if any(t in hay for t in inc) and not any(t in hay for t in exc):
            keep.append(s.id)
    return c.subset(keep)


def join_market(daily: Sequence[DailyRow], rows: Iterable) -> list[DailyRow]:
    """Left join market closes onto daily rows; every ticker seen becomes a
    column, absent (None) on days without a close."""
    closes = defaultdict(dict)
    tickers = set()
    for m in rows:
        closes[m.date][m.ticker] = float(m.close)
        tickers.add(m.ticker)
    out = []
    for d in daily:
        merged = dict(d.closes)
        for t in sorted(tickers):
            merged[t] = closes.get(d.day, {}).get(t)
        out.append(DailyRow(d.day, d.n_submissions, d.mean_post_upvotes, d.mean_hope,
                            d.mean_fear, d.mean_polarity, merged))
    return out


def t_sf2(t: float, df: float) -> float:
    """Two-sided tail probability P(|T| >= |t|) for Student's t."""
    if math.isinf(t):
        return 0.0
    if math.isnan(t):
        return math.nan
    return float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))


def ols_fit(y: Sequence[float], X: Sequence[Sequence[float]], names: Sequence[str] = ()) -> RegressionResult:
    """Least squares of y on [1, X...]; X is a list of regressor series."""
    y = np.asarray(y, dtype=float)
    cols = [np.asarray(x, dtype=float) for x in X]
    n = len(y)
    for x in cols:
        if len(x) != n:
            raise ValueError("regressor length differs from response length")
    A = np.column_stack([np.ones(n)] + cols)
    p = A.shape[1]
    if n <= p:
        raise ValueError(f"need n > {p} observations, got {n}")
    if np.linalg.matrix_rank(A) < p:
        raise SingularDesignError("design matrix is rank deficient")

    Q, R = np.linalg.qr(A)
    beta = np.linalg.solve(R, Q.T @ y)
    fitted = A @ beta
    resid = y - fitted
    ssr = math.fsum(resid * resid)
    dy = y - y.mean()
    sst = math.fsum(dy * dy)
    # exact-fit noise: residuals at rounding level of y are zero
    scale = max(float(np.max(np.abs(y))), 1.0)
    if np.all(np.abs(resid) <= 64 * np.finfo(float).eps * scale):
        ssr = 0.0
    df = n - p
    sigma2 = ssr / df
    Rinv = np.linalg.solve(R, np.eye(p))
    cov = sigma2 * (Rinv @ Rinv.T)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))

    t_stats, p_values = [], []
    for b, s in zip(beta, se):
        if s == 0.0:
            t = 0.0 if abs(b) <= 64 * np.finfo(float).eps * scale else math.copysign(math.inf, b)
        else:
            t = float(b / s)
        t_stats.append(t)
        p_values.append(1.0 if t == 0.0 else t_sf2(t, df))

    if sst == 0.0:
        r2 = 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ssr / sst))
    if not names:
        names = ["intercept"] + [f"x{i}" for i in range(1, p)]
    return RegressionResult(
        coefficients=[float(b) for b in beta], std_errors=[float(s) for s in se],
        t_stats=t_stats, p_values=p_values, r_squared=r2, n=n, ssr=ssr, names=list(names),
    )


# -- table I/O ---------------------------------------------------------------

DAILY_BASE_COLUMNS = ("day", "n_submissions", "mean_post_upvotes", "mean_hope", "mean_fear", "mean_polarity")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _opt_float(raw: str) -> Optional[float]:
    return float(raw) if raw not in ("", None) else None


def write_daily_csv(rows: Sequence[DailyRow], path) -> None:
    tickers = sorted({t for r in rows for t in r.closes})
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(DAILY_BASE_COLUMNS) + tickers)
        for r in rows:
            w.writerow([r.day.isoformat(), r.n_submissions, _cell(r.mean_post_upvotes), _cell(r.mean_hope),
                        _cell(r.mean_fear), _cell(r.mean_polarity)] + [_cell(r.closes.get(t)) for t in tickers])


def read_daily_csv(path) -> list[DailyRow]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        missing = set(DAILY_BASE_COLUMNS) - set(cols)
        if missing:
            raise ValueError(f"{path}: daily table missing columns {', '.join(sorted(missing))}")
        tickers = [c for c in cols if c not in DAILY_BASE_COLUMNS]
        for rec in reader:
            rows.append(DailyRow(
                day=date.fromisoformat(rec["day"]),
                n_submissions=int(rec["n_submissions"]),
                mean_post_upvotes=_opt_float(rec["mean_post_upvotes"]),
                mean_hope=_opt_float(rec["mean_hope"]),
                mean_fear=_opt_float(rec["mean_fear"]),
                mean_polarity=_opt_float(rec["mean_polarity"]),
                closes={t: _opt_float(rec[t]) for t in tickers},
            ))
    return rows


def daily_column(rows: Sequence[DailyRow], name: str) -> list[tuple]:
    """(day, value) pairs for a base column or ticker, skipping absent values."""
    out = []
    for r in rows:
        v = getattr(r, name) if name in DAILY_BASE_COLUMNS else r.closes.get(name)
        if v is not None:
            out.append((r.day, float(v)))
    return out


def read_events_csv(path) -> list[EventAnnotation]:
    events = []
    seen = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"day", "index", "label"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: events file missing columns {', '.join(sorted(missing))}")
        for rec in reader:
            idx = int(rec["index"])
            if idx in seen:
                raise ValueError(f"{path}: duplicate event index {idx}")
            seen.add(idx)
            events.append(EventAnnotation(date.fromisoformat(rec["day"]), idx, rec["label"]))
    return sorted(events, key=lambda e: e.index)


def write_regression_json(result: RegressionResult, path, extra: Optional[dict] = None) -> None:
    payload = result.to_dict()
    if extra:
        payload.update(extra)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def read_regression_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
