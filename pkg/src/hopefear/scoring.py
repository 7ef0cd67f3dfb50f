"""Tokenization, lexicon hit counts and the length/upvote weighted emotion scores."""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, fields
from datetime import date, datetime, timezone
from typing import Iterable, Mapping, Optional

from .corpus import Corpus, Submission
from .lexicon import DerivedLexicon, PolarityEntry

EQUATION = "equation"  # n / (length * 100)
PROSE = "prose"  # (n / length) * 100
NORMALIZATION_MODES = (EQUATION, PROSE)

NEGATIONS = frozenset({"not", "no", "never", "neither", "nor", "none", "cannot", "can't", "don't",
                       "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "won't",
                       "wouldn't", "shouldn't", "couldn't", "hasn't", "haven't", "hadn't"})

_WORD = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})


def tokenize(text: Optional[str]) -> list[str]:
    if not text:
        return []
    return _WORD.findall(text.translate(_APOSTROPHES).lower())


def count_hits(tokens: Iterable[str], lexicon) -> int:
    words = lexicon.words if isinstance(lexicon, DerivedLexicon) else lexicon
    return sum(1 for t in tokens if t in words)


def w_length(n_emotion: int, length: int, mode: str = EQUATION) -> float:
    if n_emotion < 0 or length < 0:
        raise ValueError(f"w_length needs non-negative inputs, got n={n_emotion}, length={length}")
    if length == 0:
        return 0.0
    if mode == EQUATION:
        return n_emotion / (length * 100)
    if mode == PROSE:
        return n_emotion / length * 100
    raise ValueError(f"unknown normalization mode {mode!r}")


def w_upvotes(wl: float, upvotes: int, sub_in_post: int) -> float:
    if sub_in_post < 1:
        raise ValueError(f"sub_in_post must be >= 1, got {sub_in_post}")
    return wl * upvotes / sub_in_post


def _emotion_score(sub: Submission, ctx: Corpus, lex: DerivedLexicon, mode: str) -> float:
    tokens = tokenize(sub.scored_text)
    wl = w_length(count_hits(tokens, lex), len(tokens), mode)
    return w_upvotes(wl, sub.upvotes, ctx.thread_size[sub.ancestor_id])


def hope_score(sub: Submission, ctx: Corpus, hope_lex: DerivedLexicon, mode: str = EQUATION) -> float:
    return _emotion_score(sub, ctx, hope_lex, mode)


def fear_score(sub: Submission, ctx: Corpus, fear_lex: DerivedLexicon, mode: str = EQUATION) -> float:
    return _emotion_score(sub, ctx, fear_lex, mode)


def polarity_subjectivity(tokens: list[str], plex: Mapping[str, PolarityEntry],
                          negations=NEGATIONS) -> tuple[float, float]:
    pols = []
    subjs = []
    prev = None
    for tok in tokens:
        entry = plex.get(tok)
        if entry is not None:
            pol = entry.polarity
            if prev is not None and prev in negations:
                pol *= -0.5
            pols.append(pol)
            subjs.append(entry.subjectivity)
        prev = tok
    if not pols:
        return 0.0, 0.0
    polarity = min(1.0, max(-1.0, math.fsum(pols) / len(pols)))
    subjectivity = min(1.0, max(0.0, math.fsum(subjs) / len(subjs)))
    return polarity, subjectivity


@dataclass
class ScoredSubmission:
    id: str
    kind: str
    day: date
    upvotes: int
    length: int
    n_hope: int
    n_fear: int
    w_length_hope: float
    w_length_fear: float
    hope_score: Optional[float]
    fear_score: Optional[float]
    polarity: float
    subjectivity: float
    sub_in_post: int


SCORED_COLUMNS = tuple(f.name for f in fields(ScoredSubmission))


def utc_day(ts: float) -> date:
    return datetime.fromtimestamp(ts, tz=timezone.utc).date()


def score_submission(sub: Submission, ctx: Corpus, hope_lex: DerivedLexicon, fear_lex: DerivedLexicon,
                     plex: Mapping[str, PolarityEntry], subjectivity_gate: float = 0.5,
                     mode: str = EQUATION) -> ScoredSubmission:
    tokens = tokenize(sub.scored_text)
    length = len(tokens)
    n_hope = count_hits(tokens, hope_lex)
    n_fear = count_hits(tokens, fear_lex)
    wl_hope = w_length(n_hope, length, mode)
    wl_fear = w_length(n_fear, length, mode)
    polarity, subjectivity = polarity_subjectivity(tokens, plex)

    orphan = ctx.is_orphan(sub.id)
    sub_in_post = 1 if orphan else ctx.thread_size[sub.ancestor_id]
    if orphan or subjectivity < subjectivity_gate:
        hope = fear = None
    else:
        hope = w_upvotes(wl_hope, sub.upvotes, sub_in_post)
        fear = w_upvotes(wl_fear, sub.upvotes, sub_in_post)
    return ScoredSubmission(
        id=sub.id, kind=sub.kind, day=utc_day(sub.created_at), upvotes=sub.upvotes,
        length=length, n_hope=n_hope, n_fear=n_fear,
        w_length_hope=wl_hope, w_length_fear=wl_fear,
        hope_score=hope, fear_score=fear,
        polarity=polarity, subjectivity=subjectivity, sub_in_post=sub_in_post,
    )


def score_corpus(c: Corpus, lexicons: tuple[DerivedLexicon, DerivedLexicon],
                 plex: Mapping[str, PolarityEntry], subjectivity_gate: float = 0.5,
                 mode: str = EQUATION) -> list[ScoredSubmission]:
    """Score every submission, ordered by id.

    Emotion scores are None when subjectivity falls below the gate or the
    submission is an orphan (no thread size to normalize by).
    """
    if mode not in NORMALIZATION_MODES:
        raise ValueError(f"unknown normalization mode {mode!r}")
    hope_lex, fear_lex = lexicons
    c.resolve_ancestors()
    return [score_submission(c[sid], c, hope_lex, fear_lex, plex, subjectivity_gate, mode)
            for sid in sorted(c.submissions)]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def write_scored_csv(rows: Iterable[ScoredSubmission], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORED_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(getattr(r, name)) for name in SCORED_COLUMNS])


_INT_COLS = {"upvotes", "length", "n_hope", "n_fear", "sub_in_post"}
_OPT_FLOAT_COLS = {"hope_score", "fear_score"}


def read_scored_csv(path) -> list[ScoredSubmission]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SCORED_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: scored table missing columns {', '.join(sorted(missing))}")
        for rec in reader:
            kw = {}
            for name in SCORED_COLUMNS:
                raw = rec[name]
                if name in ("id", "kind"):
                    kw[name] = raw
                elif name == "day":
                    kw[name] = date.fromisoformat(raw)
                elif name in _INT_COLS:
                    kw[name] = int(raw)
                elif name in _OPT_FLOAT_COLS:
                    kw[name] = float(raw) if raw != "" else None
                else:
                    kw[name] = float(raw)
            rows.append(ScoredSubmission(**kw))
    return rows
