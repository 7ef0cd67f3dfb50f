import csv
import math

import pytest
from helpers import comment, post
from hypothesis import given
from hypothesis import strategies as st

from hopefear.corpus import Corpus
from hopefear.lexicon import DerivedLexicon, PolarityEntry
from hopefear.scoring import (
    PROSE, SCORED_COLUMNS, count_hits, fear_score, hope_score, polarity_subjectivity, read_scored_csv,
    score_corpus, tokenize, w_length, w_upvotes, write_scored_csv,
)

HOPE = DerivedLexicon("hope", frozenset({"hope", "optimism", "rescue"}), "anticipation & (positive | joy)")
FEAR = DerivedLexicon("fear", frozenset({"war", "bomb", "threat"}), "fear")
PLEX = {
    "good": PolarityEntry("good", 0.7, 0.6),
    "bad": PolarityEntry("bad", -0.7, 0.7),
    "hope": PolarityEntry("hope", 0.3, 0.8),
    "war": PolarityEntry("war", -0.5, 0.6),
    "plain": PolarityEntry("plain", 0.0, 0.1),
}


def words(n, fill="x"):
    return " ".join([fill] * n)


def test_count_hits():
    assert count_hits(["hope", "hope", "war"], {"hope"}) == 2
    assert count_hits(["a", "b"], {"c"}) == 0


def test_count_hits_nested_loop_oracle():
    toks = tokenize("hope war the hope bomb rescue a b c hope threat x y z war peace calm hope d e")
    assert len(toks) == 20
    lex = HOPE.words | FEAR.words
    brute = 0
    for t in toks:
        for w in lex:
            if t == w:
                brute += 1
    assert count_hits(toks, lex) == brute


@pytest.mark.parametrize("n, length, mode, expected", [
    (2, 50, "equation", 0.0004),
    (0, 17, "equation", 0.0),
    (2, 50, PROSE, 4.0),
    (3, 0, "equation", 0.0),
])
def test_w_length(n, length, mode, expected):
    assert w_length(n, length, mode) == pytest.approx(expected, rel=1e-15)


def test_w_length_negative():
    with pytest.raises(ValueError):
        w_length(-1, 5)


@pytest.mark.parametrize("wl, up, sub, expected", [
    (0.0004, 10, 5, 0.0008), (0.0004, 0, 3, 0.0), (0.0004, -5, 1, -0.002),
])
def test_w_upvotes(wl, up, sub, expected):
    assert w_upvotes(wl, up, sub) == pytest.approx(expected, rel=1e-12)


def test_w_upvotes_contract():
    with pytest.raises(ValueError):
        w_upvotes(0.1, 1, 0)


def thread(first_text, first_upvotes, n_comments, kind="post"):
    subs = [post("P1", title="", text=first_text, upvotes=first_upvotes)]
    subs += [comment(f"C{i}", "P1") for i in range(n_comments)]
    return Corpus(subs).resolve_ancestors()


def test_hope_score_example():
    c = thread("hope hope " + words(48), 10, 4)
    assert hope_score(c["P1"], c, HOPE) == pytest.approx(0.0008, rel=1e-12)


def test_fear_score_example():
    c = thread("war " + words(24), 4, 1)
    assert fear_score(c["P1"], c, FEAR) == pytest.approx(0.0008, rel=1e-12)


def test_no_words_and_empty_text():
    c = thread("nothing to see", 3, 0)
    assert hope_score(c["P1"], c, HOPE) == 0.0
    c = thread("", 3, 0)
    assert fear_score(c["P1"], c, FEAR) == 0.0


def test_post_scores_title_and_text():
    c = Corpus([post("P1", title="hope", text="plain words")]).resolve_ancestors()
    assert hope_score(c["P1"], c, HOPE) == pytest.approx(1 / 300)


@pytest.mark.parametrize("tokens, expected", [
    (["good"], (0.7, 0.6)),
    (["nothing", "here"], (0.0, 0.0)),
    (["not", "good"], (-0.35, 0.6)),
])
def test_polarity_examples(tokens, expected):
    pol, subj = polarity_subjectivity(tokens, PLEX)
    assert pol == pytest.approx(expected[0], rel=1e-12)
    assert subj == pytest.approx(expected[1], rel=1e-12)


@given(st.lists(st.sampled_from(["good", "bad", "hope", "war", "plain", "not", "never", "x"]), max_size=30))
def test_polarity_bounds(tokens):
    pol, subj = polarity_subjectivity(tokens, PLEX)
    assert -1.0 <= pol <= 1.0
    assert 0.0 <= subj <= 1.0


@given(st.integers(1, 5), st.integers(0, 20), st.integers(-50, 50), st.integers(1, 1000))
def test_scale_equivariance(n_hope, n_other, upvotes, k):
    text = words(n_hope, "hope") + " " + words(n_other)
    a = thread(text, upvotes, 2)
    b = thread(text, upvotes * k, 2)
    assert hope_score(b["P1"], b, HOPE) == pytest.approx(k * hope_score(a["P1"], a, HOPE), rel=1e-12, abs=0)


@given(st.integers(1, 10), st.integers(0, 40), st.integers(1, 10))
def test_length_monotonicity(n, length_extra, added):
    base = w_length(n, n + length_extra)
    assert w_length(n, n + length_extra + added) < base


# -- oracle ----------------------------------------------------------------

def oracle_tokens(text):
    # fixture texts hold plain words and trailing punctuation only
    out = []
    for raw in (text or "").lower().split():
        raw = raw.strip(",.!?")
        if raw:
            out.append(raw)
    return out


def oracle_scores(subs, hope_words, fear_words):
    """Step-by-step recomputation: hits, length, thread size by walking parents."""
    by_id = {s.id: s for s in subs}

    def root_of(s):
        while s.parent_id is not None:
            if s.parent_id not in by_id:
                return None
            s = by_id[s.parent_id]
        return s.id

    roots = {s.id: root_of(s) for s in subs}
    out = {}
    for s in subs:
        text = (s.title + " " + s.text if s.kind == "post" and s.title else s.text)
        toks = oracle_tokens(text)
        r = roots[s.id]
        size = sum(1 for v in roots.values() if v == r) if r is not None else 1
        res = []
        for lex in (hope_words, fear_words):
            n = len([t for t in toks if t in lex])
            wl = 0.0 if not toks else n / (len(toks) * 100)
            res.append(wl * s.upvotes / size)
        out[s.id] = tuple(res)
    return out


def fixture_corpus():
    return [
        post("P1", title="Hope for rescue", text="The war is bad but hope is good", upvotes=12),
        comment("C1", "P1", text="Not good, war and bomb threat", upvotes=-3),
        comment("C2", "C1", text="", upvotes=5),
        comment("C3", "C1", text="hope hope good plain", upvotes=40),
        post("P2", title="Plain", text="plain plain plain", upvotes=2),
        comment("C4", "P2", text="bomb war good", upvotes=0),
        post("P3", title="War", text="", upvotes=-1),
        comment("C5", "P3", text="good optimism rescue hope war", upvotes=7),
        comment("C6", "P3", text="bad threat, bad bomb", upvotes=3),
        comment("C7", "C6", text="never good", upvotes=1),
    ]


def test_oracle_equivalence():
    subs = fixture_corpus()
    expected = oracle_scores(subs, HOPE.words, FEAR.words)
    rows = score_corpus(Corpus(subs), (HOPE, FEAR), PLEX, subjectivity_gate=0.0)
    assert len(rows) == len(subs)
    for r in rows:
        h, f = expected[r.id]
        assert math.isclose(r.hope_score, h, rel_tol=1e-12, abs_tol=0.0) or (h == 0 and r.hope_score == 0)
        assert math.isclose(r.fear_score, f, rel_tol=1e-12, abs_tol=0.0) or (f == 0 and r.fear_score == 0)


def test_gate():
    subs = fixture_corpus()
    rows = score_corpus(Corpus(subs), (HOPE, FEAR), PLEX)
    for r in rows:
        excluded = r.hope_score is None
        assert excluded == (r.subjectivity < 0.5)
        assert (r.fear_score is None) == excluded
    assert any(r.hope_score is None for r in rows) and any(r.hope_score is not None for r in rows)
    low = next(r for r in rows if r.id == "P2")
    assert low.subjectivity == pytest.approx(0.1) and low.hope_score is None
    assert low.polarity == 0.0 and low.length == 4


def test_orphan_excluded():
    c = Corpus([post("P1", text="hope good"), comment("C1", "GONE", text="hope good")])
    rows = {r.id: r for r in score_corpus(c, (HOPE, FEAR), PLEX)}
    assert rows["C1"].hope_score is None and rows["C1"].sub_in_post == 1
    assert rows["P1"].hope_score is not None


def test_csv_round_trip(tmp_path):
    rows = score_corpus(Corpus(fixture_corpus()), (HOPE, FEAR), PLEX)
    path = tmp_path / "scored.csv"
    write_scored_csv(rows, path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        assert tuple(next(reader)) == SCORED_COLUMNS
        body = list(reader)
    p2 = body[[r[0] for r in body].index("P2")]
    assert p2[SCORED_COLUMNS.index("hope_score")] == ""
    assert read_scored_csv(path) == rows
