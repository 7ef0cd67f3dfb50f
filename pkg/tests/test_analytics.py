import math
import random
import statistics
from datetime import date, timedelta
from decimal import Decimal

import numpy as np
import pytest
from helpers import comment, post
from hypothesis import assume, given
from hypothesis import strategies as st

from hopefear.analytics import (
    DailyRow, SingularDesignError, UndefinedCorrelationError, aggregate_daily, deviation_from_mean,
    join_market, keyword_subcorpus, moving_average, ols_fit, pearson, read_daily_csv, read_events_csv,
    read_regression_json, t_sf2, write_daily_csv, write_regression_json,
)
from hopefear.corpus import Corpus
from hopefear.ingest import MarketRow
from hopefear.scoring import ScoredSubmission

D1 = date(2022, 5, 10)
D2 = date(2022, 5, 11)


def scored(sid, day, kind="comment", upvotes=1, hope=None, fear=None, polarity=0.0):
    return ScoredSubmission(id=sid, kind=kind, day=day, upvotes=upvotes, length=1, n_hope=0, n_fear=0,
                            w_length_hope=0.0, w_length_fear=0.0, hope_score=hope, fear_score=fear,
                            polarity=polarity, subjectivity=0.5, sub_in_post=1)


def test_aggregate_daily_means():
    rows = aggregate_daily([scored("a", D1, hope=0.1), scored("b", D1, hope=0.2), scored("c", D1)])
    assert len(rows) == 1
    assert rows[0].mean_hope == pytest.approx(0.15)
    assert rows[0].n_submissions == 3
    assert rows[0].mean_fear is None


def test_aggregate_post_upvotes_and_order():
    rows = aggregate_daily([scored("p2", D2, "post", 20), scored("p1", D2, "post", 10),
                            scored("c", D1, upvotes=99)])
    assert [r.day for r in rows] == [D1, D2]
    assert rows[1].mean_post_upvotes == 15
    assert rows[0].mean_post_upvotes is None


def test_aggregate_empty():
    with pytest.raises(ValueError):
        aggregate_daily([])


def test_deviation_examples():
    assert [v for _, v in deviation_from_mean([(D1, 1), (D1, 2), (D1, 3)])] == [-1, 0, 1]
    assert [v for _, v in deviation_from_mean([(D1, 4.2)] * 5)] == [0.0] * 5
    vals = [0.5, 1.5, 2.0, 4.0, 7.0]  # mean 3.0
    assert [v for _, v in deviation_from_mean([(D1, x) for x in vals])] == pytest.approx([-2.5, -1.5, -1, 1, 4])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=100))
def test_deviation_sums_to_zero(vals):
    dev = deviation_from_mean([(D1, v) for v in vals])
    assert abs(math.fsum(v for _, v in dev)) <= 1e-9 * max(1.0, max(abs(v) for v in vals))


def test_moving_average():
    assert moving_average([1, 2, 3], 2) == [1, 1.5, 2.5]
    assert moving_average([3.0, 1.0, 4.0], 1) == [3.0, 1.0, 4.0]
    assert moving_average([2.0] * 10, 7) == [2.0] * 10
    with pytest.raises(ValueError):
        moving_average([1.0], 0)


def test_pearson_exact():
    x = [0.3, 1.7, 2.2, 5.9, 4.1, 8.8]
    assert pearson(x, x) == 1.0
    assert pearson(x, [-v for v in x]) == -1.0
    with pytest.raises(UndefinedCorrelationError):
        pearson(x, [1.0] * len(x))


def test_pearson_textbook():
    x = [1, 2, 3, 4, 5]
    y = [2, 4, 5, 4, 5]
    # (nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²)) = 30 / sqrt(50 * 30)
    assert pearson(x, y) == pytest.approx(30 / math.sqrt(50 * 30), rel=1e-12)
    assert pearson(x, y) == pytest.approx(statistics.correlation(x, y), rel=1e-12)



@given(st.data())
def test_pearson_properties(data):
    n = data.draw(st.integers(3, 40))
    x = data.draw(st.lists(st.integers(-1000, 1000), min_size=n, max_size=n))
    y = data.draw(st.lists(st.integers(-1000, 1000), min_size=n, max_size=n))
    assume(len(set(x)) > 1 and len(set(y)) > 1)
    r = pearson(x, y)
    assert -1 <= r <= 1
    assert r == pytest.approx(pearson(y, x), abs=1e-12)
    a = data.draw(st.integers(1, 50))
    b = data.draw(st.integers(-100, 100))
    assert pearson([a * v + b for v in x], y) == pytest.approx(r, abs=1e-9)


def test_keyword_subcorpus():
    c = Corpus([
        post("P1", title="Putin said", text="things"),
        post("P2", title="Ukraine", text="and Russia talks"),
        post("P3", title="ukraine only"),
        comment("C1", "P3", text="Zelensky spoke"),
        comment("C2", "P3", text="zelens'kyj again"),
        comment("C3", "P3", text="ZELENSKYY today"),
    ])
    assert set(keyword_subcorpus(c, ["putin"]).submissions) == {"P1"}
    assert set(keyword_subcorpus(c, ["ukraine"], ["russia"]).submissions) == {"P3"}
    assert set(keyword_subcorpus(c, ["zelenskyy", "zelensky", "zelens'kyj"]).submissions) == {"C1", "C2", "C3"}
    with pytest.raises(ValueError):
        keyword_subcorpus(c, [])


@given(st.lists(st.sampled_from(["ukraine", "russia", "war", "peace", "kyiv"]), max_size=6))
def test_keyword_disjoint(texts_words):
    c = Corpus([post(f"P{i}", title=w, text=" ".join(texts_words[:i])) for i, w in enumerate(texts_words)])
    a = set(keyword_subcorpus(c, ["ukraine"], ["russia"]).submissions)
    b = set(keyword_subcorpus(c, ["russia"], ["ukraine"]).submissions)
    assert not a & b


def test_join_market(tmp_path):
    daily = [DailyRow(D1, 1, None, 0.1, 0.2, 0.0), DailyRow(date(2022, 5, 14), 1, None, 0.1, 0.2, 0.0)]
    rows = [MarketRow("GAS", D1, Decimal("5.0")), MarketRow("OIL", D1, Decimal("99.5"))]
    out = join_market(daily, rows)
    assert out[0].closes == {"GAS": 5.0, "OIL": 99.5}
    assert out[1].closes == {"GAS": None, "OIL": None}
    write_daily_csv(out, tmp_path / "daily.csv")
    assert read_daily_csv(tmp_path / "daily.csv") == out


# -- OLS -------------------------------------------------------------------

def gauss_oracle(y, X):
    """Normal equations A'A b = A'y by Gaussian elimination with partial pivoting."""
    n = len(y)
    A = [[1.0] + [float(col[i]) for col in X] for i in range(n)]
    p = len(A[0])
    M = [[sum(A[k][i] * A[k][j] for k in range(n)) for j in range(p)] + [sum(A[k][i] * y[k] for k in range(n))]
         for i in range(p)]
    for c in range(p):
        piv = max(range(c, p), key=lambda r: abs(M[r][c]))
        M[c], M[piv] = M[piv], M[c]
        for r in range(c + 1, p):
            f = M[r][c] / M[c][c]
            for j in range(c, p + 1):
                M[r][j] -= f * M[c][j]
    b = [0.0] * p
    for i in reversed(range(p)):
        b[i] = (M[i][p] - sum(M[i][j] * b[j] for j in range(i + 1, p))) / M[i][i]
    return b


X10 = [[1.2, 2.3, 3.1, 4.8, 5.0, 6.7, 7.2, 8.9, 9.4, 10.1], [0.5, -1.0, 2.2, 0.3, 1.1, -0.7, 2.9, 0.2, 1.8, -0.4]]
Y10 = [3.1, 2.9, 7.4, 6.8, 8.2, 7.1, 13.0, 11.5, 14.2, 11.9]


def test_ols_vs_gauss_oracle():
    res = ols_fit(Y10, X10)
    assert res.coefficients == pytest.approx(gauss_oracle(Y10, X10), rel=1e-9)
    assert len(res.std_errors) == len(res.t_stats) == len(res.p_values) == 3
    for t, p in zip(res.t_stats, res.p_values):
        assert p == pytest.approx(t_sf2(t, 7))


@pytest.mark.parametrize("t, df, p", [(2.262, 9, 0.050), (3.250, 9, 0.010), (1.833, 9, 0.100), (2.228, 10, 0.050),
                                      (1.96, 10_000, 0.050)])
def test_t_table(t, df, p):
    assert t_sf2(t, df) == pytest.approx(p, abs=1e-3)


def test_exact_fit():
    x = [1.0, 2.0, 3.0, 4.0, 5.0]
    res = ols_fit([2 * v for v in x], [x])
    assert res.coefficients[1] == pytest.approx(2.0, rel=1e-12)
    assert res.coefficients[0] == pytest.approx(0.0, abs=1e-12)
    assert res.r_squared == 1.0 and res.ssr == 0.0


def test_constant_response():
    res = ols_fit([3.0] * 6, [[1, 2, 3, 4, 5, 7]])
    assert res.coefficients[1] == pytest.approx(0.0, abs=1e-12)
    assert res.r_squared == 0.0


def test_singular_design():
    with pytest.raises(SingularDesignError):
        ols_fit(Y10, [X10[0], [2 * v for v in X10[0]]])
    with pytest.raises(ValueError):
        ols_fit([1.0, 2.0], [[1.0, 2.0]])


@pytest.mark.parametrize("seed", range(10))
def test_slope_is_r_times_sd_ratio(seed):
    rng = random.Random(seed)
    x = [rng.gauss(0, 2) for _ in range(30)]
    y = [0.7 * v + rng.gauss(0, 1) for v in x]
    slope = ols_fit(y, [x]).coefficients[1]
    assert slope == pytest.approx(pearson(x, y) * statistics.stdev(y) / statistics.stdev(x), rel=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_nested_r2(seed):
    rng = np.random.default_rng(seed)
    x1, x2 = rng.normal(size=40), rng.normal(size=40)
    y = 0.3 * x1 - 0.2 * x2 + rng.normal(size=40)
    full = ols_fit(y, [x1, x2]).r_squared
    assert full >= ols_fit(y, [x1]).r_squared - 1e-12
    assert full >= ols_fit(y, [x2]).r_squared - 1e-12
    assert 0.0 <= full <= 1.0


def test_regression_json(tmp_path):
    res = ols_fit(Y10, X10, names=["intercept", "a", "b"])
    write_regression_json(res, tmp_path / "r.json", {"target": "y"})
    back = read_regression_json(tmp_path / "r.json")
    assert back["coefficients"] == res.coefficients and back["target"] == "y"


def test_events_csv(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("day,index,label\n2022-05-11,2,b\n2022-05-10,1,a\n")
    ev = read_events_csv(p)
    assert [e.index for e in ev] == [1, 2] and ev[0].day == D1
    p.write_text("day,index,label\n2022-05-11,1,b\n2022-05-10,1,a\n")
    with pytest.raises(ValueError, match="duplicate"):
        read_events_csv(p)


def test_daily_csv_absent_cells(tmp_path):
    rows = [DailyRow(D1 + timedelta(days=i), i, None, None, 0.5, -0.1, {}) for i in range(3)]
    write_daily_csv(rows, tmp_path / "d.csv")
    assert tmp_path.joinpath("d.csv").read_text().splitlines()[1] == "2022-05-10,0,,,0.5,-0.1"
    assert read_daily_csv(tmp_path / "d.csv") == rows
