"""Covariate effects on topic proportions, topic correlation, word clouds."""
from __future__ import annotations

import csv
import json
import math
from typing import Mapping, Optional, Sequence

import numpy as np

from ..analytics import RegressionResult, UndefinedCorrelationError, ols_fit, pearson
from .model import TopicModelState

EFFECT_TERMS = ("intercept", "hope_score", "fear_score")


def estimate_effect(theta: np.ndarray, hope: Sequence[float], fear: Sequence[float]) -> list[RegressionResult]:
    """Per topic, OLS of theta[:, k] on [1, hope, fear]."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[0] != len(hope) or theta.shape[0] != len(fear):
        raise ValueError("theta rows and covariates must align")
    return [ols_fit(theta[:, k], [hope, fear], names=EFFECT_TERMS) for k in range(theta.shape[1])]


def estimate_effect_state(state: TopicModelState, covariates: Mapping[str, tuple]) -> tuple[list[RegressionResult], list]:
    """Align state documents with covariates {doc_id: (hope, fear)}; documents
    lacking either score are dropped. Returns (results, doc ids used)."""
    if state.doc_ids is None:
        raise ValueError("state carries no document ids")
    theta = state.theta()
    rows, hope, fear, used = [], [], [], []
    for d, doc_id in enumerate(state.doc_ids):
        cov = covariates.get(doc_id)
        if cov is None or cov[0] is None or cov[1] is None:
            continue
        rows.append(d)
        hope.append(cov[0])
        fear.append(cov[1])
        used.append(doc_id)
    return estimate_effect(theta[rows], hope, fear), used


def topic_correlation(theta: np.ndarray) -> np.ndarray:
    """K x K Pearson correlation of theta columns; NaN where a column is constant."""
    theta = np.asarray(theta, dtype=float)
    K = theta.shape[1]
    out = np.full((K, K), np.nan)
    for i in range(K):
        for j in range(i, K):
            try:
                r = pearson(theta[:, i], theta[:, j])
            except UndefinedCorrelationError:
                continue
            out[i, j] = out[j, i] = r
        if not math.isnan(out[i, i]):
            out[i, i] = 1.0
    return out


def wordcloud_export(state: TopicModelState, m: int = 50) -> list[dict]:
    phi = state.phi()
    out = []
    for k in range(state.K):
        order = np.lexsort((np.arange(state.n_terms), -phi[k]))[:m]
        terms = [{"term": state.terms[i] if state.terms else int(i), "weight": float(phi[k, i])} for i in order]
        out.append({"topic": k + 1, "terms": terms})
    return out


def write_wordclouds_json(clouds: list, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(clouds, fh, indent=1, ensure_ascii=False)
        fh.write("\n")


def write_effects_csv(results: Sequence[RegressionResult], path) -> None:
    """Long format, one row per (topic, term)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["topic", "term", "estimate", "std_error", "t_stat", "p_value", "r_squared", "n"])
        for k, res in enumerate(results, 1):
            for i, name in enumerate(res.names):
                w.writerow([k, name, repr(res.coefficients[i]), repr(res.std_errors[i]), repr(res.t_stats[i]),
                            repr(res.p_values[i]), repr(res.r_squared), res.n])


def effects_table(results: Sequence[RegressionResult]) -> list[list]:
    """Rows intercept/hope/fear, one column per topic."""
    return [[name] + [res.coefficients[i] for res in results] for i, name in enumerate(EFFECT_TERMS)]


def write_matrix_csv(M: np.ndarray, path, labels: Optional[Sequence[str]] = None) -> None:
    n = M.shape[1]
    labels = list(labels) if labels else [f"topic_{k + 1}" for k in range(n)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + labels)
        for i in range(M.shape[0]):
            w.writerow([labels[i] if M.shape[0] == n else i] + ["" if math.isnan(v) else repr(float(v)) for v in M[i]])
