"""Model-selection diagnostics: coherence, exclusivity, held-out likelihood, residuals."""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, Sequence

import numpy as np

from .dtm import DocTermCounts
from .model import TopicModelState, fold_in, gibbs_fit

PROBABILITY = "probability"
FREX = "frex"


@dataclass
class KDiagnostics:
    K: int
    heldout_loglik: float
    residual_dispersion: float
    mean_coherence: float
    mean_exclusivity: float


def _ranked(scores: np.ndarray, m: int) -> np.ndarray:
    # descending score, ties by term id
    order = np.lexsort((np.arange(len(scores)), -scores))
    return order[:m]


def _presence(state: TopicModelState) -> np.ndarray:
    P = np.zeros((state.n_docs, state.n_terms), dtype=bool)
    P[state.docs, state.words] = True
    return P


def coherence(state: TopicModelState, top_m: int = 10) -> np.ndarray:
    """Per-topic UMass coherence over the training documents:
    sum over ranked pairs i<j of log((D(w_i, w_j) + 1) / D(w_j)).
    Pairs whose w_j occurs in no document are skipped."""
    P = _presence(state).astype(np.int64)
    doc_freq = P.sum(axis=0)
    phi = state.phi()
    out = np.zeros(state.K)
    for k in range(state.K):
        top = _ranked(phi[k], top_m)
        sub = P[:, top]
        co = sub.T @ sub
        total = 0.0
        for j in range(1, len(top)):
            dj = doc_freq[top[j]]
            if dj == 0:
                continue
            for i in range(j):
                total += math.log((co[i, j] + 1) / dj)
        out[k] = total
    return out


def _ecdf_rank(values: np.ndarray) -> np.ndarray:
    """Fraction of entries <= each entry."""
    s = np.sort(values)
    return np.searchsorted(s, values, side="right") / len(values)


def frex_scores(phi: np.ndarray, w: float = 0.7) -> np.ndarray:
    excl = phi / phi.sum(axis=0, keepdims=True)
    out = np.empty_like(phi)
    for k in range(phi.shape[0]):
        e = _ecdf_rank(excl[k])
        f = _ecdf_rank(phi[k])
        out[k] = 1.0 / (w / e + (1.0 - w) / f)
    return out


def exclusivity(state: TopicModelState, top_m: int = 10, w: float = 0.7) -> np.ndarray:
    """Per-topic mean FREX over the topic's top words by probability."""
    phi = state.phi()
    frex = frex_scores(phi, w)
    return np.array([frex[k, _ranked(phi[k], top_m)].mean() for k in range(state.K)])


def split_halves(dtm: DocTermCounts) -> tuple[DocTermCounts, list]:
    """First halves (for fold-in) and second halves (for scoring); documents
    shorter than 2 tokens are skipped."""
    firsts, seconds, ids = [], [], []
    for doc_id, toks in zip(dtm.doc_ids, dtm.tokens):
        if len(toks) < 2:
            continue
        h = len(toks) // 2
        firsts.append(toks[:h])
        seconds.append(toks[h:])
        ids.append(doc_id)
    return DocTermCounts(ids, firsts, dtm.n_terms), seconds


def heldout_likelihood(state: TopicModelState, heldout: DocTermCounts, iters: int = 100, seed: int = 0,
                       backend: Optional[str] = None) -> float:
    """Mean per-token log-likelihood of second halves given theta folded in
    from first halves (document completion)."""
    first, seconds = split_halves(heldout)
    if not seconds:
        return math.nan
    theta = fold_in(state, first, iters=iters, seed=seed, backend=backend)
    phi = state.phi()
    total = 0.0
    count = 0
    for d, toks in enumerate(seconds):
        probs = theta[d] @ phi[:, toks]
        total += math.fsum(np.log(probs))
        count += len(toks)
    return min(0.0, total / count)


def residual_dispersion(state: TopicModelState, dtm: DocTermCounts, theta: Optional[np.ndarray] = None) -> float:
    """Mean over documents of the Pearson statistic divided by its degrees
    of freedom (cells with positive probability minus one)."""
    theta = state.theta() if theta is None else theta
    phi = state.phi()
    X = dtm.counts()
    ratios = []
    for d in range(X.shape[0]):
        n = X[d].sum()
        if n == 0:
            continue
        p = theta[d] @ phi
        mask = p > 0
        dof = int(mask.sum()) - 1
        if dof <= 0:
            continue
        expected = n * p[mask]
        ratios.append(math.fsum((X[d, mask] - expected) ** 2 / expected) / dof)
    return math.fsum(ratios) / len(ratios) if ratios else 0.0


def top_words(state: TopicModelState, m: int = 10, mode: str = PROBABILITY, w: float = 0.7) -> list[list]:
    """Ranked term ids per topic (term strings when the state carries them)."""
    phi = state.phi()
    if mode == PROBABILITY:
        scores = phi
    elif mode == FREX:
        scores = frex_scores(phi, w)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    m = min(m, state.n_terms)
    out = []
    for k in range(state.K):
        ids = _ranked(scores[k], m).tolist()
        out.append([state.terms[i] for i in ids] if state.terms else ids)
    return out


def heldout_split(n_docs: int, frac: float = 0.1, seed: int = 0) -> tuple[list, list]:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_docs)
    n_held = max(1, int(round(frac * n_docs)))
    if n_held >= n_docs:
        raise ValueError("held-out split leaves no training documents")
    return sorted(perm[n_held:].tolist()), sorted(perm[:n_held].tolist())


def searchk(dtm: DocTermCounts, K_range: Iterable[int] = range(2, 11), seed: int = 0, iters: int = 500,
            heldout_frac: float = 0.1, top_m: int = 10, alpha: Optional[float] = None, beta: float = 0.01,
            backend: Optional[str] = None, terms=None) -> list[KDiagnostics]:
    """Fit every K on the same 90/10 document split and compute diagnostics."""
    Ks = list(K_range)
    train_idx, held_idx = heldout_split(len(dtm), heldout_frac, seed)
    for K in Ks:
        if not 2 <= K <= len(dtm):
            raise ValueError(f"K={K} outside [2, {len(dtm)}]")
    train = dtm.subset(train_idx)
    held = dtm.subset(held_idx)
    out = []
    for K in Ks:
        state = gibbs_fit(train, K, alpha=alpha, beta=beta, iters=iters, seed=seed, backend=backend, terms=terms)
        out.append(KDiagnostics(
            K=K,
            heldout_loglik=heldout_likelihood(state, held, seed=seed, backend=backend),
            residual_dispersion=residual_dispersion(state, train),
            mean_coherence=float(coherence(state, top_m).mean()),
            mean_exclusivity=float(exclusivity(state, top_m).mean()),
        ))
    return out


def _minmax(values: Sequence[float]) -> list:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0 for _ in values]
    return [(v - lo) / (hi - lo) for v in values]


def suggest_k(diags: Sequence[KDiagnostics], tolerance: float = 0.05) -> int:
    """K maximizing normalized coherence + exclusivity among Ks whose held-out
    likelihood is within `tolerance` (relative) of the best."""
    best = max(d.heldout_loglik for d in diags)
    floor = best - tolerance * abs(best)
    coh = _minmax([d.mean_coherence for d in diags])
    exc = _minmax([d.mean_exclusivity for d in diags])
    candidates = [(coh[i] + exc[i], -d.K, d.K) for i, d in enumerate(diags) if d.heldout_loglik >= floor]
    return max(candidates)[2]


DIAG_COLUMNS = tuple(f.name for f in fields(KDiagnostics))


def write_diagnostics_csv(diags: Sequence[KDiagnostics], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAG_COLUMNS)
        for d in diags:
            row = asdict(d)
            w.writerow([row[c] if c == "K" else repr(float(row[c])) for c in DIAG_COLUMNS])


def read_diagnostics_csv(path) -> list[KDiagnostics]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [KDiagnostics(int(r["K"]), float(r["heldout_loglik"]), float(r["residual_dispersion"]),
                             float(r["mean_coherence"]), float(r["mean_exclusivity"]))
                for r in csv.DictReader(fh)]
