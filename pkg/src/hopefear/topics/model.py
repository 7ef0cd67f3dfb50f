"""Collapsed Gibbs LDA."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .dtm import DocTermCounts


class CountInvariantError(AssertionError):
    pass


@dataclass
class TopicModelState:
    K: int
    alpha: float
    beta: float
    words: np.ndarray  # term id per token instance
    docs: np.ndarray  # document index per token instance
    z: np.ndarray
    ndk: np.ndarray
    nkw: np.ndarray
    nk: np.ndarray
    rng_seed: int
    iters_done: int = 0
    doc_ids: Optional[list] = None
    terms: Optional[list] = None

    @property
    def n_docs(self) -> int:
        return self.ndk.shape[0]

    @property
    def n_terms(self) -> int:
        return self.nkw.shape[1]

    def theta(self) -> np.ndarray:
        n_d = self.ndk.sum(axis=1, keepdims=True)
        return (self.ndk + self.alpha) / (n_d + self.K * self.alpha)

    def phi(self) -> np.ndarray:
        return (self.nkw + self.beta) / (self.nk[:, None] + self.n_terms * self.beta)

    def doc_lengths(self) -> np.ndarray:
        return self.ndk.sum(axis=1)

    def check_counts(self) -> None:
        """Recount from z and compare with the running tables."""
        ndk = np.zeros_like(self.ndk)
        nkw = np.zeros_like(self.nkw)
        np.add.at(ndk, (self.docs, self.z), 1)
        np.add.at(nkw, (self.z, self.words), 1)
        if not np.array_equal(ndk, self.ndk):
            raise CountInvariantError("doc-topic counts disagree with assignments")
        if not np.array_equal(nkw, self.nkw):
            raise CountInvariantError("topic-term counts disagree with assignments")
        if not np.array_equal(self.nkw.sum(axis=1), self.nk):
            raise CountInvariantError("topic totals disagree with topic-term counts")
        if (self.ndk < 0).any() or (self.nkw < 0).any() or (self.nk < 0).any():
            raise CountInvariantError("negative count")

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "alpha": self.alpha,
            "beta": self.beta,
            "rng_seed": self.rng_seed,
            "iters_done": self.iters_done,
            "n_docs": self.n_docs,
            "n_terms": self.n_terms,
            "doc_ids": self.doc_ids,
            "terms": self.terms,
            "words": self.words.tolist(),
            "docs": self.docs.tolist(),
            "z": self.z.tolist(),
            "ndk": self.ndk.tolist(),
            "nkw": self.nkw.tolist(),
            "nk": self.nk.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TopicModelState":
        K, D, V = data["K"], data["n_docs"], data["n_terms"]
        state = cls(
            K=K, alpha=float(data["alpha"]), beta=float(data["beta"]),
            words=np.asarray(data["words"], dtype=np.int64), docs=np.asarray(data["docs"], dtype=np.int64),
            z=np.asarray(data["z"], dtype=np.int64),
            ndk=np.asarray(data["ndk"], dtype=np.int64).reshape(D, K),
            nkw=np.asarray(data["nkw"], dtype=np.int64).reshape(K, V),
            nk=np.asarray(data["nk"], dtype=np.int64),
            rng_seed=int(data["rng_seed"]), iters_done=int(data.get("iters_done", 0)),
            doc_ids=data.get("doc_ids"), terms=data.get("terms"),
        )
        state.check_counts()
        return state

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_json(), fh, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "TopicModelState":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def init_state(dtm: DocTermCounts, K: int, alpha: float, beta: float, rng: np.random.Generator,
               seed: int, terms=None) -> TopicModelState:
    words, docs = dtm.flat()
    z = rng.integers(0, K, size=len(words)).astype(np.int64)
    ndk = np.zeros((len(dtm), K), dtype=np.int64)
    nkw = np.zeros((K, dtm.n_terms), dtype=np.int64)
    np.add.at(ndk, (docs, z), 1)
    np.add.at(nkw, (z, words), 1)
    return TopicModelState(K, alpha, beta, words, docs, z, ndk, nkw, nkw.sum(axis=1), seed,
                           doc_ids=list(dtm.doc_ids), terms=terms)


def gibbs_fit(dtm: DocTermCounts, K: int, alpha: Optional[float] = None, beta: float = 0.01,
              iters: int = 1000, seed: int = 0, backend: Optional[str] = None,
              on_sweep: Optional[Callable[[TopicModelState, int], None]] = None,
              terms=None) -> TopicModelState:
    """Fit LDA by collapsed Gibbs sampling.

    Token order is fixed; each sweep draws one uniform per token from a
    numpy Generator seeded with `seed`, so results are identical across
    backends. `on_sweep(state, it)` runs after every sweep.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    if iters < 0:
        raise ValueError(f"iters must be >= 0, got {iters}")
    if K > len(dtm):
        warnings.warn(f"K={K} exceeds the number of documents ({len(dtm)})", RuntimeWarning, stacklevel=2)
    alpha = 50.0 / K if alpha is None else float(alpha)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    rng = np.random.default_rng(seed)
    state = init_state(dtm, K, alpha, float(beta), rng, seed, terms)
    sweep = _kernels.get_sweep(backend)
    n = len(state.words)
    for it in range(iters):
        u = rng.random(n)
        sweep(state.words, state.docs, state.z, state.ndk, state.nkw, state.nk, state.alpha, state.beta, u)
        state.iters_done += 1
        if on_sweep is not None:
            on_sweep(state, it)
    return state


def fold_in(state: TopicModelState, dtm: DocTermCounts, iters: int = 100, burn_in: int = 20, seed: int = 0,
            backend: Optional[str] = None) -> np.ndarray:
    """Estimate theta for new documents with topic-term distributions fixed,
    averaged over the sweeps after `burn_in`."""
    phi = state.phi()
    K = state.K
    rng = np.random.default_rng(seed)
    words, docs = dtm.flat()
    z = rng.integers(0, K, size=len(words)).astype(np.int64)
    ndk = np.zeros((len(dtm), K), dtype=np.int64)
    np.add.at(ndk, (docs, z), 1)
    n_d = ndk.sum(axis=1, keepdims=True)
    foldin = _kernels.get_foldin(backend)
    acc = np.zeros((len(dtm), K))
    kept = 0
    for it in range(iters):
        u = rng.random(len(words))
        foldin(words, docs, z, ndk, phi, state.alpha, u)
        if it >= burn_in:
            acc += (ndk + state.alpha) / (n_d + K * state.alpha)
            kept += 1
    if kept == 0:
        return (ndk + state.alpha) / (n_d + K * state.alpha)
    return acc / kept
