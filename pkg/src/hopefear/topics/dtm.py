from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional

import numpy as np

from ..scoring import tokenize

log = logging.getLogger(__name__)


class EmptyCorpusError(ValueError):
    pass


def default_stopwords() -> frozenset:
    text = resources.files("hopefear.data").joinpath("stopwords_en.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def load_stopwords(path) -> frozenset:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip() and not w.startswith("#"))


@dataclass
class Vocabulary:
    terms: list
    term_id: dict
    doc_freq: np.ndarray

    def __len__(self) -> int:
        return len(self.terms)


@dataclass
class DocTermCounts:
    """Documents as term-id sequences in original token order."""

    doc_ids: list
    tokens: list  # list of int arrays
    n_terms: int
    n_dropped: int = 0

    def __len__(self) -> int:
        return len(self.doc_ids)

    def counts(self) -> np.ndarray:
        """Dense doc x term count matrix."""
        X = np.zeros((len(self.tokens), self.n_terms), dtype=np.int64)
        for d, toks in enumerate(self.tokens):
            np.add.at(X[d], toks, 1)
        return X

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """(word ids, doc indices) for every token instance."""
        if not self.tokens:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        words = np.concatenate(self.tokens).astype(np.int64)
        docs = np.repeat(np.arange(len(self.tokens), dtype=np.int64), [len(t) for t in self.tokens])
        return words, docs

    def subset(self, idx) -> "DocTermCounts":
        idx = list(idx)
        return DocTermCounts([self.doc_ids[i] for i in idx], [self.tokens[i] for i in idx], self.n_terms)


def build_dtm(docs: Iterable[tuple[str, str]], min_doc_freq: int = 5,
              stopwords: Optional[frozenset] = None) -> tuple[Vocabulary, DocTermCounts]:
    """Tokenize (id, text) pairs, drop stopwords and terms in fewer than
    `min_doc_freq` documents, then drop documents left empty."""
    stop = default_stopwords() if stopwords is None else stopwords
    ids, token_lists = [], []
    df = Counter()
    for doc_id, text in docs:
        toks = [t for t in tokenize(text) if t not in stop]
        ids.append(doc_id)
        token_lists.append(toks)
        df.update(set(toks))

    terms = sorted(t for t, n in df.items() if n >= min_doc_freq)
    term_id = {t: i for i, t in enumerate(terms)}
    out_ids, out_tokens = [], []
    for doc_id, toks in zip(ids, token_lists):
        kept = [term_id[t] for t in toks if t in term_id]
        if kept:
            out_ids.append(doc_id)
            out_tokens.append(np.asarray(kept, dtype=np.int64))
    dropped = len(ids) - len(out_ids)
    if not out_ids:
        raise EmptyCorpusError("every document is empty after stopword and frequency pruning")
    if dropped:
        log.info("dropped %d documents left empty after pruning", dropped)
    vocab = Vocabulary(terms, term_id, np.asarray([df[t] for t in terms], dtype=np.int64))
    return vocab, DocTermCounts(out_ids, out_tokens, len(terms), dropped)
