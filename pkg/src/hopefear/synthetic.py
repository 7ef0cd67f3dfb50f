"""Synthetic corpora with known topic structure."""
from __future__ import annotations

import numpy as np


def two_topic_corpus(n_docs: int = 200, doc_len: int = 50, vocab_per_topic: int = 20,
                     concentration: float = 0.5, seed: int = 0):
    """Documents mixing two topics with disjoint vocabularies.

    Returns (docs as (id, text) pairs, true theta, vocabulary blocks).
    Terms are 'aaN' for topic 0 and 'bbN' for topic 1.
    """
    rng = np.random.default_rng(seed)
    blocks = [[f"aa{i}" for i in range(vocab_per_topic)], [f"bb{i}" for i in range(vocab_per_topic)]]
    word_probs = [rng.dirichlet(np.ones(vocab_per_topic)) for _ in blocks]
    theta = rng.dirichlet([concentration, concentration], size=n_docs)
    docs = []
    for d in range(n_docs):
        topics = rng.choice(2, size=doc_len, p=theta[d])
        words = [blocks[k][rng.choice(vocab_per_topic, p=word_probs[k])] for k in topics]
        docs.append((f"d{d:04d}", " ".join(words)))
    return docs, theta, blocks


def purity(phi: np.ndarray, terms, blocks) -> float:
    """Mean over fitted topics of the largest share of probability mass that
    falls inside one true vocabulary block."""
    index = {t: i for i, t in enumerate(terms)}
    shares = []
    for k in range(phi.shape[0]):
        mass = [phi[k, [index[t] for t in block if t in index]].sum() for block in blocks]
        shares.append(max(mass) / phi[k].sum())
    return float(np.mean(shares))
