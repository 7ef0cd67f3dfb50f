from ._kernels import DEFAULT_BACKEND, HAVE_NUMBA, NUMBA, NUMPY
from .diagnostics import (
    FREX,
    PROBABILITY,
    KDiagnostics,
    coherence,
    exclusivity,
    frex_scores,
    heldout_likelihood,
    residual_dispersion,
    searchk,
    suggest_k,
    top_words,
)
from .dtm import DocTermCounts, EmptyCorpusError, Vocabulary, build_dtm, default_stopwords
from .effects import estimate_effect, estimate_effect_state, topic_correlation, wordcloud_export
from .model import CountInvariantError, TopicModelState, fold_in, gibbs_fit
