"""Time the Gibbs sweep on both backends and check they agree.

    python benchmarks/bench_gibbs.py [--docs 200] [--k 2 5 10] [--iters 100]
"""
import argparse
import time

import numpy as np

from hopefear.synthetic import two_topic_corpus
from hopefear.topics import HAVE_NUMBA, NUMBA, NUMPY, build_dtm, gibbs_fit


def timed(dtm, K, iters, backend):
    t0 = time.perf_counter()
    state = gibbs_fit(dtm, K, iters=iters, seed=0, backend=backend)
    return time.perf_counter() - t0, state


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--docs", type=int, default=200)
    p.add_argument("--doc-len", type=int, default=50)
    p.add_argument("--k", type=int, nargs="+", default=[2, 5, 10])
    p.add_argument("--iters", type=int, default=100)
    args = p.parse_args(argv)

    docs, _, _ = two_topic_corpus(n_docs=args.docs, doc_len=args.doc_len)
    _, dtm = build_dtm(docs, min_doc_freq=1, stopwords=frozenset())
    n_tokens = sum(len(t) for t in dtm.tokens)
    print(f"{len(dtm)} docs, {n_tokens} tokens, {args.iters} sweeps")
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; timing the fallback only")
    else:
        gibbs_fit(dtm, 2, iters=1, backend=NUMBA)  # compile outside the timing

    print(f"{'K':>3} {'numpy s':>9} {'numba s':>9} {'speedup':>8}  same z")
    for K in args.k:
        t_np, s_np = timed(dtm, K, args.iters, NUMPY)
        if HAVE_NUMBA:
            t_nb, s_nb = timed(dtm, K, args.iters, NUMBA)
            same = np.array_equal(s_np.z, s_nb.z) and np.array_equal(s_np.nkw, s_nb.nkw)
            print(f"{K:>3} {t_np:>9.3f} {t_nb:>9.3f} {t_np / t_nb:>7.1f}x  {same}")
            if not same:
                raise SystemExit("backends disagree")
        else:
            print(f"{K:>3} {t_np:>9.3f} {'-':>9} {'-':>8}  -")


if __name__ == "__main__":
    main()
