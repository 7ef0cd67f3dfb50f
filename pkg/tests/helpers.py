"""Shared builders for tests; independent of the package's own logic."""
from __future__ import annotations

import random

from hopefear.corpus import COMMENT, POST, Submission

T0 = 1_652_140_800.0  # 2022-05-10 00:00 UTC


def post(pid, flair=None, subreddit="ukraine", upvotes=1, title="title", text="", fetched_at=T0 + 86400,
         created_at=T0):
    return Submission(id=pid, kind=POST, title=title, text=text, author="a", upvotes=upvotes,
                      created_at=created_at, fetched_at=fetched_at, flair=flair, subreddit=subreddit)


def comment(cid, parent, subreddit="ukraine", upvotes=1, text="", fetched_at=T0 + 86400, created_at=T0 + 60):
    return Submission(id=cid, kind=COMMENT, parent_id=parent, text=text, author="b", upvotes=upvotes,
                      created_at=created_at, fetched_at=fetched_at, subreddit=subreddit)


def random_forest(n: int, max_depth: int, seed: int, n_posts: int | None = None):
    """Random thread forest; returns (submissions, true root per id, depth per id)."""
    rng = random.Random(seed)
    n_posts = n_posts or max(1, n // 20)
    subs, root, depth = [], {}, {}
    for i in range(n_posts):
        pid = f"P{i}"
        subs.append(post(pid, flair=rng.choice(["Ukraine/Russia", "Science", None]),
                         subreddit=rng.choice(["worldnews", "ukraine"])))
        root[pid], depth[pid] = pid, 0
    ids = [s.id for s in subs]
    for j in range(n - n_posts):
        candidates = [i for i in ids if depth[i] < max_depth]
        parent = rng.choice(candidates)
        cid = f"C{j}"
        subs.append(comment(cid, parent, subreddit=subs[int(root[parent][1:])].subreddit))
        root[cid], depth[cid] = root[parent], depth[parent] + 1
        ids.append(cid)
    rng.shuffle(subs)
    return subs, root, depth


def run_pipeline(workdir, k=3, iters=50):
    """score -> daily -> events -> regress -> topics-fit -> report on the
    bundled fixtures; returns the output directory of each stage."""
    from pathlib import Path

    from hopefear.cli import main
    from hopefear.fixtures import data_path

    w = Path(workdir)
    w.mkdir(parents=True, exist_ok=True)
    steps = [
        ["lexicon", "--nrc", str(data_path("nrc_fixture.txt")), "--hope-out", str(w / "hope.txt"),
         "--fear-out", str(w / "fear.txt")],
        ["ingest", "--market", str(data_path("market_gas.csv")), "--ticker", "GAS", "--out", str(w / "market.csv")],
        ["ingest", "--market", str(data_path("market_oil.csv")), "--ticker", "OIL", "--out", str(w / "market.csv")],
        ["score", "--corpus", str(data_path("demo_corpus.jsonl")), "--hope", str(w / "hope.txt"),
         "--fear", str(w / "fear.txt"), "--flair-filter", "worldnews=Ukraine/Russia", "--out", str(w / "scored.csv")],
        ["daily", "--scored", str(w / "scored.csv"), "--market", str(w / "market.csv"), "--out", str(w / "daily.csv")],
        ["events", "--daily", str(w / "daily.csv"), "--events", str(data_path("events_2022.csv")),
         "--out", str(w / "events.csv")],
        ["regress", "--daily", str(w / "daily.csv"), "--target", "GAS", "--regressors", "mean_hope",
         "--out", str(w / "regression.json")],
        ["topics-fit", "--corpus", str(data_path("demo_corpus.jsonl")), "--scored", str(w / "scored.csv"),
         "--k", str(k), "--iters", str(iters), "--seed", "7", "--outdir", str(w / "topics")],
        ["report", "--daily", str(w / "daily.csv"), "--events", str(data_path("events_2022.csv")),
         "--regression", str(w / "regression.json"), "--topics", str(w / "topics"), "--outdir", str(w / "report")],
    ]
    for argv in steps:
        code = main(argv)
        if code != 0:
            raise RuntimeError(f"{argv[0]} exited {code}")
    return w


def tree_bytes(root):
    """{relative path: bytes} for every file under root."""
    from pathlib import Path

    root = Path(root)
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}
