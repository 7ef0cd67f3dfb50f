"""Command-line entry point: ``hopefear <command> [options]``.

Exit codes: 0 success, 1 runtime or validation failure (one ``hopefear:
error: <Kind>: message`` line on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import date
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (
    aggregate_daily, daily_column, deviation_from_mean, join_market, keyword_subcorpus, moving_average, ols_fit,
    read_daily_csv, read_events_csv, read_regression_json, write_daily_csv, write_regression_json,
)
from .corpus import Corpus
from .fixtures import data_path
from .lexicon import derive_hope, export_wordlist, load_polarity_lexicon, load_wordlist, parse_nrc, select_fear
from .report import emit_report, file_digest
from .scoring import EQUATION, NORMALIZATION_MODES, read_scored_csv, score_corpus, write_scored_csv

log = logging.getLogger("hopefear")

COMMANDS = ("ingest", "lexicon", "score", "daily", "events", "subcorpus", "regress",
            "topics-fit", "topics-searchk", "topics-effect", "report")


class UsageError(Exception):
    pass


def _csv_list(raw: str) -> list:
    return [x.strip() for x in raw.split(",") if x.strip()]


def read_config(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment. Keys use the long
    flag names with dashes or underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _require(path, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"{what} not found: {p}")
    return p


def _write_rows(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _cell(v):
    if v is None:
        return ""
    return repr(float(v)) if isinstance(v, (float, np.floating)) else v


# -- commands -----------------------------------------------------------------

def cmd_ingest(args) -> int:
    from .ingest import ingest_market_csv, read_market_csv, write_market_csv

    out = Path(args.out)
    if args.market:
        if not args.ticker:
            raise UsageError("--market needs --ticker")
        rows, skipped = ingest_market_csv(_require(args.market, "market file"), args.ticker)
        keep = [r for r in read_market_csv(out) if r.ticker != args.ticker] if out.exists() else []
        write_market_csv(keep + rows, out)
        print(f"{args.ticker}: {len(rows)} rows, {skipped} skipped")
        return 0

    from .ingest import Credentials, IngestConfig, RedditClient

    subreddits = _csv_list(args.subreddits) if args.subreddits else None
    cfg = IngestConfig(Credentials.from_env(), posts_per_subreddit=int(args.limit), rate_limit=int(args.rate_limit))
    if subreddits:
        cfg.subreddits = subreddits
    corpus = Corpus.load(out) if out.exists() else Corpus()
    before = len(corpus)
    for s in RedditClient(cfg).crawl():
        corpus.upsert(s)
    corpus.resolve_ancestors()
    corpus.save(out)
    print(f"{len(corpus) - before} new submissions, {len(corpus)} total")
    return 0


def cmd_lexicon(args) -> int:
    lex = parse_nrc(_require(args.nrc, "NRC lexicon"))
    hope, fear = derive_hope(lex), select_fear(lex)
    export_wordlist(hope, args.hope_out)
    export_wordlist(fear, args.fear_out)
    print(f"hope: {len(hope)} words, fear: {len(fear)} words")
    return 0


def cmd_score(args) -> int:
    corpus = Corpus.load(_require(args.corpus, "corpus"))
    hope = load_wordlist(_require(args.hope, "hope lexicon"), "hope")
    fear = load_wordlist(_require(args.fear, "fear lexicon"), "fear")
    plex = load_polarity_lexicon(_require(args.polarity, "polarity lexicon") if args.polarity
                                 else data_path("polarity_fixture.csv"))
    corpus.propagate_flair()
    for rule in args.flair_filter or ():
        sub, _, flair = rule.partition("=")
        if not flair:
            raise UsageError(f"--flair-filter expects SUBREDDIT=FLAIR, got {rule!r}")
        corpus = corpus.filter_by_flair(sub, flair)
    rows = score_corpus(corpus, (hope, fear), plex, float(args.gate), args.normalization)
    write_scored_csv(rows, args.out)
    print(f"scored {len(rows)} submissions")
    return 0


def cmd_daily(args) -> int:
    from .ingest import read_market_csv

    daily = aggregate_daily(read_scored_csv(_require(args.scored, "scored table")))
    for path in args.market or ():
        daily = join_market(daily, read_market_csv(_require(path, "market table")))
    write_daily_csv(daily, args.out)
    print(f"{len(daily)} days")
    return 0


def cmd_events(args) -> int:
    daily = read_daily_csv(_require(args.daily, "daily table"))
    events = read_events_csv(_require(args.events, "events file"))
    series = daily_column(daily, args.column)
    if not series:
        raise ValueError(f"column {args.column!r} has no values")
    by_day = {}
    for e in events:
        by_day.setdefault(e.day, []).append(e)
    rows = []
    for (day, value), (_, dev) in zip(series, deviation_from_mean(series)):
        evs = by_day.get(day, [])
        rows.append([day.isoformat(), repr(value), repr(dev), ";".join(str(e.index) for e in evs),
                     "; ".join(e.label for e in evs)])
    _write_rows(args.out, ["day", "value", "deviation", "event_index", "event_label"], rows)
    print(f"{len(rows)} days, {len(events)} events")
    return 0


def cmd_subcorpus(args) -> int:
    corpus = Corpus.load(_require(args.corpus, "corpus"))
    sub = keyword_subcorpus(corpus, _csv_list(args.include), _csv_list(args.exclude or ""))
    scored = [r for r in read_scored_csv(_require(args.scored, "scored table")) if r.id in sub]
    if not scored:
        _write_rows(args.out, ["day", "n_submissions", "mean_polarity", "ma7_polarity"], [])
        print("0 matching submissions")
        return 0
    daily = aggregate_daily(scored)
    pol = [r.mean_polarity for r in daily]
    ma = moving_average(pol, int(args.window))
    _write_rows(args.out, ["day", "n_submissions", "mean_polarity", "ma7_polarity"],
                [[r.day.isoformat(), r.n_submissions, repr(p), repr(m)] for r, p, m in zip(daily, pol, ma)])
    print(f"{len(scored)} matching submissions over {len(daily)} days")
    return 0


def cmd_regress(args) -> int:
    daily = read_daily_csv(_require(args.daily, "daily table"))
    regressors = _csv_list(args.regressors)
    cols = [args.target] + regressors
    lookups = [dict(daily_column(daily, c)) for c in cols]
    days = sorted(set.intersection(*(set(lk) for lk in lookups)))
    if not days:
        raise ValueError(f"no days with values for all of {', '.join(cols)}")
    y = [lookups[0][d] for d in days]
    X = [[lk[d] for d in days] for lk in lookups[1:]]
    res = ols_fit(y, X, names=["intercept"] + regressors)
    data = {"day": [d.isoformat() for d in days], args.target: y}
    data.update({name: x for name, x in zip(regressors, X)})
    write_regression_json(res, args.out, {"target": args.target, "regressors": regressors, "data": data})
    print(f"n={res.n} r2={res.r_squared:.4f} p={', '.join(f'{p:.4g}' for p in res.p_values)}")
    return 0


def _topic_docs(args):
    from .topics import build_dtm
    from .topics.dtm import load_stopwords

    corpus = Corpus.load(_require(args.corpus, "corpus"))
    ids = sorted(corpus.submissions)
    if getattr(args, "scored", None):
        keep = {r.id for r in read_scored_csv(_require(args.scored, "scored table"))}
        ids = [i for i in ids if i in keep]
    stop = load_stopwords(_require(args.stopwords, "stopword list")) if args.stopwords else None
    return build_dtm(((i, corpus[i].scored_text) for i in ids), int(args.min_doc_freq), stop)


def cmd_topics_fit(args) -> int:
    from .topics import coherence, exclusivity, gibbs_fit, top_words, topic_correlation, wordcloud_export
    from .topics.diagnostics import FREX, PROBABILITY
    from .topics.effects import write_matrix_csv, write_wordclouds_json

    vocab, dtm = _topic_docs(args)
    alpha = float(args.alpha) if args.alpha else None
    state = gibbs_fit(dtm, int(args.k), alpha=alpha, beta=float(args.beta), iters=int(args.iters),
                      seed=int(args.seed), terms=vocab.terms)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    state.save(out / "state.json")
    theta = state.theta()
    _write_rows(out / "theta.csv", ["doc_id"] + [f"topic_{k + 1}" for k in range(state.K)],
                [[doc] + [repr(float(v)) for v in row] for doc, row in zip(state.doc_ids, theta)])
    prob, frex = top_words(state, 10, PROBABILITY), top_words(state, 10, FREX)
    _write_rows(out / "top_words.csv", ["topic", "mode", "words"],
                [[k + 1, mode, " ".join(ws[k])] for mode, ws in (("probability", prob), ("frex", frex))
                 for k in range(state.K)])
    coh, exc = coherence(state), exclusivity(state)
    _write_rows(out / "topic_quality.csv", ["topic", "coherence", "exclusivity", "proportion"],
                [[k + 1, repr(float(coh[k])), repr(float(exc[k])), repr(float(theta[:, k].mean()))]
                 for k in range(state.K)])
    write_matrix_csv(topic_correlation(theta), out / "topic_correlation.csv")
    write_wordclouds_json(wordcloud_export(state, int(args.cloud_terms)), out / "wordclouds.json")
    print(f"K={state.K}: {len(dtm)} documents, {len(vocab)} terms, {int(args.iters)} sweeps")
    return 0


def cmd_topics_searchk(args) -> int:
    from .topics import searchk, suggest_k
    from .topics.diagnostics import write_diagnostics_csv

    kmin, kmax = int(args.kmin), int(args.kmax)
    if kmin < 2 or kmax < kmin:
        raise UsageError("need 2 <= kmin <= kmax")
    vocab, dtm = _topic_docs(args)
    alpha = float(args.alpha) if args.alpha else None
    diags = searchk(dtm, range(kmin, kmax + 1), seed=int(args.seed), iters=int(args.iters), alpha=alpha,
                    beta=float(args.beta), terms=vocab.terms)
    write_diagnostics_csv(diags, args.out)
    print(f"suggested K: {suggest_k(diags)}")
    return 0


def cmd_topics_effect(args) -> int:
    from .topics import TopicModelState, estimate_effect_state
    from .topics.effects import write_effects_csv

    state = TopicModelState.load(_require(args.state, "model state"))
    cov = {r.id: (r.hope_score, r.fear_score) for r in read_scored_csv(_require(args.scored, "scored table"))}
    results, used = estimate_effect_state(state, cov)
    write_effects_csv(results, args.out)
    print(f"{len(results)} topics regressed on {len(used)} documents")
    return 0


def cmd_report(args) -> int:
    inputs = {}

    def track(path, what):
        p = _require(path, what)
        inputs[p.name] = file_digest(p)[:16]
        return p

    daily = read_daily_csv(track(args.daily, "daily table"))
    events = read_events_csv(track(args.events, "events file")) if args.events else []
    regressions = [read_regression_json(track(p, "regression report")) for p in args.regression or ()]
    theta = None
    if args.topics:
        theta_path = track(Path(args.topics) / "theta.csv", "topic proportions")
        with open(theta_path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        theta = np.asarray([[float(v) for v in r[1:]] for r in rows]) if rows else None
    groups = {}
    for spec in args.polarity or ():
        name, _, path = spec.partition("=")
        if not path:
            raise UsageError(f"--polarity expects NAME=PATH, got {spec!r}")
        with open(track(path, "polarity table"), encoding="utf-8", newline="") as fh:
            recs = list(csv.DictReader(fh))
        groups[name] = ([date.fromisoformat(r["day"]) for r in recs], [float(r["mean_polarity"]) for r in recs])
    written = emit_report(daily, events, regressions, args.outdir, theta=theta, polarity_groups=groups,
                          inputs=inputs, emotion_column=args.column)
    out = Path(args.outdir)
    dev = deviation_from_mean(daily_column(daily, args.column)) if daily_column(daily, args.column) else []
    _write_rows(out / "deviation.csv", ["day", "deviation"], [[d.isoformat(), repr(v)] for d, v in dev])
    write_daily_csv(daily, out / "daily.csv")
    manifest = {"version": __version__, "inputs": dict(sorted(inputs.items())),
                "artifacts": sorted(p.name for p in written) + ["daily.csv", "deviation.csv"]}
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(written)} charts to {out}")
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopefear", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hopefear {__version__}")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    s = sub.add_parser("ingest", help="crawl hot posts and comments, or normalize a market CSV")
    s.add_argument("--subreddits", help="comma-separated list (default: the six conflict subreddits)")
    s.add_argument("--limit", default=50, type=int, help="posts per subreddit")
    s.add_argument("--rate-limit", default=60, type=int, help="max requests per minute")
    s.add_argument("--market", help="market CSV with date,close columns")
    s.add_argument("--ticker", help="ticker name for --market")
    s.add_argument("--out", required=True, help="corpus .jsonl (forum) or market table .csv (merged if present)")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("lexicon", help="derive hope and fear word lists from an NRC file")
    s.add_argument("--nrc", required=True)
    s.add_argument("--hope-out", required=True)
    s.add_argument("--fear-out", required=True)
    s.set_defaults(func=cmd_lexicon)

    s = sub.add_parser("score", help="score every submission")
    s.add_argument("--corpus", required=True)
    s.add_argument("--hope", required=True)
    s.add_argument("--fear", required=True)
    s.add_argument("--polarity", help="word,polarity,subjectivity CSV (default: bundled demo lexicon)")
    s.add_argument("--gate", default=0.5, type=float, help="minimum subjectivity for emotion scores")
    s.add_argument("--normalization", default=EQUATION, choices=NORMALIZATION_MODES)
    s.add_argument("--flair-filter", action="append", metavar="SUBREDDIT=FLAIR")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("daily", help="aggregate scores per UTC day, optionally joining market tables")
    s.add_argument("--scored", required=True)
    s.add_argument("--market", action="append", help="normalized ticker,date,close table")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_daily)

    s = sub.add_parser("events", help="deviation from the overall mean with event annotations")
    s.add_argument("--daily", required=True)
    s.add_argument("--events", required=True)
    s.add_argument("--column", default="mean_hope")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_events)

    s = sub.add_parser("subcorpus", help="daily polarity of a keyword sub-corpus")
    s.add_argument("--corpus", required=True)
    s.add_argument("--scored", required=True)
    s.add_argument("--include", required=True, help="comma-separated terms")
    s.add_argument("--exclude", default="")
    s.add_argument("--window", default=7, type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_subcorpus)

    s = sub.add_parser("regress", help="OLS of one daily column on others")
    s.add_argument("--daily", required=True)
    s.add_argument("--target", required=True, help="dependent column, e.g. GAS or mean_hope")
    s.add_argument("--regressors", required=True, help="comma-separated columns")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_regress)

    def topic_inputs(s):
        s.add_argument("--corpus", required=True)
        s.add_argument("--scored", help="restrict documents to ids in this scored table")
        s.add_argument("--min-doc-freq", default=5, type=int)
        s.add_argument("--stopwords")
        s.add_argument("--seed", default=0, type=int)
        s.add_argument("--iters", default=1000, type=int)
        s.add_argument("--alpha", help="symmetric doc-topic prior (default 50/K)")
        s.add_argument("--beta", default=0.01, type=float)

    s = sub.add_parser("topics-fit", help="fit LDA by collapsed Gibbs sampling")
    topic_inputs(s)
    s.add_argument("--k", default=7, type=int)
    s.add_argument("--cloud-terms", default=50, type=int)
    s.add_argument("--outdir", required=True)
    s.set_defaults(func=cmd_topics_fit)

    s = sub.add_parser("topics-searchk", help="diagnostics over a range of K")
    topic_inputs(s)
    s.add_argument("--kmin", default=2, type=int)
    s.add_argument("--kmax", default=10, type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_topics_searchk)

    s = sub.add_parser("topics-effect", help="regress topic proportions on hope and fear")
    s.add_argument("--state", required=True)
    s.add_argument("--scored", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_topics_effect)

    s = sub.add_parser("report", help="emit SVG charts and tables")
    s.add_argument("--daily", required=True)
    s.add_argument("--events")
    s.add_argument("--regression", action="append")
    s.add_argument("--topics", help="topics-fit output directory")
    s.add_argument("--polarity", action="append", metavar="NAME=PATH", help="subcorpus output")
    s.add_argument("--column", default="mean_hope")
    s.add_argument("--outdir", required=True)
    s.set_defaults(func=cmd_report)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in values.items() if k in dests})
            for a in sp._actions:
                if a.dest in values:
                    a.required = False


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"hopefear: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hopefear: error: UsageError: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - one parsable line per failure
        if args.verbose:
            log.exception("command failed")
        print(f"hopefear: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
