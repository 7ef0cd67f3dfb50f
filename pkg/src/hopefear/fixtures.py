"""Synthetic demo data bundled under hopefear/data.

The NRC-format lexicon here is a made-up 50-word stand-in (the real NRC
lexicon is licensed separately and supplied by path). The corpus, market
and polarity files are generated deterministically so the end-to-end
pipeline can run offline. Regenerate with ``python -m hopefear.fixtures``.
"""
from __future__ import annotations

import csv
from datetime import date, datetime, time, timedelta, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import COMMENT, POST, Corpus, Submission
from .lexicon import LABELS

NRC_FIXTURE = {
    # anticipation + positive/joy: hope words
    "hope": {"anticipation", "joy", "positive", "surprise", "trust"},
    "victory": {"anticipation", "joy", "positive", "trust"},
    "win": {"anticipation", "joy", "positive", "surprise", "trust"},
    "peace": {"anticipation", "joy", "positive", "trust"},
    "promise": {"anticipation", "joy", "positive", "trust"},
    "progress": {"anticipation", "positive"},
    "rescue": {"anticipation", "positive", "trust"},
    "liberation": {"anticipation", "joy", "positive"},
    "celebrate": {"anticipation", "joy", "positive"},
    "freedom": {"anticipation", "joy", "positive", "trust"},
    "optimism": {"anticipation", "joy", "positive"},
    "reward": {"anticipation", "joy", "positive", "surprise", "trust"},
    "aid": {"anticipation", "positive"},
    # anticipation without positive/joy
    "tomorrow": {"anticipation"},
    "await": {"anticipation"},
    "expect": {"anticipation"},
    "threat": {"anger", "anticipation", "fear", "negative"},
    "escape": {"anticipation", "fear", "negative"},
    "mobilization": {"anticipation", "fear"},
    # joy/positive without anticipation
    "song": {"joy", "positive"},
    "brave": {"positive", "trust"},
    "support": {"positive", "trust"},
    "music": {"joy", "positive", "sadness", "surprise"},
    "hero": {"joy", "positive", "trust"},
    # fear words
    "war": {"fear", "negative", "anger", "sadness"},
    "bomb": {"anger", "fear", "negative", "sadness", "surprise"},
    "missile": {"fear"},
    "death": {"anger", "disgust", "fear", "negative", "sadness", "surprise"},
    "kill": {"fear", "negative", "sadness"},
    "invasion": {"anger", "negative", "fear"},
    "destroy": {"anger", "fear", "negative"},
    "siege": {"anger", "fear", "negative"},
    "shelling": {"fear", "negative"},
    "terror": {"fear", "negative"},
    "panic": {"fear", "negative"},
    "enemy": {"anger", "disgust", "fear", "negative"},
    "nuclear": {"fear", "negative"},
    "army": {"fear", "trust"},
    # other labels only
    "loss": {"anger", "negative", "sadness"},
    "disaster": {"anger", "disgust", "negative", "sadness", "surprise"},
    "corrupt": {"disgust", "negative"},
    "lie": {"anger", "disgust", "negative", "sadness"},
    "government": {"trust"},
    "sanctions": {"negative"},
    # no flagged label
    "city": set(),
    "river": set(),
    "bridge": set(),
    "news": set(),
    "video": set(),
    "report": set(),
}

POLARITY_FIXTURE = [
    ("good", 0.7, 0.6), ("great", 0.8, 0.75), ("bad", -0.7, 0.667), ("terrible", -1.0, 1.0),
    ("awful", -1.0, 1.0), ("happy", 0.8, 1.0), ("sad", -0.5, 1.0), ("brave", 0.8, 0.9),
    ("amazing", 0.6, 0.9), ("horrible", -1.0, 1.0), ("strong", 0.433, 0.733), ("weak", -0.375, 0.625),
    ("wonderful", 1.0, 1.0), ("stupid", -0.8, 1.0), ("wrong", -0.5, 0.9), ("love", 0.5, 0.6),
    ("hate", -0.8, 0.9), ("beautiful", 0.85, 1.0), ("glad", 0.5, 1.0), ("worst", -1.0, 1.0),
    ("best", 1.0, 0.3), ("free", 0.4, 0.8), ("proud", 0.8, 1.0), ("sure", 0.5, 0.889),
    ("hopeful", 0.6, 0.9), ("scared", -0.6, 1.0), ("afraid", -0.6, 0.9), ("crazy", -0.6, 0.9),
    ("insane", -0.7, 1.0), ("evil", -1.0, 1.0), ("victory", 0.6, 0.7), ("win", 0.8, 0.4),
    ("peace", 0.3, 0.5), ("war", -0.2, 0.4), ("death", -0.4, 0.6), ("dead", -0.2, 0.4),
    ("heroic", 0.9, 0.9), ("lucky", 0.3, 1.0), ("sorry", -0.5, 1.0), ("real", 0.2, 0.3),
    ("important", 0.4, 1.0), ("clear", 0.1, 0.383), ("serious", -0.333, 0.667), ("huge", 0.4, 0.9),
    ("fine", 0.417, 0.5), ("nice", 0.6, 1.0), ("poor", -0.4, 0.6), ("brutal", -0.875, 1.0),
    ("safe", 0.5, 0.5), ("dangerous", -0.6, 0.9), ("fake", -0.5, 1.0), ("true", 0.35, 0.65),
]

SUBREDDITS = ("ukraine", "worldnews", "ukraina", "UkrainianConflict", "UkraineWarVideoReport", "UkraineWarReports")

THEMES = {
    "front": "troops artillery front city shelling missile tank river bridge army soldiers brigade village "
             "attack defense drone counteroffensive kharkiv donbas severodonetsk mariupol azovstal".split(),
    "politics": "sanctions nato government putin zelenskyy talks minister president kremlin summit leaders "
                "europe germany china support weapons deal parliament diplomacy".split(),
    "economy": "gas price oil ruble market export grain wheat energy pipeline inflation bank economy "
               "supply shipping ports famine costs trade fuel".split(),
}
HOPE_WORDS = "hope victory win peace promise progress rescue liberation celebrate freedom aid".split()
FEAR_WORDS = "war bomb missile death kill invasion destroy siege shelling terror panic enemy nuclear".split()
POLAR_WORDS = [w for w, _, _ in POLARITY_FIXTURE]
FILLER = "the people will really think this is what we see now again today after before more some".split()
LEADER_PHRASES = ["zelenskyy", "zelensky", "zelens'kyj", "putin"]
RUSSIAN = "война мир новости сегодня город армия".split()

START = date(2022, 5, 9)
N_DAYS = 81


def _text(rng, theme: str, hope_rate: float, fear_rate: float, n: int) -> str:
    words = []
    for _ in range(n):
        r = rng.random()
        if r < hope_rate:
            words.append(rng.choice(HOPE_WORDS))
        elif r < hope_rate + fear_rate:
            words.append(rng.choice(FEAR_WORDS))
        elif r < hope_rate + fear_rate + 0.12:
            words.append(rng.choice(POLAR_WORDS))
        elif r < hope_rate + fear_rate + 0.35:
            words.append(rng.choice(FILLER))
        else:
            words.append(rng.choice(THEMES[theme]))
    if rng.random() < 0.1:
        words.insert(int(rng.integers(0, len(words) + 1)), str(rng.choice(LEADER_PHRASES)))
    if rng.random() < 0.1:
        words.insert(0, "not")
    text = " ".join(str(w) for w in words)
    return text[:1].upper() + text[1:] + "."


def make_demo_corpus(seed: int = 2022) -> Corpus:
    rng = np.random.default_rng(seed)
    subs = []
    themes = list(THEMES)
    n_post = 0
    for day_i in range(N_DAYS):
        day = START + timedelta(days=day_i)
        base = datetime.combine(day, time(6, 0), tzinfo=timezone.utc).timestamp()
        fetched = datetime.combine(day + timedelta(days=1), time(14, 0), tzinfo=timezone.utc).timestamp()
        # hope drifts down over the window, fear up a little
        hope_rate = 0.10 * (1.0 - 0.6 * day_i / N_DAYS)
        fear_rate = 0.05 + 0.04 * day_i / N_DAYS
        for _ in range(2):
            n_post += 1
            pid = f"p{n_post:04d}"
            sub = SUBREDDITS[int(rng.integers(len(SUBREDDITS)))]
            theme = themes[int(rng.integers(len(themes)))]
            flair = None
            if sub == "worldnews":
                flair = "Ukraine/Russia" if rng.random() < 0.8 else "Science"
            created = base + float(rng.integers(0, 14 * 3600))
            if rng.random() < 0.04:
                title, body = " ".join(str(w) for w in rng.choice(RUSSIAN, 5)), ""
            else:
                title = _text(rng, theme, hope_rate, fear_rate, int(rng.integers(6, 14)))
                body = _text(rng, theme, hope_rate, fear_rate, int(rng.integers(0, 30))) if rng.random() < 0.5 else ""
            subs.append(Submission(id=pid, kind=POST, title=title, text=body, author=f"user{int(rng.integers(500))}",
                                   upvotes=int(rng.integers(5, 3000)), created_at=created, fetched_at=fetched,
                                   flair=flair, subreddit=sub))
            parents = [pid]
            for c in range(int(rng.integers(0, 9))):
                cid = f"{pid}c{c:02d}"
                parent = parents[int(rng.integers(len(parents)))]
                r = rng.random()
                if r < 0.03:
                    text, author = "[deleted]", "[deleted]"
                elif r < 0.06:
                    text, author = "", f"user{int(rng.integers(500))}"
                else:
                    text = _text(rng, theme, hope_rate, fear_rate, int(rng.integers(8, 40)))
                    author = f"user{int(rng.integers(500))}"
                subs.append(Submission(id=cid, kind=COMMENT, parent_id=parent, text=text, author=author,
                                       upvotes=int(rng.integers(-8, 120)),
                                       created_at=created + float(rng.integers(60, 6 * 3600)),
                                       fetched_at=fetched, subreddit=sub))
                parents.append(cid)
    # one comment from a truncated thread
    subs.append(Submission(id="orph01", kind=COMMENT, parent_id="gone01", text="hope this bridge holds",
                           author="user1", upvotes=3, created_at=subs[10].created_at + 60,
                           fetched_at=subs[10].fetched_at, subreddit="ukraine"))
    return Corpus(subs).resolve_ancestors()


def make_market_rows(corpus_days: int = N_DAYS, seed: int = 7) -> dict:
    """Weekday closes for two synthetic tickers, GAS trending up and OIL noisy."""
    rng = np.random.default_rng(seed)
    out = {"GAS": [], "OIL": []}
    gas, oil = 6.0, 105.0
    for i in range(corpus_days):
        day = START + timedelta(days=i)
        gas = gas * (1 + 0.004 + 0.03 * rng.standard_normal())
        oil = oil * (1 + 0.02 * rng.standard_normal())
        if day.weekday() >= 5:
            continue
        out["GAS"].append((day, round(gas, 3)))
        out["OIL"].append((day, round(oil, 2)))
    return out


EVENTS_2022 = [
    ("2022-05-09", 1, "failed Russian Donetsk River crossing"),
    ("2022-05-13", 2, "American-Russian defence talks"),
    ("2022-05-15", 3, "Ukraine wins Eurovision"),
    ("2022-05-17", 4, "Azovstal lost"),
    ("2022-05-27", 5, "90% of Severodonetsk destroyed"),
    ("2022-05-29", 6, "Zelenskyy's first visit outside Kyiv"),
    ("2022-05-30", 7, "Russian troops enter Severodonetsk"),
    ("2022-06-05", 8, "Ukraine eliminated from World Cup qualifiers"),
    ("2022-06-12", 9, "Ukrainian supplies and planes destroyed"),
    ("2022-06-16", 10, "Russian tug sunk near Snake Island"),
    ("2022-06-17", 11, "Putin speech at St. Petersburg economic forum"),
    ("2022-06-22", 12, "drone strike on a Russian oil refinery"),
    ("2022-06-26", 13, "14 missiles hit Kyiv"),
    ("2022-07-06", 14, "Duma prepares war economy"),
    ("2022-07-07", 15, "Zelenskyy speech on western artillery; Russian operational pause"),
    ("2022-07-14", 16, "volunteer mobilisation begins"),
    ("2022-07-16", 17, "US House approves pilot training funds"),
    ("2022-07-23", 18, "Kalibr missiles hit Odesa"),
]


def write_fixture_files(outdir) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "nrc_fixture.txt", "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(NRC_FIXTURE):
            for label in LABELS:
                fh.write(f"{word}\t{label}\t{int(label in NRC_FIXTURE[word])}\n")
    with open(out / "polarity_fixture.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["word", "polarity", "subjectivity"])
        for row in POLARITY_FIXTURE:
            w.writerow(row)
    make_demo_corpus().save(out / "demo_corpus.jsonl")
    for ticker, rows in make_market_rows().items():
        with open(out / f"market_{ticker.lower()}.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "close"])
            for day, close in rows:
                w.writerow([day.isoformat(), close])
    with open(out / "events_2022.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["day", "index", "label"])
        for row in EVENTS_2022:
            w.writerow(row)


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files("hopefear.data").joinpath(name)))


if __name__ == "__main__":
    write_fixture_files(Path(__file__).parent / "data")
