"""Forum API client and market CSV loader."""
from __future__ import annotations

import csv
import logging
import os
import time
from collections import deque
from dataclasses import dataclass, field
from datetime import date, datetime
from decimal import Decimal, InvalidOperation
from typing import Callable, Optional

import httpx

from .corpus import COMMENT, POST, Submission

log = logging.getLogger(__name__)

AUTH_URL = "https://www.reddit.com/api/v1/access_token"
API_BASE = "https://oauth.reddit.com"
DEFAULT_SUBREDDITS = ("ukraine", "worldnews", "ukraina", "UkrainianConflict",
                      "UkraineWarVideoReport", "UkraineWarReports")
MAX_COMMENTS_PER_POST = 10_000
ENV_VARS = ("CLIENT_ID", "CLIENT_SECRET", "API_USERNAME", "API_PASSWORD", "USER_AGENT")


class IngestError(RuntimeError):
    pass


class CredentialError(IngestError):
    pass


class TransportError(IngestError):
    """Network-level failure; safe to retry."""


class UnknownSubredditError(IngestError):
    pass


class MarketFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Credentials:
    client_id: str
    client_secret: str
    username: str
    password: str
    user_agent: str

    @classmethod
    def from_env(cls, env=None) -> "Credentials":
        env = os.environ if env is None else env
        missing = [k for k in ENV_VARS if not env.get(k)]
        if missing:
            raise CredentialError(f"missing environment variables: {', '.join(missing)}")
        return cls(env["CLIENT_ID"], env["CLIENT_SECRET"], env["API_USERNAME"], env["API_PASSWORD"], env["USER_AGENT"])


@dataclass
class IngestConfig:
    credentials: Credentials
    subreddits: list = field(default_factory=lambda: list(DEFAULT_SUBREDDITS))
    posts_per_subreddit: int = 50
    rate_limit: int = 60
    max_retries: int = 5
    max_comments: int = MAX_COMMENTS_PER_POST

    def __post_init__(self):
        if self.posts_per_subreddit < 1:
            raise ValueError("posts_per_subreddit must be >= 1")
        if self.rate_limit < 1:
            raise ValueError("rate_limit must be >= 1")


@dataclass(frozen=True)
class SessionToken:
    access_token: str
    expires_at: float
    user_agent: str

    def ttl(self, now: float) -> float:
        return self.expires_at - now


@dataclass(frozen=True)
class MarketRow:
    ticker: str
    date: date
    close: Decimal


class RateLimiter:
    """At most `limit` acquisitions in any `period`-second sliding window."""

    def __init__(self, limit: int, period: float = 60.0, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.limit = limit
        self.period = period
        self.clock = clock
        self.sleep = sleep
        self._stamps: deque = deque()

    def acquire(self) -> None:
        while True:
            now = self.clock()
            while self._stamps and now - self._stamps[0] >= self.period:
                self._stamps.popleft()
            if len(self._stamps) < self.limit:
                self._stamps.append(now)
                return
            self.sleep(self.period - (now - self._stamps[0]))


def strip_prefix(thing_id: Optional[str]) -> Optional[str]:
    """'t3_abc' -> 'abc'."""
    if thing_id and len(thing_id) > 3 and thing_id[0] == "t" and thing_id[1].isdigit() and thing_id[2] == "_":
        return thing_id[3:]
    return thing_id


class RedditClient:
    def __init__(self, config: IngestConfig, client: Optional[httpx.Client] = None,
                 clock: Callable[[], float] = time.time, sleep: Callable[[float], None] = time.sleep,
                 limiter: Optional[RateLimiter] = None):
        self.config = config
        self.http = client or httpx.Client(timeout=30.0)
        self.clock = clock
        self.sleep = sleep
        self.limiter = limiter or RateLimiter(config.rate_limit, sleep=sleep)
        self.token: Optional[SessionToken] = None

    # -- transport -----------------------------------------------------------

    def _send(self, method: str, url: str, **kwargs) -> httpx.Response:
        """Send with backoff on 429/5xx and transport errors."""
        for attempt in range(self.config.max_retries + 1):
            self.limiter.acquire()
            try:
                resp = self.http.request(method, url, **kwargs)
            except httpx.TransportError as exc:
                if attempt == self.config.max_retries:
                    raise TransportError(f"{method} {url}: {exc}") from exc
                log.warning("transport error on %s (%s); retrying", url, exc)
                self.sleep(min(60.0, 2.0 ** attempt))
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                if attempt == self.config.max_retries:
                    raise TransportError(f"{method} {url}: HTTP {resp.status_code} after {attempt + 1} attempts")
                wait = _retry_after(resp, default=min(60.0, 2.0 ** attempt))
                log.warning("HTTP %s on %s; sleeping %.1fs", resp.status_code, url, wait)
                self.sleep(wait)
                continue
            return resp
        raise AssertionError("unreachable")

    def authenticate(self) -> SessionToken:
        cr = self.config.credentials
        if not all((cr.client_id, cr.client_secret, cr.username, cr.password, cr.user_agent)):
            raise CredentialError("credentials must be non-empty")
        resp = self._send(
            "POST", AUTH_URL,
            auth=(cr.client_id, cr.client_secret),
            data={"grant_type": "password", "username": cr.username, "password": cr.password},
            headers={"User-Agent": cr.user_agent},
        )
        if resp.status_code in (401, 403):
            raise CredentialError(f"authentication rejected (HTTP {resp.status_code})")
        if resp.status_code != 200:
            raise IngestError(f"authentication failed (HTTP {resp.status_code})")
        payload = resp.json()
        if "access_token" not in payload:
            raise CredentialError(f"authentication rejected: {payload.get('error', 'no token')}")
        self.token = SessionToken(payload["access_token"], self.clock() + float(payload.get("expires_in", 3600)),
                                  cr.user_agent)
        return self.token

    def _get(self, path: str, params: dict) -> httpx.Response:
        if self.token is None or self.token.ttl(self.clock()) <= 0:
            self.authenticate()
        headers = {"Authorization": f"bearer {self.token.access_token}", "User-Agent": self.token.user_agent}
        return self._send("GET", API_BASE + path, params=params, headers=headers)

    # -- endpoints -----------------------------------------------------------

    def fetch_hot_posts(self, subreddit: str, n: int) -> list[Submission]:
        if n < 1:
            raise ValueError("n must be >= 1")
        resp = self._get(f"/r/{subreddit}/hot", {"limit": n, "raw_json": 1})
        if resp.status_code in (404, 403) or resp.is_redirect:
            raise UnknownSubredditError(f"unknown or inaccessible subreddit {subreddit!r} (HTTP {resp.status_code})")
        if resp.status_code != 200:
            raise IngestError(f"r/{subreddit}: HTTP {resp.status_code}")
        fetched_at = self.clock()
        out = []
        for child in resp.json().get("data", {}).get("children", []):
            if child.get("kind") != "t3":
                continue
            out.append(post_from_json(child["data"], fetched_at))
            if len(out) == n:
                break
        return out

    def fetch_comments(self, post_id: str) -> list[Submission]:
        post_id = strip_prefix(post_id)
        resp = self._get(f"/comments/{post_id}", {"raw_json": 1, "limit": 500})
        if resp.status_code == 404:
            log.warning("post %s not found (deleted?); no comments", post_id)
            return []
        if resp.status_code != 200:
            raise IngestError(f"comments for {post_id}: HTTP {resp.status_code}")
        payload = resp.json()
        if not isinstance(payload, list) or len(payload) < 2:
            log.warning("post %s returned no comment listing", post_id)
            return []
        fetched_at = self.clock()
        post_data = payload[0]["data"]["children"][0]["data"] if payload[0]["data"]["children"] else {}
        subreddit = post_data.get("subreddit", "")

        out: list[Submission] = []
        pending_more: deque = deque()
        _walk_listing(payload[1], out, pending_more, fetched_at, subreddit)
        cap = self.config.max_comments
        while pending_more and len(out) < cap:
            ids = []
            while pending_more and len(ids) < 100:
                ids.append(pending_more.popleft())
            resp = self._get("/api/morechildren", {
                "link_id": f"t3_{post_id}", "children": ",".join(ids), "api_type": "json", "raw_json": 1,
            })
            if resp.status_code != 200:
                log.warning("morechildren for %s: HTTP %s; stopping expansion", post_id, resp.status_code)
                break
            things = resp.json().get("json", {}).get("data", {}).get("things", [])
            for thing in things:
                _walk_thing(thing, out, pending_more, fetched_at, subreddit)
        if len(out) > cap:
            log.warning("post %s: comment cap %d reached", post_id, cap)
            out = out[:cap]
        return out

    def crawl(self) -> list[Submission]:
        """Hot posts plus their comment trees for every configured subreddit."""
        out = []
        for sub in self.config.subreddits:
            for post in self.fetch_hot_posts(sub, self.config.posts_per_subreddit):
                out.append(post)
                out.extend(self.fetch_comments(post.id))
        return out


def _retry_after(resp: httpx.Response, default: float) -> float:
    raw = resp.headers.get("Retry-After") or resp.headers.get("x-ratelimit-reset")
    try:
        return max(0.0, float(raw)) if raw is not None else default
    except ValueError:
        return default


def post_from_json(d: dict, fetched_at: float) -> Submission:
    s = Submission(
        id=strip_prefix(d.get("id") or d.get("name")),
        kind=POST,
        title=d.get("title"),
        text=d.get("selftext") or "",
        author=d.get("author") or "[deleted]",
        upvotes=int(d.get("score", 0)),
        created_at=float(d["created_utc"]),
        fetched_at=float(fetched_at),
        flair=d.get("link_flair_text"),
        subreddit=d.get("subreddit", ""),
    )
    s.validate()
    return s


def comment_from_json(d: dict, fetched_at: float, subreddit: str = "") -> Submission:
    s = Submission(
        id=strip_prefix(d.get("id") or d.get("name")),
        kind=COMMENT,
        parent_id=strip_prefix(d.get("parent_id")),
        text=d.get("body") or "",
        author=d.get("author") or "[deleted]",
        upvotes=int(d.get("score", 0)),
        created_at=float(d["created_utc"]),
        fetched_at=float(fetched_at),
        subreddit=d.get("subreddit") or subreddit,
    )
    s.validate()
    return s


def _walk_thing(thing: dict, out: list, pending: deque, fetched_at: float, subreddit: str) -> None:
    kind = thing.get("kind")
    data = thing.get("data", {})
    if kind == "more":
        pending.extend(c for c in data.get("children", []) if c)
        return
    if kind != "t1":
        return
    out.append(comment_from_json(data, fetched_at, subreddit))
    replies = data.get("replies")
    if isinstance(replies, dict):
        _walk_listing(replies, out, pending, fetched_at, subreddit)


def _walk_listing(listing: dict, out: list, pending: deque, fetched_at: float, subreddit: str) -> None:
    for thing in listing.get("data", {}).get("children", []):
        _walk_thing(thing, out, pending, fetched_at, subreddit)


# -- market data -----------------------------------------------------------

_DATE_FORMATS = ("%Y-%m-%d", "%Y/%m/%d", "%Y%m%d")


def parse_date(raw: str) -> date:
    raw = raw.strip()
    head = raw[:10] if len(raw) > 10 and raw[10] in "T " else raw
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(head, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unparsable date {raw!r}")


def ingest_market_csv(path, ticker: str) -> tuple[list[MarketRow], int]:
    """Parse a date,close CSV (header names case-insensitive).

    Returns (rows sorted by date, number of skipped rows). Rows with an
    unparsable date or close, a non-positive close, or a repeated date are
    skipped.
    """
    rows: dict[date, MarketRow] = {}
    skipped = 0
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MarketFormatError(f"{path}: empty file") from None
        lower = [h.strip().lower() for h in header]
        for col in ("date", "close"):
            if col not in lower:
                raise MarketFormatError(f"{path}: missing required column {col!r}")
        i_date, i_close = lower.index("date"), lower.index("close")
        for rec in reader:
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                day = parse_date(rec[i_date])
                close = Decimal(rec[i_close].strip().replace(",", ""))
                if not close.is_finite() or close <= 0:
                    raise ValueError
            except (IndexError, ValueError, InvalidOperation):
                skipped += 1
                continue
            if day in rows:
                skipped += 1
                continue
            rows[day] = MarketRow(ticker, day, close)
    if skipped:
        log.info("%s: skipped %d unparsable rows", path, skipped)
    return [rows[d] for d in sorted(rows)], skipped


def write_market_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ticker", "date", "close"])
        for r in sorted(rows, key=lambda r: (r.ticker, r.date)):
            w.writerow([r.ticker, r.date.isoformat(), str(r.close)])


def read_market_csv(path) -> list[MarketRow]:
    """Read the normalized ticker,date,close table written by write_market_csv."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"ticker", "date", "close"} - set(reader.fieldnames or ())
        if missing:
            raise MarketFormatError(f"{path}: missing columns {', '.join(sorted(missing))}")
        for rec in reader:
            out.append(MarketRow(rec["ticker"], date.fromisoformat(rec["date"]), Decimal(rec["close"])))
    return out
