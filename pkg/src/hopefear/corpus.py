"""Threaded submission corpus: forest navigation, flair propagation, JSONL persistence."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

POST = "post"
COMMENT = "comment"

FIELDS = (
    "id",
    "parent_id",
    "ancestor_id",
    "kind",
    "title",
    "text",
    "author",
    "upvotes",
    "created_at",
    "fetched_at",
    "flair",
    "subreddit",
)


class ValidationError(ValueError):
    """A submission record violates the corpus schema."""


class CycleError(ValueError):
    def __init__(self, ids):
        self.ids = sorted(ids)
        super().__init__(f"cycle in parent links: {', '.join(self.ids)}")


@dataclass
class Submission:
    id: str
    kind: str
    text: str
    author: str
    upvotes: int
    created_at: float
    fetched_at: float
    subreddit: str
    parent_id: Optional[str] = None
    ancestor_id: Optional[str] = None
    title: Optional[str] = None
    flair: Optional[str] = None

    @property
    def is_post(self) -> bool:
        return self.kind == POST

    @property
    def scored_text(self) -> str:
        if self.is_post and self.title:
            return f"{self.title} {self.text}" if self.text else self.title
        return self.text

    def validate(self) -> None:
        if not self.id:
            raise ValidationError("empty submission id")
        if self.kind not in (POST, COMMENT):
            raise ValidationError(f"{self.id}: unknown kind {self.kind!r}")
        if self.kind == COMMENT and not self.parent_id:
            raise ValidationError(f"{self.id}: comment without parent_id")
        if self.kind == POST and self.parent_id:
            raise ValidationError(f"{self.id}: post with parent_id {self.parent_id!r}")
        if self.kind == POST and self.ancestor_id not in (None, self.id):
            raise ValidationError(f"{self.id}: post ancestor_id must equal its id")
        if self.parent_id == self.id:
            raise ValidationError(f"{self.id}: submission is its own parent")

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in FIELDS}

    @classmethod
    def from_dict(cls, data: dict) -> "Submission":
        missing = [name for name in FIELDS if name not in data]
        if missing:
            raise ValidationError(f"record missing fields: {', '.join(missing)}")
        return cls(**{name: data[name] for name in FIELDS})


class Corpus:
    """Mapping id -> Submission with lazily rebuilt thread indexes.

    Indexes (children, ancestors, thread sizes, orphans) are rebuilt on first
    access after a mutation.
    """

    def __init__(self, submissions: Iterable[Submission] = ()):
        self.submissions: dict[str, Submission] = {}
        self._children: dict[str, list[str]] = {}
        self._thread_size: dict[str, int] = {}
        self._orphans: set[str] = set()
        self._dirty = False
        for s in submissions:
            self.upsert(s)

    def __len__(self) -> int:
        return len(self.submissions)

    def __iter__(self) -> Iterator[Submission]:
        return iter(self.submissions.values())

    def __contains__(self, sid: str) -> bool:
        return sid in self.submissions

    def __getitem__(self, sid: str) -> Submission:
        return self.submissions[sid]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.submissions == other.submissions

    def upsert(self, s: Submission) -> "Corpus":
        s.validate()
        if s.kind == POST:
            s.ancestor_id = s.id
        elif s.parent_id in self.submissions:
            s.ancestor_id = self.submissions[s.parent_id].ancestor_id
        current = self.submissions.get(s.id)
        if current is not None:
            if s.fetched_at < current.fetched_at:
                return self
            if s.ancestor_id is None and s.kind == COMMENT:
                s.ancestor_id = current.ancestor_id
            if current == s:
                return self
        self.submissions[s.id] = s
        self._dirty = True
        return self

    # -- indexes -----------------------------------------------------------

    @property
    def children(self) -> dict[str, list[str]]:
        self._ensure_indexes()
        return self._children

    @property
    def thread_size(self) -> dict[str, int]:
        self._ensure_indexes()
        return self._thread_size

    @property
    def orphans(self) -> set[str]:
        self._ensure_indexes()
        return self._orphans

    def is_orphan(self, sid: str) -> bool:
        return sid in self.orphans

    def _ensure_indexes(self) -> None:
        if self._dirty:
            self.resolve_ancestors()

    def resolve_ancestors(self) -> "Corpus":
        subs = self.submissions
        children: dict[str, list[str]] = {}
        for s in subs.values():
            if s.parent_id is not None and s.parent_id in subs:
                children.setdefault(s.parent_id, []).append(s.id)
        for kids in children.values():
            kids.sort()

        # root[sid] = (root id, reached a post?)
        root: dict[str, tuple[str, bool]] = {}
        for start in subs:
            if start in root:
                continue
            path = []
            on_path = set()
            cur = start
            while True:
                if cur in root:
                    result = root[cur]
                    break
                s = subs.get(cur)
                if s is None:
                    # chain left the corpus: cur is the missing parent id
                    result = (cur, False)
                    break
                if cur in on_path:
                    cycle = path[path.index(cur):]
                    raise CycleError(cycle)
                path.append(cur)
                on_path.add(cur)
                if s.parent_id is None:
                    result = (cur, True)
                    break
                cur = s.parent_id
            for sid in path:
                root[sid] = result

        orphans = set()
        thread_size: dict[str, int] = {}
        for sid, (anc, rooted) in root.items():
            subs[sid].ancestor_id = anc
            if rooted:
                thread_size[anc] = thread_size.get(anc, 0) + 1
            else:
                orphans.add(sid)

        self._children = children
        self._thread_size = thread_size
        self._orphans = orphans
        self._dirty = False
        return self

    def propagate_flair(self) -> "Corpus":
        self._ensure_indexes()
        for s in self.submissions.values():
            if s.kind == COMMENT and s.id not in self._orphans:
                s.flair = self.submissions[s.ancestor_id].flair
        return self

    def filter_by_flair(self, subreddit: str, required_flair: str) -> "Corpus":
        """Drop `subreddit` submissions whose (propagated) flair differs from
        `required_flair`. Orphans pass through untouched."""
        self._ensure_indexes()
        kept = []
        for s in self.submissions.values():
            if s.subreddit == subreddit and s.id not in self._orphans:
                if s.flair != required_flair:
                    continue
            kept.append(dataclasses.replace(s))
        out = Corpus()
        out.submissions = {s.id: s for s in kept}
        out._dirty = True
        return out

    def subset(self, ids: Iterable[str]) -> "Corpus":
        """New corpus holding copies of `ids`, indexes rebuilt over the subset."""
        out = Corpus()
        out.submissions = {sid: dataclasses.replace(self.submissions[sid]) for sid in ids}
        out._dirty = True
        return out

    # -- persistence -------------------------------------------------------

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for sid in sorted(self.submissions):
                fh.write(json.dumps(self.submissions[sid].to_dict(), ensure_ascii=False))
                fh.write("\n")

    @classmethod
    def load(cls, path) -> "Corpus":
        corpus = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from None
                corpus.upsert(Submission.from_dict(record))
        corpus.resolve_ancestors()
        return corpus


def upsert_submission(c: Corpus, s: Submission) -> Corpus:
    return c.upsert(s)


def resolve_ancestors(c: Corpus) -> Corpus:
    return c.resolve_ancestors()


def propagate_flair(c: Corpus) -> Corpus:
    return c.propagate_flair()


def filter_by_flair(c: Corpus, subreddit: str, required_flair: str) -> Corpus:
    return c.filter_by_flair(subreddit, required_flair)


def load_corpus(path) -> Corpus:
    return Corpus.load(Path(path))
