"""NRC emotion lexicons, derived word lists, and the polarity lexicon."""
from __future__ import annotations

import csv
import re
import warnings
from dataclasses import dataclass
from typing import Mapping

LABELS = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "negative",
    "positive",
    "sadness",
    "surprise",
    "trust",
)

HOPE_RECIPE = "anticipation & (positive | joy)"
FEAR_RECIPE = "fear"


class LexiconFormatError(ValueError):
    pass


class DuplicateEntryWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EmotionLexicon:
    entries: Mapping[str, frozenset]

    def labels(self, word: str) -> frozenset:
        return self.entries.get(word, frozenset())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DerivedLexicon:
    name: str
    words: frozenset
    recipe: str

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class PolarityEntry:
    word: str
    polarity: float
    subjectivity: float


def parse_nrc(path) -> EmotionLexicon:
    """Read a word<TAB>label<TAB>0|1 file. Words with no flagged label are
    kept with an empty label set so exports round-trip."""
    entries: dict[str, set] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise LexiconFormatError(f"line {lineno}: expected 3 tab-separated columns, got {len(parts)}")
            word, label, flag = (p.strip() for p in parts)
            if not word:
                raise LexiconFormatError(f"line {lineno}: empty word")
            if label not in LABELS:
                raise LexiconFormatError(f"line {lineno}: unknown label {label!r}")
            if flag not in ("0", "1"):
                raise LexiconFormatError(f"line {lineno}: flag must be 0 or 1, got {flag!r}")
            labels = entries.setdefault(word.lower(), set())
            if flag == "1":
                labels.add(label)
    return EmotionLexicon({w: frozenset(ls) for w, ls in entries.items()})


def export_nrc(lex: EmotionLexicon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(lex.entries):
            labels = lex.entries[word]
            for label in LABELS:
                fh.write(f"{word}\t{label}\t{int(label in labels)}\n")


# -- label recipes -----------------------------------------------------------
#   expr := term ('|' term)* ; term := factor ('&' factor)* ;
#   factor := '~' factor | '(' expr ')' | LABEL

_TOKEN = re.compile(r"\s*(?:([A-Za-z]+)|(.))")


def _tokenize_recipe(recipe: str) -> list[str]:
    out = []
    for m in _TOKEN.finditer(recipe):
        word, sym = m.groups()
        if word:
            word = word.lower()
            out.append({"and": "&", "or": "|", "not": "~"}.get(word, word))
        elif sym and not sym.isspace():
            out.append(sym)
    return out


def compile_recipe(recipe: str):
    """Compile a boolean label expression into a predicate over label sets."""
    tokens = _tokenize_recipe(recipe)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise LexiconFormatError(f"bad recipe {recipe!r}: expected {expected or 'token'} at {pos}")
        pos += 1
        return tok

    def expr():
        left = term()
        while peek() == "|":
            take()
            right = term()
            left = (lambda a, b: lambda ls: a(ls) or b(ls))(left, right)
        return left

    def term():
        left = factor()
        while peek() == "&":
            take()
            right = factor()
            left = (lambda a, b: lambda ls: a(ls) and b(ls))(left, right)
        return left

    def factor():
        tok = take()
        if tok == "~":
            inner = factor()
            return lambda ls: not inner(ls)
        if tok == "(":
            inner = expr()
            take(")")
            return inner
        if tok not in LABELS:
            raise LexiconFormatError(f"bad recipe {recipe!r}: unknown label {tok!r}")
        return lambda ls: tok in ls

    pred = expr()
    if pos != len(tokens):
        raise LexiconFormatError(f"bad recipe {recipe!r}: trailing {tokens[pos]!r}")
    return pred


def derive(lex: EmotionLexicon, name: str, recipe: str) -> DerivedLexicon:
    pred = compile_recipe(recipe)
    words = frozenset(w for w, labels in lex.entries.items() if pred(labels))
    return DerivedLexicon(name, words, recipe)


def derive_hope(lex: EmotionLexicon) -> DerivedLexicon:
    return derive(lex, "hope", HOPE_RECIPE)


def select_fear(lex: EmotionLexicon) -> DerivedLexicon:
    return derive(lex, "fear", FEAR_RECIPE)


def export_wordlist(lex: DerivedLexicon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(lex.words):
            fh.write(word + "\n")


def load_wordlist(path, name: str | None = None) -> DerivedLexicon:
    with open(path, encoding="utf-8") as fh:
        words = frozenset(line.strip().lower() for line in fh if line.strip())
    return DerivedLexicon(name or str(path), words, recipe="")


def load_polarity_lexicon(path) -> dict[str, PolarityEntry]:
    """CSV with header word,polarity,subjectivity. Later duplicates win and
    raise a DuplicateEntryWarning."""
    out: dict[str, PolarityEntry] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"word", "polarity", "subjectivity"} - set(reader.fieldnames or ())
        if missing:
            raise LexiconFormatError(f"polarity lexicon missing columns: {', '.join(sorted(missing))}")
        for row_no, row in enumerate(reader, 2):
            word = (row["word"] or "").strip().lower()
            if not word:
                raise LexiconFormatError(f"row {row_no}: empty word")
            try:
                pol = float(row["polarity"])
                subj = float(row["subjectivity"])
            except (TypeError, ValueError):
                raise LexiconFormatError(f"row {row_no}: non-numeric value") from None
            if not -1.0 <= pol <= 1.0:
                raise LexiconFormatError(f"row {row_no}: polarity {pol} outside [-1, 1]")
            if not 0.0 <= subj <= 1.0:
                raise LexiconFormatError(f"row {row_no}: subjectivity {subj} outside [0, 1]")
            if word in out:
                warnings.warn(f"row {row_no}: duplicate word {word!r}, later row wins", DuplicateEntryWarning, stacklevel=2)
            out[word] = PolarityEntry(word, pol, subj)
    return out
