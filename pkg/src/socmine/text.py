"""Tokenization, stopword filtering, and keyword-family matching.

All functions here are pure; tokens and word lists are immutable, so
every downstream analysis can share them freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

# Word = maximal run of Unicode letters/digits. Underscore is excluded on
# purpose, and hyphens/apostrophes split tokens.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Shortest stem a prefix family may use; shorter stems degenerate into
# matching half the vocabulary of languages with short function words.
MIN_PREFIX_STEM = 3


@dataclass(frozen=True)
class Token:
    """One lowercased word with its 0-based position in the token sequence."""

    surface: str
    position: int


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    language: str = ""

    def __contains__(self, surface: str) -> bool:
        return surface in self.words

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class KeywordFamily:
    """A stem plus match rule standing in for the inflected forms of a word.

    match_mode 'exact' matches the stem only; 'prefix' matches every
    surface starting with the stem.
    """

    stem: str
    match_mode: str = "prefix"

    def __post_init__(self) -> None:
        if not self.stem:
            raise ValueError("keyword family stem must be non-empty")
        if self.stem != self.stem.lower():
            raise ValueError(f"keyword family stem must be lowercase: {self.stem!r}")
        if self.match_mode not in ("prefix", "exact"):
            raise ValueError(f"unknown match mode: {self.match_mode!r}")
        if self.match_mode == "prefix" and len(self.stem) < MIN_PREFIX_STEM:
            raise ValueError(
                f"prefix stem {self.stem!r} shorter than {MIN_PREFIX_STEM} characters"
            )

    def matches(self, surface: str) -> bool:
        if self.match_mode == "exact":
            return surface == self.stem
        return surface.startswith(self.stem)


def tokenize(text: str) -> list[Token]:
    """Split on Unicode word boundaries, lowercase, keep diacritics intact."""
    return [Token(m.group().lower(), i) for i, m in enumerate(_WORD_RE.finditer(text))]


def remove_stopwords(tokens: list[Token], stops: StopwordList) -> list[Token]:
    """Drop stopword tokens and re-index the survivors from 0."""
    kept = [t.surface for t in tokens if t.surface not in stops]
    return [Token(surface, i) for i, surface in enumerate(kept)]


def match_family(token: Token, family: KeywordFamily) -> bool:
    return family.matches(token.surface)


def load_stopwords(path: str | Path, language: str = "") -> StopwordList:
    """Read a stopword file: one word per line, '#' starts a comment line."""
    words: set[str] = set()
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read stopword file {path}: {exc}") from exc
    for line in lines:
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return StopwordList(words=frozenset(words), language=language)
