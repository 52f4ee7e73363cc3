"""Tag frequencies, hashtag pair co-occurrence, and token 2-gram counting.

Counting can shard over documents; shard tables are merged by plain
addition, so results are identical for every shard layout.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .corpus import Corpus, Document
from .text import KeywordFamily, StopwordList, remove_stopwords, tokenize

Key = Hashable


class TagPair(NamedTuple):
    """Canonical unordered pair of distinct tags: a < b lexicographically."""

    a: str
    b: str

    @classmethod
    def of(cls, x: str, y: str) -> "TagPair":
        if x == y:
            raise ValueError(f"degenerate tag pair: {x!r}")
        return cls(x, y) if x < y else cls(y, x)


@dataclass(frozen=True)
class CountTable:
    """Frequency map from a key (tag, token pair, ...) to an occurrence count."""

    entries: Mapping[Key, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, count in self.entries.items():
            if count < 1:
                raise ValueError(f"count for {key!r} must be >= 1, got {count}")

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: Key) -> int:
        return self.entries.get(key, 0)

    def __contains__(self, key: Key) -> bool:
        return key in self.entries

    def merge(self, other: "CountTable") -> "CountTable":
        merged = Counter(self.entries)
        merged.update(other.entries)
        return CountTable(dict(merged))


def merge_tables(tables: Iterable[CountTable]) -> CountTable:
    """Order-independent sum of count tables."""
    merged: Counter = Counter()
    for table in tables:
        merged.update(table.entries)
    return CountTable(dict(merged))


def _count_sharded(
    items: Sequence,
    keys_of: Callable[[object], Iterable[Key]],
    jobs: int,
) -> CountTable:
    """Count keys over items, optionally on `jobs` contiguous shards."""
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    def count_shard(shard: Sequence) -> Counter:
        counts: Counter = Counter()
        for item in shard:
            counts.update(keys_of(item))
        return counts

    if jobs == 1 or len(items) <= 1:
        return CountTable(dict(count_shard(items)))

    size = (len(items) + jobs - 1) // jobs
    shards = [items[i : i + size] for i in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        partials = list(pool.map(count_shard, shards))
    merged: Counter = Counter()
    for partial in partials:
        merged.update(partial)
    return CountTable(dict(merged))


def count_tags(corpus: Corpus, jobs: int = 1) -> CountTable:
    """Per-document distinct hashtag counts: each tag counts once per document."""
    return _count_sharded(corpus.documents, lambda d: set(d.hashtags), jobs)


def count_tag_pairs(corpus: Corpus, jobs: int = 1) -> CountTable:
    """Unordered pairs of distinct tags co-occurring in one document.

    Each document contributes one count per distinct pair; documents with
    fewer than two distinct tags contribute nothing.
    """

    def pairs_of(doc: Document) -> Iterable[TagPair]:
        distinct = sorted(set(doc.hashtags))
        return [TagPair(a, b) for a, b in combinations(distinct, 2)]

    return _count_sharded(corpus.documents, pairs_of, jobs)


def count_token_2grams(
    documents: Sequence[Document],
    stops: StopwordList,
    filter_term: KeywordFamily | None = None,
    jobs: int = 1,
) -> CountTable:
    """Adjacent ordered token pairs in the stopword-filtered text of each document.

    2-grams never cross document boundaries. With filter_term, only pairs
    where at least one member matches the family are kept.
    """

    def grams_of(doc: Document) -> Iterable[tuple[str, str]]:
        tokens = remove_stopwords(tokenize(doc.text), stops)
        grams = []
        for first, second in zip(tokens, tokens[1:]):
            gram = (first.surface, second.surface)
            if filter_term is not None and not (
                filter_term.matches(gram[0]) or filter_term.matches(gram[1])
            ):
                continue
            grams.append(gram)
        return grams

    return _count_sharded(documents, grams_of, jobs)


def top_k(table: CountTable, k: int) -> list[tuple[Key, int]]:
    """Top-k entries: descending count, ties ascending lexicographically."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ordered = sorted(table.entries.items(), key=lambda kv: (-kv[1], kv[0]))
    return ordered[:k]


def write_counts_csv(table: CountTable, handle: io.TextIOBase) -> None:
    """Serialize a table to CSV in top_k order; pair keys become two columns."""
    rows = top_k(table, max(len(table), 1)) if len(table) else []
    writer = csv.writer(handle, lineterminator="\n")
    pair_keys = bool(rows) and isinstance(rows[0][0], tuple)
    writer.writerow(["key", "key2", "count"] if pair_keys else ["key", "count"])
    for key, count in rows:
        if pair_keys:
            writer.writerow([key[0], key[1], count])
        else:
            writer.writerow([key, count])


def counts_to_csv(table: CountTable) -> str:
    buffer = io.StringIO()
    write_counts_csv(table, buffer)
    return buffer.getvalue()
