"""Content-analysis coder: keyword-taxonomy vocabulary coding with roll-up
sums, and pronoun-group orientation counting.

Category counts are unique-word counts by default (each distinct surface
counts once, in the first category whose family matches it); occurrence
counting is available behind a flag for sensitivity analysis.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

from .corpus import Corpus
from .errors import DataError
from .text import KeywordFamily, StopwordList, tokenize


@dataclass(frozen=True)
class Category:
    id: str
    label: str
    parent: str | None = None
    families: tuple[KeywordFamily, ...] = ()


@dataclass(frozen=True)
class Taxonomy:
    """Ordered category tree; file order decides first-match assignment."""

    categories: tuple[Category, ...]

    def __post_init__(self) -> None:
        ids = [c.id for c in self.categories]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate category ids in taxonomy")
        known = set(ids)
        for category in self.categories:
            if category.parent is not None:
                if category.parent not in known:
                    raise ValueError(f"orphan subcategory id: {category.id!r}")
                if category.id.split(".")[0] != category.parent:
                    raise ValueError(
                        f"subcategory {category.id!r} does not share its parent's prefix"
                    )
        seen_families: set[tuple[str, str]] = set()
        for category in self.categories:
            for family in category.families:
                key = (family.stem, family.match_mode)
                if key in seen_families:
                    raise ValueError(f"duplicate family: {family.stem!r}")
                seen_families.add(key)

    def __len__(self) -> int:
        return len(self.categories)

    @property
    def by_id(self) -> dict[str, Category]:
        return {c.id: c for c in self.categories}

    def top_level(self) -> list[Category]:
        return [c for c in self.categories if c.parent is None]

    def subcategories(self) -> list[Category]:
        return [c for c in self.categories if c.parent is not None]


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Parse a taxonomy file.

    Tab-separated lines: `id<TAB>label` declares a category,
    `category_id<TAB>stem<TAB>mode` adds a keyword family to it. Blank
    lines and '#' comment lines are skipped. Subcategory ids like '6.1'
    require category '6' to be declared.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read taxonomy file {path}: {exc}") from exc

    order: list[str] = []
    labels: dict[str, str] = {}
    families: dict[str, list[KeywordFamily]] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 2:
            cat_id, label = parts
            if cat_id in labels:
                raise DataError(f"line {line_no}: duplicate category id {cat_id!r}")
            order.append(cat_id)
            labels[cat_id] = label
            families[cat_id] = []
        elif len(parts) == 3:
            cat_id, stem, mode = parts
            if cat_id not in labels:
                raise DataError(f"line {line_no}: unknown category id {cat_id!r}")
            try:
                families[cat_id].append(KeywordFamily(stem=stem, match_mode=mode))
            except ValueError as exc:
                raise DataError(f"line {line_no}: {exc}") from exc
        else:
            raise DataError(f"line {line_no}: expected 2 or 3 tab-separated fields")

    categories = []
    for cat_id in order:
        parent = cat_id.split(".")[0] if "." in cat_id else None
        categories.append(
            Category(
                id=cat_id,
                label=labels[cat_id],
                parent=parent,
                families=tuple(families[cat_id]),
            )
        )
    try:
        return Taxonomy(categories=tuple(categories))
    except ValueError as exc:
        raise DataError(f"invalid taxonomy {path}: {exc}") from exc


class CategoryCount(NamedTuple):
    unique_words: frozenset[str]
    count: int


@dataclass(frozen=True)
class CodingResult:
    """Vocabulary assignment: each surface lands in at most one category."""

    per_category: Mapping[str, CategoryCount]
    uncategorized: frozenset[str]
    vocabulary_size: int
    # Surfaces that matched more than one family, with every matching
    # category id; listed so coders can refine overlapping families.
    multi_matched: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        assigned = sum(len(c.unique_words) for c in self.per_category.values())
        if assigned + len(self.uncategorized) != self.vocabulary_size:
            raise ValueError("vocabulary is not conserved across categories")


def code_vocabulary(
    corpus: Corpus,
    taxonomy: Taxonomy,
    stops: StopwordList,
    min_freq: int = 1,
    count_occurrences: bool = False,
) -> CodingResult:
    """Assign the corpus vocabulary to taxonomy categories.

    Vocabulary = distinct non-stopword surfaces with corpus frequency
    >= min_freq. Each surface goes to the first category (in taxonomy
    order) whose family matches it.
    """
    if min_freq < 1:
        raise ValueError(f"min_freq must be >= 1, got {min_freq}")
    freq: Counter = Counter()
    for doc in corpus:
        freq.update(t.surface for t in tokenize(doc.text))
    vocabulary = sorted(s for s, n in freq.items() if n >= min_freq and s not in stops)

    assigned: dict[str, set[str]] = {c.id: set() for c in taxonomy.categories}
    uncategorized: set[str] = set()
    multi: dict[str, tuple[str, ...]] = {}
    for surface in vocabulary:
        hits: list[str] = []
        for category in taxonomy.categories:
            for family in category.families:
                if family.matches(surface):
                    hits.append(category.id)
        if not hits:
            uncategorized.add(surface)
            continue
        assigned[hits[0]].add(surface)
        if len(hits) > 1:
            deduped = tuple(dict.fromkeys(hits))
            multi[surface] = deduped

    per_category: dict[str, CategoryCount] = {}
    for category in taxonomy.categories:
        words = frozenset(assigned[category.id])
        count = sum(freq[w] for w in words) if count_occurrences else len(words)
        per_category[category.id] = CategoryCount(unique_words=words, count=count)
    return CodingResult(
        per_category=per_category,
        uncategorized=frozenset(uncategorized),
        vocabulary_size=len(vocabulary),
        multi_matched=multi,
    )


def rollup(result: CodingResult, taxonomy: Taxonomy) -> dict[str, int]:
    """Parent categories roll up their own count plus all subcategory counts."""
    own = {
        c.id: result.per_category[c.id].count if c.id in result.per_category else 0
        for c in taxonomy.categories
    }
    rolled = dict(own)
    for category in taxonomy.categories:
        if category.parent is not None:
            rolled[category.parent] += own[category.id]
    return rolled


GroupEntry = tuple[str, tuple[str, ...]]  # (label, surfaces)


@dataclass(frozen=True)
class PronounGroups:
    """Observer-orientation word groups: 'them' vs 'us' surfaces."""

    them_group: tuple[GroupEntry, ...]
    us_group: tuple[GroupEntry, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for _, surfaces in self.them_group + self.us_group:
            for surface in surfaces:
                if surface in seen:
                    raise ValueError(f"surface {surface!r} appears in more than one entry")
                seen.add(surface)


def load_pronoun_groups(path: str | Path) -> PronounGroups:
    """Parse a groups file: `group<TAB>label<TAB>surface[|surface...]` per line."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read pronoun groups file {path}: {exc}") from exc
    them: list[GroupEntry] = []
    us: list[GroupEntry] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"line {line_no}: expected 3 tab-separated fields")
        group, label, surfaces_field = parts
        surfaces = tuple(s.lower() for s in surfaces_field.split("|") if s)
        if not surfaces:
            raise DataError(f"line {line_no}: no surfaces listed")
        if group == "them":
            them.append((label, surfaces))
        elif group == "us":
            us.append((label, surfaces))
        else:
            raise DataError(f"line {line_no}: group must be 'them' or 'us', got {group!r}")
    try:
        return PronounGroups(them_group=tuple(them), us_group=tuple(us))
    except ValueError as exc:
        raise DataError(f"invalid pronoun groups {path}: {exc}") from exc


class PronounRow(NamedTuple):
    label: str
    group: str
    surface: str
    count: int


@dataclass(frozen=True)
class PronounReport:
    rows: tuple[PronounRow, ...]
    them_total: int
    us_total: int
    ratio: float  # math.inf when the us-group total is zero


def pronoun_orientation(corpus: Corpus, groups: PronounGroups) -> PronounReport:
    """Raw occurrence counts of every listed surface across the tokenized corpus.

    Stopword lists are deliberately not applied here: the surfaces of
    interest are exactly the function words a stoplist would remove.
    """
    freq: Counter = Counter()
    for doc in corpus:
        freq.update(t.surface for t in tokenize(doc.text))

    rows: list[PronounRow] = []
    totals = {"them": 0, "us": 0}
    for group_name, entries in (("them", groups.them_group), ("us", groups.us_group)):
        for label, surfaces in entries:
            for surface in surfaces:
                count = freq.get(surface, 0)
                rows.append(PronounRow(label, group_name, surface, count))
                totals[group_name] += count
    ratio = totals["them"] / totals["us"] if totals["us"] else math.inf
    return PronounReport(
        rows=tuple(rows),
        them_total=totals["them"],
        us_total=totals["us"],
        ratio=ratio,
    )


def format_ratio(ratio: float) -> str:
    return "inf" if math.isinf(ratio) else f"{ratio:.4f}"


def write_coding_csv(
    result: CodingResult, rolled: Mapping[str, int], taxonomy: Taxonomy,
    handle: io.TextIOBase,
) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["category_id", "label", "unique_words", "count", "rolled_up"])
    for category in taxonomy.categories:
        counted = result.per_category.get(category.id, CategoryCount(frozenset(), 0))
        writer.writerow(
            [category.id, category.label, len(counted.unique_words), counted.count,
             rolled[category.id]]
        )
    handle.write(f"# uncategorized,{len(result.uncategorized)}\n")
    handle.write(f"# vocabulary_size,{result.vocabulary_size}\n")


def write_pronouns_csv(report: PronounReport, handle: io.TextIOBase) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["label", "group", "surface", "count"])
    for row in report.rows:
        writer.writerow(list(row))
    handle.write(f"# them_total,{report.them_total}\n")
    handle.write(f"# us_total,{report.us_total}\n")
    handle.write(f"# ratio,{format_ratio(report.ratio)}\n")
