#!/usr/bin/env python3
"""Regenerate the test corpora under tests/fixtures/.

Fully deterministic: no randomness, no clock reads. Running it twice
produces byte-identical files, so the fixtures can be committed and any
drift shows up in review.

Layout of the generated data:

twitter.jsonl - 6320 tweets, every one carrying at least two hashtags,
  inside 2013-05-15 .. 2013-07-15. Tag and pair frequencies are planted
  so the ranked tables hit fixed values; most tags spread uniformly over
  the window, while nymo lands on three single days (stepwise curve),
  svtdebatt sits in one four-day burst and debatt in one eight-day band.

forum.jsonl - 525 untagged forum posts inside 2013-05-20 .. 2013-06-30:
  21 posts holding two-word police phrases with fixed frequencies, 47
  posts carrying a planted pronoun distribution, and filler posts built
  from a rotating content vocabulary.
"""

from __future__ import annotations

import argparse
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

UTC = timezone.utc

TWITTER_START = datetime(2013, 5, 15, 12, 0, 0, tzinfo=UTC)
TWITTER_DAYS = 62
FORUM_START = datetime(2013, 5, 20, 12, 0, 0, tzinfo=UTC)
FORUM_DAYS = 42

# Tag pair plants: (tags, count). The three-tag docs lift (migpol, svpol)
# to 353 and (migpol, nymo) to 50 without pushing migpol's own count
# past 436.
PAIR_GROUPS = [
    (("sthlmriots", "svpol"), 533),
    (("migpol", "svpol"), 349),
    (("migpol", "nymo"), 46),
    (("migpol", "sthlmriots"), 37),
    (("svpol", "vpol"), 47),
    (("sthlmriot", "svpol"), 107),
    (("migpol", "svpol", "nymo"), 4),
]

# Per-tag top-ups: each doc pairs the tag with a unique one-off tag, so
# the added pairs stay below any sane edge threshold.
FILLER_GROUPS = [
    ("svpol", 2857),
    ("sthlmriots", 749),
    ("sthlmriot", 129),
    ("nymo", 74),
    ("vpol", 33),
    ("stockholm", 200),
    ("aftonbladet", 142),
    ("rinkeby", 109),
    ("polisen", 108),
    ("sweden", 100),
    ("upplopp", 92),
    ("kista", 89),
    ("svtdebatt", 82),
    ("debatt", 76),
    ("08pol", 75),
    ("expressentv", 72),
    ("megafonen", 71),
    ("kravaller", 70),
    ("tensta", 69),
]

# nymo: 60 docs on day 6, 40 on day 19, 24 on day 36 (counted across all
# nymo-carrying docs in generation order).
NYMO_STEPS = [(60, 6), (40, 19), (24, 36)]

# svtdebatt: one burst, four consecutive days.
SVTDEBATT_DAYS = [5] * 21 + [6] * 21 + [7] * 20 + [8] * 20

# debatt: one wider band.
DEBATT_DAYS = (
    [4] * 10 + [5] * 10 + [6] * 10 + [7] * 10 + [8] * 9 + [9] * 9 + [10] * 9 + [11] * 9
)

POLICE_PHRASES = (
    ["szwedzka policja"] * 10
    + ["policja używa"] * 3
    + ["granatniki policjanci"] * 2
    + ["jaka policja"] * 2
    + ["mogła policja"] * 2
    + ["mordować policja"] * 2
)

PRONOUN_PLANTS = [("im", 79), ("oni", 53), ("nich", 38), ("nam", 4), ("nas", 13), ("my", 1)]

FORUM_VOCAB = [
    "kryzys", "miasto", "wieczorem", "ludzie", "młodzież", "spokój",
    "dzielnica", "samochody", "okna", "sklepy", "szkoła", "praca",
    "podatki", "rodzina", "telewizja", "gazeta", "komentarz", "władza",
    "protesty", "kultura", "historia", "zdanie", "sprawa", "temat",
    "dyskusja", "opinia",
]

FORUM_POSTS = 525


def uniform_days(n: int, days: int) -> list[int]:
    return [i * days // n for i in range(n)]


def nymo_day(counter: int) -> int:
    seen = 0
    for count, day in NYMO_STEPS:
        if counter < seen + count:
            return day
        seen += count
    raise ValueError(f"nymo counter {counter} exceeds planted steps")


def build_twitter() -> list[dict]:
    docs: list[dict] = []
    nymo_counter = 0
    filler_counter = 0

    def add(tags: tuple[str, ...], day: int) -> None:
        ts = TWITTER_START + timedelta(days=day)
        docs.append(
            {
                "id": f"t{len(docs):05d}",
                "ts": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "text": "tweet",
                "tags": sorted(tags),
                "lang": "sv",
                "source": "tweet",
            }
        )

    for tags, count in PAIR_GROUPS:
        if "nymo" in tags:
            for _ in range(count):
                add(tags, nymo_day(nymo_counter))
                nymo_counter += 1
        else:
            for day in uniform_days(count, TWITTER_DAYS):
                add(tags, day)

    for tag, count in FILLER_GROUPS:
        if tag == "nymo":
            days = []
            for _ in range(count):
                days.append(nymo_day(nymo_counter))
                nymo_counter += 1
        elif tag == "svtdebatt":
            days = SVTDEBATT_DAYS
        elif tag == "debatt":
            days = DEBATT_DAYS
        else:
            days = uniform_days(count, TWITTER_DAYS)
        for day in days:
            add((tag, f"x{filler_counter:05d}"), day)
            filler_counter += 1

    return docs


def build_forum() -> list[dict]:
    texts: list[str] = list(POLICE_PHRASES)

    pronoun_tokens: list[str] = []
    for surface, count in PRONOUN_PLANTS:
        pronoun_tokens.extend([surface] * count)
    for i in range(0, len(pronoun_tokens), 4):
        texts.append(" ".join(pronoun_tokens[i : i + 4]))

    i = 0
    while len(texts) < FORUM_POSTS:
        words = [FORUM_VOCAB[(3 * i + j) % len(FORUM_VOCAB)] for j in range(4)]
        texts.append(" ".join(words))
        i += 1

    docs = []
    for index, text in enumerate(texts):
        ts = FORUM_START + timedelta(days=index * FORUM_DAYS // FORUM_POSTS)
        docs.append(
            {
                "id": f"p{index:04d}",
                "ts": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "text": text,
                "tags": [],
                "lang": "pl",
                "source": "forum_post",
            }
        )
    return docs


def write_jsonl(docs: list[dict], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for doc in docs:
            handle.write(json.dumps(doc, ensure_ascii=False) + "\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out-dir",
        default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"),
    )
    args = parser.parse_args()
    out = Path(args.out_dir)

    twitter = build_twitter()
    write_jsonl(twitter, out / "twitter.jsonl")
    print(f"twitter.jsonl: {len(twitter)} docs")

    forum = build_forum()
    write_jsonl(forum, out / "forum.jsonl")
    print(f"forum.jsonl: {len(forum)} docs")


if __name__ == "__main__":
    main()
