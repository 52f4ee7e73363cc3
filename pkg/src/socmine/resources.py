"""Access to the data files bundled with the package (default stopword
list, taxonomy, pronoun groups, demonstration lexicon)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import DataError

STOPWORDS = "stopwords_pl.txt"
TAXONOMY = "taxonomy.tsv"
PRONOUNS = "pronouns.tsv"
LEXICON = "lexicon.tsv"


def default_data_path(name: str) -> Path:
    path = Path(str(resources.files("socmine").joinpath("data", name)))
    if not path.is_file():
        raise DataError(f"bundled data file missing: {name}")
    return path
