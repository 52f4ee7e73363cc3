import json
from datetime import datetime, timezone

import pytest

from helpers import BASE, UTC, make_doc
from socmine.corpus import (
    Corpus,
    Document,
    filter_multi_tag,
    load_corpus,
    normalize_tag,
    parse_timestamp,
    parse_window,
    write_corpus,
)
from socmine.errors import DataError


def test_normalize_tag():
    assert normalize_tag("#Svpol") == "svpol"
    assert normalize_tag("##SVPOL") == "svpol"
    assert normalize_tag("husby") == "husby"
    assert normalize_tag("#Stkhlmriot", {"stkhlmriot": "sthlmriot"}) == "sthlmriot"


def test_document_validation():
    with pytest.raises(ValueError):
        Document(id="", timestamp=BASE, text="")
    with pytest.raises(ValueError):
        Document(id="a", timestamp=datetime(2013, 5, 20), text="")
    with pytest.raises(ValueError):
        Document(id="a", timestamp=BASE, text="", hashtags=("Has Space",))
    with pytest.raises(ValueError):
        Document(id="a", timestamp=BASE, text="", hashtags=("UPPER",))
    with pytest.raises(ValueError):
        Document(id="a", timestamp=BASE, text="", source="blog")


def test_corpus_sorting_and_window_inference():
    docs = [make_doc("b", day=2), make_doc("a", day=0), make_doc("c", day=1)]
    corpus = Corpus.from_documents(docs)
    assert [d.id for d in corpus] == ["a", "c", "b"]
    assert corpus.window == (docs[1].timestamp, docs[0].timestamp)


def test_corpus_rejects_duplicates_and_unsorted():
    with pytest.raises(ValueError):
        Corpus.from_documents([make_doc("a"), make_doc("a", day=1)])
    window = (BASE, BASE)
    with pytest.raises(ValueError):
        Corpus(documents=(make_doc("b"), make_doc("a")), window=window)
    with pytest.raises(ValueError):
        Corpus(documents=(make_doc("a", day=3),), window=window)


def test_parse_timestamp_forms():
    expected = datetime(2013, 5, 20, 10, 30, 0, tzinfo=UTC)
    assert parse_timestamp("2013-05-20T10:30:00Z") == expected
    assert parse_timestamp("2013-05-20T10:30:00+00:00") == expected
    assert parse_timestamp("2013-05-20T12:30:00+02:00") == expected
    assert parse_timestamp("2013-05-20 10:30:00") == expected
    assert parse_timestamp("2013-05-20T10:30:00.654321Z") == expected
    assert parse_timestamp(expected.timestamp()) == expected


def test_parse_window_bare_date_end_covers_the_day():
    start, end = parse_window("2013-05-15..2013-07-15")
    assert start == datetime(2013, 5, 15, 0, 0, 0, tzinfo=UTC)
    assert end == datetime(2013, 7, 15, 23, 59, 59, tzinfo=UTC)
    _, precise = parse_window("2013-05-15..2013-07-15T12:00:00Z")
    assert precise == datetime(2013, 7, 15, 12, 0, 0, tzinfo=UTC)


def test_parse_window_rejects_bad_specs():
    with pytest.raises(ValueError):
        parse_window("2013-05-15")
    with pytest.raises(ValueError):
        parse_window("2013-07-15..2013-05-15")


def _write_jsonl(path, records):
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def test_load_corpus_jsonl(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(
        path,
        [
            {"id": "a", "ts": "2013-05-20T10:00:00Z", "text": "hej", "tags": ["#Svpol", "husby"]},
            {"id": "b", "ts": "2013-05-21T10:00:00Z", "text": "", "tags": [], "source": "forum_post"},
        ],
    )
    corpus, report = load_corpus(path)
    assert len(corpus) == 2
    assert corpus.documents[0].hashtags == ("svpol", "husby")
    assert corpus.documents[1].source == "forum_post"
    assert report.records_read == 2
    assert report.records_kept == 2
    assert report.records_dropped == 0


def test_load_corpus_window_drops_and_reports(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(
        path,
        [
            {"id": "a", "ts": "2013-05-20T10:00:00Z", "text": ""},
            {"id": "b", "ts": "2013-08-01T10:00:00Z", "text": ""},
        ],
    )
    window = parse_window("2013-05-15..2013-07-15")
    corpus, report = load_corpus(path, window=window)
    assert [d.id for d in corpus] == ["a"]
    assert report.dropped["out_of_window"] == 1
    assert "out_of_window" in report.as_table()
    assert corpus.window == window


def test_load_corpus_duplicate_id_names_both_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(
        path,
        [
            {"id": "a", "ts": "2013-05-20T10:00:00Z", "text": ""},
            {"id": "a", "ts": "2013-05-21T10:00:00Z", "text": ""},
        ],
    )
    with pytest.raises(DataError, match=r"line 2: duplicate id 'a' \(first seen at line 1\)"):
        load_corpus(path)


def test_load_corpus_malformed_field_has_line_number(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(path, [{"id": "a", "ts": "not a time", "text": ""}])
    with pytest.raises(DataError, match="line 1: malformed field 'ts'"):
        load_corpus(path)


def test_load_corpus_invalid_json_and_missing_file(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("{broken\n", encoding="utf-8")
    with pytest.raises(DataError, match="line 1: invalid JSON"):
        load_corpus(path)
    with pytest.raises(DataError, match="not found"):
        load_corpus(tmp_path / "nope.jsonl")


def test_load_corpus_empty_after_filter(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(path, [{"id": "a", "ts": "2013-01-01T00:00:00Z", "text": ""}])
    with pytest.raises(DataError, match="empty corpus"):
        load_corpus(path, window=parse_window("2013-05-15..2013-07-15"))


def test_load_corpus_csv_with_pipe_tags(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text(
        "id,ts,text,tags,lang,source\n"
        'a,2013-05-20T10:00:00Z,"hej, hej",svpol|husby,sv,tweet\n'
        "b,2013-05-21T10:00:00Z,post,,pl,forum_post\n",
        encoding="utf-8",
    )
    corpus, _ = load_corpus(path, fmt="csv")
    assert corpus.documents[0].hashtags == ("svpol", "husby")
    assert corpus.documents[0].text == "hej, hej"
    assert corpus.documents[1].hashtags == ()


def test_load_corpus_csv_missing_header(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("id,text\na,x\n", encoding="utf-8")
    with pytest.raises(DataError, match="missing columns"):
        load_corpus(path, fmt="csv")


def test_load_corpus_aliases_merge_tags(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_jsonl(
        path,
        [{"id": "a", "ts": "2013-05-20T10:00:00Z", "text": "", "tags": ["Stkhlmriot", "svpol"]}],
    )
    corpus, _ = load_corpus(path, aliases={"stkhlmriot": "sthlmriot"})
    assert corpus.documents[0].hashtags == ("sthlmriot", "svpol")


@pytest.mark.parametrize("fmt", ["jsonl", "csv"])
def test_write_corpus_round_trip(tmp_path, fmt):
    docs = [
        make_doc("a", day=0, text="żółć på gatan", tags=("svpol", "husby"), lang="sv"),
        make_doc("b", day=1, text="x", tags=(), source="forum_post"),
    ]
    corpus = Corpus.from_documents(docs)
    path = tmp_path / f"out.{fmt}"
    write_corpus(corpus, path, fmt=fmt)
    loaded, _ = load_corpus(path, fmt=fmt, window=corpus.window)
    assert loaded == corpus


def test_filter_multi_tag():
    corpus = Corpus.from_documents(
        [
            make_doc("a", tags=("svpol", "husby")),
            make_doc("b", tags=("svpol",)),
            make_doc("c", tags=()),
        ]
    )
    filtered = filter_multi_tag(corpus, 2)
    assert [d.id for d in filtered] == ["a"]
    assert filtered.window == corpus.window
    with pytest.raises(ValueError):
        filter_multi_tag(corpus, 0)
