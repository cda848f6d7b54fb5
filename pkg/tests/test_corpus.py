import numpy as np
import pytest

from lglda.corpus import (
    Corpus,
    CorpusFormatError,
    Document,
    Vocabulary,
    ingest,
    split,
    write_canonical,
)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def test_ingest_drops_short_documents(tmp_path):
    path = write_lines(
        tmp_path / "c.txt",
        [
            "locA\td1\tw1 w2 w3 w4 w5",
            "locA\td2\tw1 w2",
            "locB\td3\tw2 w3 w4 w6",
        ],
    )
    corpus = ingest(path, min_tokens=3)
    assert corpus.num_documents == 2
    assert {d.doc_id for d in corpus.documents} == {"d1", "d3"}


def test_ingest_minimal_single_doc(tmp_path):
    path = write_lines(tmp_path / "c.txt", ["locA\td1\tw w w"])
    corpus = ingest(path, min_tokens=3)
    assert corpus.num_locations == 1
    assert corpus.num_words == 1
    assert corpus.num_documents == 1
    assert len(corpus.documents[0]) == 3


def test_ingest_redensifies_location_ids(tmp_path):
    # locB's only document is filtered out, so its id must disappear
    path = write_lines(
        tmp_path / "c.txt",
        [
            "locA\td1\ta b c",
            "locB\td2\ta b",
            "locC\td3\tc d e",
        ],
    )
    corpus = ingest(path, min_tokens=3)
    assert corpus.num_locations == 2
    assert corpus.location_names == ["locA", "locC"]
    used = sorted({d.location_id for d in corpus.documents})
    assert used == list(range(corpus.num_locations))


def test_ingest_reports_malformed_line_number(tmp_path):
    path = write_lines(
        tmp_path / "c.txt",
        ["locA\td1\ta b c", "locA only two fields", "locB\td2\ta b c"],
    )
    with pytest.raises(CorpusFormatError) as err:
        ingest(path, min_tokens=1)
    assert err.value.line_number == 2
    assert "line 2" in str(err.value)


def test_ingest_rejects_duplicate_doc_ids(tmp_path):
    path = write_lines(
        tmp_path / "c.txt", ["locA\td1\ta b c", "locA\td1\td e f"]
    )
    with pytest.raises(CorpusFormatError):
        ingest(path, min_tokens=1)


def test_ingest_empty_after_filtering(tmp_path):
    path = write_lines(tmp_path / "c.txt", ["locA\td1\ta b"])
    with pytest.raises(ValueError, match="no documents"):
        ingest(path, min_tokens=3)


def test_ingest_blank_lines_ignored(tmp_path):
    path = write_lines(tmp_path / "c.txt", ["", "locA\td1\ta b c", "   "])
    corpus = ingest(path, min_tokens=3)
    assert corpus.num_documents == 1


def test_vocabulary_is_exactly_surviving_tokens(tmp_path):
    path = write_lines(
        tmp_path / "c.txt",
        ["locA\td1\tred green blue", "locA\td2\tkept out"],
    )
    corpus = ingest(path, min_tokens=3)
    assert set(corpus.vocabulary.words) == {"red", "green", "blue"}


def test_token_count_matches_surviving_lines(tmp_path):
    rng = np.random.default_rng(0)
    lines = []
    expected = 0
    for i in range(30):
        n = int(rng.integers(1, 9))
        toks = " ".join(f"w{int(rng.integers(12))}" for _ in range(n))
        lines.append(f"loc{int(rng.integers(3))}\td{i}\t{toks}")
        if n >= 3:
            expected += n
    path = write_lines(tmp_path / "c.txt", lines)
    corpus = ingest(path, min_tokens=3)
    assert corpus.num_tokens == expected


def test_canonical_round_trip_is_identity(tmp_path):
    path = write_lines(
        tmp_path / "c.txt",
        [
            "zurich\tz2\tc a b",
            "ankara\ta1\tb b a",
            "zurich\tz1\ta c c c",
            "milan\tm1\td d d",
        ],
    )
    corpus = ingest(path, min_tokens=3)
    out = tmp_path / "canonical.txt"
    write_canonical(corpus, out)
    again = ingest(out, min_tokens=3)
    assert again == corpus
    # and the emitted form is a fixed point
    out2 = tmp_path / "canonical2.txt"
    write_canonical(again, out2)
    assert out.read_bytes() == out2.read_bytes()


def make_corpus(num_locs=2, docs_per_loc=5, tokens=4, num_words=6):
    vocab = Vocabulary([f"w{i}" for i in range(num_words)])
    rng = np.random.default_rng(1)
    docs = []
    for l in range(num_locs):
        for j in range(docs_per_loc):
            ids = rng.integers(0, num_words, size=tokens).astype(np.int32)
            docs.append(Document(f"d{l}-{j}", l, ids))
    names = [f"loc{l}" for l in range(num_locs)]
    return Corpus(vocab, docs, num_locs, names)


def test_split_zero_fraction_degenerate():
    corpus = make_corpus()
    train, test = split(corpus, 0.0, seed=3)
    assert train.num_documents == corpus.num_documents
    assert test.num_documents == 0


def test_split_counts_and_location_floor():
    corpus = make_corpus(num_locs=2, docs_per_loc=5)
    train, test = split(corpus, 0.2, seed=3)
    assert test.num_documents == 2
    assert train.num_documents == 8
    for l in range(2):
        assert sum(1 for d in train.documents if d.location_id == l) >= 1
    # both halves share the full vocabulary
    assert train.vocabulary is corpus.vocabulary
    assert test.vocabulary is corpus.vocabulary


def test_split_deterministic():
    corpus = make_corpus()
    a = split(corpus, 0.3, seed=11)
    b = split(corpus, 0.3, seed=11)
    assert [d.doc_id for d in a[1].documents] == [d.doc_id for d in b[1].documents]


def test_split_fraction_too_large():
    corpus = make_corpus(num_locs=2, docs_per_loc=1)
    with pytest.raises(ValueError, match="training"):
        split(corpus, 0.6, seed=0)


def test_split_rejects_bad_fraction():
    corpus = make_corpus()
    with pytest.raises(ValueError):
        split(corpus, 1.0, seed=0)
    with pytest.raises(ValueError):
        split(corpus, -0.1, seed=0)
