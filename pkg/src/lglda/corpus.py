"""Geo-tagged corpus data model, file ingestion, and train/test splitting.

The on-disk format is one document per line:

    <location_name> TAB <doc_id> TAB <token> ( <token>)*

Blank lines are ignored.  Documents are stored in canonical order (location
names lexicographic, then doc_id), so re-ingesting the canonical output of
:func:`write_canonical` reproduces the corpus exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


class CorpusFormatError(ValueError):
    """Malformed corpus input; carries the offending 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class Vocabulary:
    """Bijection between word strings and dense integer ids in [0, W)."""

    __slots__ = ("words", "index")

    def __init__(self, words):
        self.words = list(words)
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("vocabulary contains duplicate words")

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.words == other.words

    def sha256(self) -> str:
        """Stable hash of the id-ordered word list, used to pair models with corpora."""
        h = hashlib.sha256()
        for w in self.words:
            h.update(w.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


@dataclass
class Document:
    doc_id: str
    location_id: int
    tokens: np.ndarray  # int32 word ids, length >= 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Document)
            and self.doc_id == other.doc_id
            and self.location_id == other.location_id
            and np.array_equal(self.tokens, other.tokens)
        )

    def __len__(self) -> int:
        return int(self.tokens.shape[0])


class Corpus:
    """Immutable collection of location-tagged documents over one vocabulary."""

    def __init__(self, vocabulary: Vocabulary, documents, num_locations: int, location_names):
        self.vocabulary = vocabulary
        self.documents = list(documents)
        self.num_locations = int(num_locations)
        self.location_names = list(location_names)
        if len(self.location_names) != self.num_locations:
            raise ValueError("location_names length does not match num_locations")
        w = len(vocabulary)
        for doc in self.documents:
            if len(doc) < 1:
                raise ValueError(f"document {doc.doc_id!r} has no tokens")
            if not 0 <= doc.location_id < self.num_locations:
                raise ValueError(f"document {doc.doc_id!r} has out-of-range location id")
            if doc.tokens.size and int(doc.tokens.max()) >= w:
                raise ValueError(f"document {doc.doc_id!r} has out-of-range word id")

    @property
    def num_documents(self) -> int:
        return len(self.documents)

    @property
    def num_words(self) -> int:
        return len(self.vocabulary)

    @property
    def num_tokens(self) -> int:
        return sum(len(d) for d in self.documents)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Corpus)
            and self.vocabulary == other.vocabulary
            and self.num_locations == other.num_locations
            and self.location_names == other.location_names
            and self.documents == other.documents
        )

    def flatten(self):
        """Token-level arrays (word, document, location), in document order."""
        t = self.num_tokens
        token_word = np.empty(t, dtype=np.int32)
        token_doc = np.empty(t, dtype=np.int32)
        token_loc = np.empty(t, dtype=np.int32)
        pos = 0
        for d, doc in enumerate(self.documents):
            n = len(doc)
            token_word[pos : pos + n] = doc.tokens
            token_doc[pos : pos + n] = d
            token_loc[pos : pos + n] = doc.location_id
            pos += n
        return token_word, token_doc, token_loc


def _parse_line(line: str, lineno: int):
    parts = line.split("\t")
    if len(parts) != 3:
        raise CorpusFormatError(
            f"expected 3 tab-separated fields, got {len(parts)}", lineno
        )
    location_name, doc_id, token_field = parts
    if not location_name:
        raise CorpusFormatError("empty location name", lineno)
    if not doc_id:
        raise CorpusFormatError("empty doc id", lineno)
    tokens = token_field.split()
    if not tokens:
        raise CorpusFormatError("document has no tokens", lineno)
    return location_name, doc_id, tokens


def ingest(path, min_tokens: int = 3) -> Corpus:
    """Read a corpus file, dropping documents shorter than ``min_tokens``.

    The vocabulary is built only from surviving documents and location ids
    are re-densified, so the returned corpus always satisfies the density
    invariants (every location id in [0, L) backed by at least one document).
    """
    if min_tokens < 1:
        raise ValueError("min_tokens must be >= 1")
    raw = []
    seen_ids = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            location_name, doc_id, tokens = _parse_line(line, lineno)
            if (location_name, doc_id) in seen_ids:
                raise CorpusFormatError(
                    f"duplicate doc id {doc_id!r} at location {location_name!r}", lineno
                )
            seen_ids.add((location_name, doc_id))
            raw.append((location_name, doc_id, tokens))

    survivors = [r for r in raw if len(r[2]) >= min_tokens]
    if not survivors:
        raise ValueError(f"no documents with >= {min_tokens} tokens in {path}")

    location_names = sorted({r[0] for r in survivors})
    loc_index = {name: i for i, name in enumerate(location_names)}
    survivors.sort(key=lambda r: (loc_index[r[0]], r[1]))

    words: list[str] = []
    word_index: dict[str, int] = {}
    documents = []
    for location_name, doc_id, tokens in survivors:
        ids = np.empty(len(tokens), dtype=np.int32)
        for j, tok in enumerate(tokens):
            wid = word_index.get(tok)
            if wid is None:
                wid = len(words)
                word_index[tok] = wid
                words.append(tok)
            ids[j] = wid
        documents.append(Document(doc_id, loc_index[location_name], ids))

    return Corpus(Vocabulary(words), documents, len(location_names), location_names)


def write_canonical(corpus: Corpus, path) -> None:
    """Emit the line format with locations sorted lexicographically, then doc_id."""
    order = sorted(
        range(corpus.num_documents),
        key=lambda i: (
            corpus.location_names[corpus.documents[i].location_id],
            corpus.documents[i].doc_id,
        ),
    )
    words = corpus.vocabulary.words
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            doc = corpus.documents[i]
            toks = " ".join(words[t] for t in doc.tokens)
            fh.write(f"{corpus.location_names[doc.location_id]}\t{doc.doc_id}\t{toks}\n")


def split(corpus: Corpus, held_out_fraction: float, seed: int):
    """Deterministic per-location split into (train, test) corpora.

    The held-out count per location is round(fraction * n_docs); every
    location must keep at least one training document.  Both halves share
    the full corpus vocabulary and location table.
    """
    if not 0.0 <= held_out_fraction < 1.0:
        raise ValueError("held_out_fraction must be in [0, 1)")
    rng = np.random.default_rng(seed)
    by_location: list[list[int]] = [[] for _ in range(corpus.num_locations)]
    for i, doc in enumerate(corpus.documents):
        by_location[doc.location_id].append(i)

    held = set()
    for l, doc_indices in enumerate(by_location):
        n = len(doc_indices)
        if n == 0:
            continue
        n_held = int(held_out_fraction * n + 0.5)
        if n_held >= n:
            raise ValueError(
                f"held_out_fraction {held_out_fraction} leaves no training "
                f"documents at location {corpus.location_names[l]!r}"
            )
        if n_held:
            chosen = rng.choice(n, size=n_held, replace=False)
            held.update(doc_indices[j] for j in chosen)

    train_docs = [d for i, d in enumerate(corpus.documents) if i not in held]
    test_docs = [d for i, d in enumerate(corpus.documents) if i in held]
    make = lambda docs: Corpus(
        corpus.vocabulary, docs, corpus.num_locations, corpus.location_names
    )
    return make(train_docs), make(test_docs)
