"""Corpus ingestion, text cleaning, tokenization, labeling, and splits.

The input format is a UTF-8 CSV with a header row and columns
``id, statement, status`` (RFC 4180 quoting; a leading unnamed column is
accepted as the id column because exported corpora often ship the frame
index that way). Rows whose statement is empty after stripping are
dropped and counted rather than rejected.

Cleaning and normalization are regex and table driven, deterministic,
and idempotent; see ``lexicon`` for the frozen stopword list and
lemmatizer rules.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .lexicon import STOPWORDS, lemmatize

BINARY_NORMAL_STATUS = "Normal"

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_HTML_TAG_RE = re.compile(r"<[^>]*>")
_HTML_ENTITY_RE = re.compile(r"&#?\w+;")
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_TOKEN_RE = re.compile(r"#\w+")
# Keeps letters, digits, whitespace, and apostrophes; strips everything
# else, including leftover '#' markers.
_CHAR_RE = re.compile(r"[^A-Za-z0-9'\s]")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class RawRecord:
    """One CSV row as read from disk."""

    id: str
    statement: str
    status: str


@dataclass(frozen=True)
class Document:
    """A record after cleaning, tokenization, and label mapping."""

    id: str
    raw: str
    status: str
    tokens: tuple[str, ...]
    label: int


@dataclass(frozen=True)
class LoadResult:
    records: list[RawRecord]
    dropped_empty: int


def load_csv(path: str) -> LoadResult:
    """Read a corpus CSV, dropping (and counting) empty-statement rows.

    Raises DataError for a missing file, missing required columns,
    rows with the wrong field count, or duplicate ids.
    """
    try:
        handle = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise DataError(f"cannot open corpus file {path!r}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"corpus file {path!r} is empty") from None
        columns = {name.strip(): i for i, name in enumerate(header)}
        if "id" not in columns and header and header[0].strip() == "":
            columns["id"] = 0
        for required in ("id", "statement", "status"):
            if required not in columns:
                raise DataError(f"missing required column: {required}")
        id_col = columns["id"]
        stmt_col = columns["statement"]
        status_col = columns["status"]
        records: list[RawRecord] = []
        seen: set[str] = set()
        dropped = 0
        for row in reader:
            if len(row) != len(header):
                raise DataError(
                    f"malformed row at line {reader.line_num}: expected "
                    f"{len(header)} fields, found {len(row)}"
                )
            statement = row[stmt_col]
            if not statement.strip():
                dropped += 1
                continue
            rec_id = row[id_col]
            if rec_id in seen:
                raise DataError(
                    f"duplicate id {rec_id!r} at line {reader.line_num}"
                )
            seen.add(rec_id)
            records.append(RawRecord(rec_id, statement, row[status_col]))
    return LoadResult(records, dropped)


def clean_text(raw: str, drop_hashtags: bool = False) -> str:
    """Strip URLs, HTML, @mentions, and hashtag markers; collapse whitespace.

    By default only the '#' marker is removed and the hashtag word is
    kept; with drop_hashtags=True the whole token goes. The result
    contains only letters, digits, apostrophes, and single spaces, and
    the function is idempotent.
    """
    text = _URL_RE.sub(" ", raw)
    text = _HTML_TAG_RE.sub(" ", text)
    text = _HTML_ENTITY_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    if drop_hashtags:
        text = _HASHTAG_TOKEN_RE.sub(" ", text)
    text = _CHAR_RE.sub("", text)
    return _WS_RE.sub(" ", text).strip()


def normalize(text: str) -> list[str]:
    """Tokenize cleaned text: lowercase, drop stopwords, lemmatize.

    Expects input already passed through clean_text. Stopwords are
    filtered before lemmatization, and again afterwards because a suffix
    rule can land on a stopword (e.g. a plural collapsing onto one);
    the output therefore never contains a stopword.
    """
    lemmas = (
        lemmatize(token)
        for token in (t.lower() for t in text.split())
        if token not in STOPWORDS
    )
    return [lemma for lemma in lemmas if lemma not in STOPWORDS]


@dataclass(frozen=True)
class LabelScheme:
    """Mapping from corpus status strings to dense class ids 0..K-1."""

    kind: str  # "binary" | "multiclass"
    names: tuple[str, ...]
    mapping: dict[str, int] = field(hash=False)

    @property
    def n_classes(self) -> int:
        return len(self.names)

    @classmethod
    def binary(cls, statuses) -> "LabelScheme":
        """Normal -> 0, every other observed status -> 1."""
        mapping = {
            status: 0 if status == BINARY_NORMAL_STATUS else 1
            for status in set(statuses)
        }
        return cls("binary", (BINARY_NORMAL_STATUS, "Abnormal"), mapping)

    @classmethod
    def multiclass(cls, statuses) -> "LabelScheme":
        """One class per distinct status, ids assigned alphabetically."""
        names = tuple(sorted(set(statuses)))
        if not names:
            raise DataError("cannot build a label scheme from an empty corpus")
        return cls("multiclass", names, {name: i for i, name in enumerate(names)})

    def to_dict(self) -> dict:
        return {"kind": self.kind, "names": list(self.names), "mapping": dict(self.mapping)}

    @classmethod
    def from_dict(cls, data: dict) -> "LabelScheme":
        return cls(data["kind"], tuple(data["names"]), dict(data["mapping"]))


def map_labels(records, scheme: LabelScheme) -> list[int]:
    """Map record statuses to class ids; unknown statuses are an error."""
    labels = []
    for rec in records:
        try:
            labels.append(scheme.mapping[rec.status])
        except KeyError:
            raise DataError(f"unknown status {rec.status!r}") from None
    return labels


def build_documents(
    records, scheme: LabelScheme, drop_hashtags: bool = False
) -> list[Document]:
    labels = map_labels(records, scheme)
    return [
        Document(
            id=rec.id,
            raw=rec.statement,
            status=rec.status,
            tokens=tuple(normalize(clean_text(rec.statement, drop_hashtags))),
            label=label,
        )
        for rec, label in zip(records, labels)
    ]


@dataclass(frozen=True)
class DatasetSplit:
    """Index partition of a corpus into train / validation / test."""

    train: tuple[int, ...]
    validation: tuple[int, ...]
    test: tuple[int, ...]
    seed: int

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "train": list(self.train),
            "validation": list(self.validation),
            "test": list(self.test),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetSplit":
        return cls(
            tuple(data["train"]),
            tuple(data["validation"]),
            tuple(data["test"]),
            int(data["seed"]),
        )


def _split_sizes(n: int) -> tuple[int, int, int]:
    # Two-step shares: 20% test first, then a quarter of the remainder
    # for validation, which lands near 60/20/20 overall.
    n_test = round(0.20 * n)
    n_val = round(0.25 * (n - n_test))
    n_train = n - n_test - n_val
    return n_train, n_val, n_test

def _stratified_counts(labels: np.ndarray, total: int) -> np.ndarray:
    # Largest-remainder apportionment so the per-class draws sum to the
    # exact global size while tracking class proportions.
    classes, class_counts = np.unique(labels, return_counts=True)
    exact = class_counts * (total / labels.size)
    base = np.floor(exact).astype(int)
    short = total - base.sum()
    order = np.argsort(-(exact - base), kind="mergesort")
    base[order[:short]] += 1
    return base


def split_dataset(
    n: int,
    seed: int,
    *,
    stratify_labels=None,
) -> DatasetSplit:
    """Partition indices 0..n-1 into train / validation / test.

    Step one draws the test set, step two splits the remainder into
    train and validation. Plain random sampling by default; passing
    stratify_labels switches on per-class proportional sampling.
    Deterministic for a given (n, seed).
    """
    if n < 5:
        raise DataError(f"corpus too small to populate all three splits: n={n}")
    n_train, n_val, n_test = _split_sizes(n)
    if min(n_train, n_val, n_test) < 1:
        raise DataError(f"corpus too small to populate all three splits: n={n}")
    rng = np.random.default_rng(seed)
    if stratify_labels is None:
        perm = rng.permutation(n)
        test = perm[:n_test]
        rest = perm[n_test:]
        perm2 = rest[rng.permutation(rest.size)]
        validation = perm2[:n_val]
        train = perm2[n_val:]
    else:
        labels = np.asarray(stratify_labels)
        if labels.shape != (n,):
            raise DataError("stratify_labels length must match corpus size")
        test_parts, rest_parts = [], []
        per_class_test = _stratified_counts(labels, n_test)
        for cls, take in zip(np.unique(labels), per_class_test):
            members = np.flatnonzero(labels == cls)
            members = members[rng.permutation(members.size)]
            test_parts.append(members[:take])
            rest_parts.append(members[take:])
        test = np.concatenate(test_parts)
        rest = np.concatenate(rest_parts)
        rest_labels = labels[rest]
        val_parts, train_parts = [], []
        per_class_val = _stratified_counts(rest_labels, n_val)
        for cls, take in zip(np.unique(rest_labels), per_class_val):
            members = rest[rest_labels == cls]
            members = members[rng.permutation(members.size)]
            val_parts.append(members[:take])
            train_parts.append(members[take:])
        validation = np.concatenate(val_parts)
        train = np.concatenate(train_parts)
    return DatasetSplit(
        train=tuple(int(i) for i in np.sort(train)),
        validation=tuple(int(i) for i in np.sort(validation)),
        test=tuple(int(i) for i in np.sort(test)),
        seed=seed,
    )
