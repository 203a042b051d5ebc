"""Document ingestion, regex cleaning, stopword removal and tokenization."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import porter

_TOKEN_RE = re.compile(r"[^\W\d_]+", re.UNICODE)  # maximal runs of letters


class TextPrepError(ValueError):
    """Raised for ingestion and tokenization contract violations."""


@dataclass(frozen=True)
class Document:
    """One text unit with an identifier and a string->string metadata map.

    Metadata keys are lowercased on construction so grouping attributes
    ("Year" vs "year") compare consistently.
    """

    id: str
    text: str
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise TextPrepError("document id must be non-empty")
        object.__setattr__(
            self, "metadata", {k.lower(): v for k, v in self.metadata.items()}
        )


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = frozenset()

    def __post_init__(self):
        for w in self.words:
            if w != w.lower() or any(c.isspace() for c in w):
                raise TextPrepError(f"invalid stopword entry: {w!r}")
        object.__setattr__(self, "words", frozenset(self.words))

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words


@dataclass(frozen=True)
class TokenizedDoc:
    doc_id: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class RegexFilter:
    """A pattern whose matches are replaced by a single space."""

    pattern: str

    def compile(self) -> re.Pattern:
        return re.compile(self.pattern)


def load_stopwords(path: str | Path) -> StopwordList:
    """Read a stopword file: one word per line, blank lines and '#' comments ignored."""
    path = Path(path)
    if not path.is_file():
        raise TextPrepError(f"stopword file not found: {path}")
    words = set()
    for lineno, line in enumerate(_read_utf8(path).splitlines(), start=1):
        entry = line.strip()
        if not entry or entry.startswith("#"):
            continue
        if any(c.isspace() for c in entry):
            raise TextPrepError(
                f"{path}:{lineno}: stopword entry contains whitespace: {entry!r}"
            )
        words.add(entry.lower())
    return StopwordList(frozenset(words))


def _read_utf8(path: Path) -> str:
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TextPrepError(f"{path}: not valid UTF-8 ({exc})") from None


def load_documents(
    source: str | Path,
    format: str = "txt-dir",
    *,
    delimiter: str = ",",
    text_column: str = "text",
    id_column: str = "id",
    metadata_columns: list[str] | None = None,
) -> list[Document]:
    """Load documents from a directory of .txt files or a delimited file.

    txt-dir: one Document per *.txt file, id = file stem.
    delimited: one Document per row; header row required; RFC-4180 quoting;
    metadata_columns defaults to every column other than id and text.

    Documents are returned sorted lexicographically by id so downstream
    results do not depend on filesystem or row order.
    """
    source = Path(source)
    if format == "txt-dir":
        if not source.is_dir():
            raise TextPrepError(f"not a directory: {source}")
        docs = []
        for path in sorted(source.glob("*.txt")):
            docs.append(Document(id=path.stem, text=_read_utf8(path)))
    elif format == "delimited":
        if not source.is_file():
            raise TextPrepError(f"not a file: {source}")
        docs = _load_delimited(
            source, delimiter, text_column, id_column, metadata_columns
        )
    else:
        raise TextPrepError(f"unknown document source format: {format!r}")

    seen: dict[str, int] = {}
    for d in docs:
        if d.id in seen:
            raise TextPrepError(f"duplicate document id: {d.id!r}")
        seen[d.id] = 1
    docs.sort(key=lambda d: d.id)
    return docs


def _load_delimited(path, delimiter, text_column, id_column, metadata_columns):
    text = _read_utf8(path)
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    rows = list(reader)
    if not rows:
        raise TextPrepError(f"{path}: empty delimited file")
    header = rows[0]
    for col in [id_column, text_column] + list(metadata_columns or []):
        if col not in header:
            raise TextPrepError(f"{path}: missing column {col!r} in header {header}")
    if metadata_columns is None:
        metadata_columns = [c for c in header if c not in (id_column, text_column)]
    idx = {c: header.index(c) for c in header}
    docs = []
    for rowno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TextPrepError(
                f"{path}:{rowno}: expected {len(header)} fields, got {len(row)}"
            )
        meta = {c: row[idx[c]] for c in metadata_columns}
        docs.append(Document(id=row[idx[id_column]], text=row[idx[text_column]], metadata=meta))
    return docs


def clean_text(text: str, filters: list[RegexFilter]) -> str:
    """Apply regex filters in order, replacing every match with one space."""
    for i, f in enumerate(filters):
        try:
            pattern = f.compile()
        except re.error as exc:
            raise TextPrepError(f"filter {i}: invalid pattern {f.pattern!r}: {exc}") from None
        text = pattern.sub(" ", text)
    return text


def tokenize(
    doc: Document,
    stopwords: StopwordList | None = None,
    *,
    lowercase: bool = True,
    min_token_length: int = 2,
    stem: str = "porter",
) -> TokenizedDoc:
    """Split on non-alphabetic runs, drop short tokens and stopwords, then stem.

    Stopwords are checked before stemming (standard lists contain surface
    forms); the length threshold likewise applies to the pre-stem token, so
    stemming may legitimately shorten a token below it.
    """
    if stem not in ("porter", "none"):
        raise TextPrepError(f"unknown stemmer: {stem!r}")
    out = []
    for raw in _TOKEN_RE.findall(doc.text):
        token = raw.lower() if lowercase else raw
        if len(token) < min_token_length:
            continue
        if stopwords is not None and token in stopwords:
            continue
        if stem == "porter":
            token = porter.stem(token)
        out.append(token)
    return TokenizedDoc(doc_id=doc.id, tokens=tuple(out))


def tokenize_all(
    docs: list[Document],
    stopwords: StopwordList | None = None,
    **options,
) -> list[TokenizedDoc]:
    """Tokenize a collection, preserving document order."""
    return [tokenize(d, stopwords, **options) for d in docs]
