"""Term dictionary and bag-of-words corpus construction."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass

from .textprep import TokenizedDoc


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Dictionary:
    """Bijective term <-> dense integer id map with frequency statistics.

    Ids are assigned by sorting the retained terms lexicographically and
    numbering 0..V-1, so the mapping is independent of document order.
    """

    term_to_id: dict[str, int]
    doc_freq: tuple[int, ...]
    collection_freq: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.term_to_id)

    @property
    def id_to_term(self) -> tuple[str, ...]:
        terms = [""] * len(self.term_to_id)
        for term, i in self.term_to_id.items():
            terms[i] = term
        return tuple(terms)

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_id


@dataclass(frozen=True)
class BowCorpus:
    """Ordered sparse term-count vectors, one per document.

    Each vector is a tuple of (term_id, count) pairs with strictly
    increasing term ids. Documents whose every token is out of vocabulary
    keep an empty vector so row positions stay aligned with the source
    collection.
    """

    doc_ids: tuple[str, ...]
    vectors: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def num_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def total_tokens(self) -> int:
        return sum(c for vec in self.vectors for _, c in vec)

    def doc_lengths(self) -> list[int]:
        return [sum(c for _, c in vec) for vec in self.vectors]


def build_dictionary(
    docs: list[TokenizedDoc],
    min_df: int = 1,
    max_df_fraction: float = 1.0,
    keep_n: int | None = None,
) -> Dictionary:
    """Count frequencies, apply document-frequency filters, assign dense ids.

    Terms with doc_freq < min_df or doc_freq > max_df_fraction * D are
    dropped; if keep_n is set, only the keep_n highest-collection-frequency
    terms survive (ties broken lexicographically).
    """
    if not docs:
        raise CorpusError("cannot build a dictionary from an empty document list")
    if min_df < 1:
        raise CorpusError(f"min_df must be >= 1, got {min_df}")
    if not (0.0 < max_df_fraction <= 1.0):
        raise CorpusError(f"max_df_fraction must be in (0, 1], got {max_df_fraction}")

    doc_freq: Counter[str] = Counter()
    coll_freq: Counter[str] = Counter()
    for doc in docs:
        counts = Counter(doc.tokens)
        coll_freq.update(counts)
        doc_freq.update(counts.keys())

    num_docs = len(docs)
    max_df = max_df_fraction * num_docs
    kept = [t for t, df in doc_freq.items() if min_df <= df <= max_df]
    if keep_n is not None and len(kept) > keep_n:
        kept.sort(key=lambda t: (-coll_freq[t], t))
        kept = kept[:keep_n]
    if not kept:
        raise CorpusError(
            "all terms removed by frequency filters "
            f"(min_df={min_df}, max_df_fraction={max_df_fraction}, keep_n={keep_n})"
        )
    kept.sort()
    term_to_id = {t: i for i, t in enumerate(kept)}
    return Dictionary(
        term_to_id=term_to_id,
        doc_freq=tuple(doc_freq[t] for t in kept),
        collection_freq=tuple(coll_freq[t] for t in kept),
    )


def to_bow(doc: TokenizedDoc, dictionary: Dictionary) -> tuple[tuple[int, int], ...]:
    """Aggregate a token list into (term_id, count) pairs sorted by id.

    Out-of-vocabulary tokens are dropped silently.
    """
    if dictionary.size == 0:
        raise CorpusError("dictionary is empty")
    counts = Counter(
        dictionary.term_to_id[t] for t in doc.tokens if t in dictionary.term_to_id
    )
    return tuple(sorted(counts.items()))


def build_corpus(docs: list[TokenizedDoc], dictionary: Dictionary) -> BowCorpus:
    """Bag-of-words vectors for every document, in document order."""
    return BowCorpus(
        doc_ids=tuple(d.doc_id for d in docs),
        vectors=tuple(to_bow(d, dictionary) for d in docs),
    )


def dictionary_to_csv(dictionary: Dictionary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "term", "doc_freq", "collection_freq"])
    for i, term in enumerate(dictionary.id_to_term):
        writer.writerow([i, term, dictionary.doc_freq[i], dictionary.collection_freq[i]])
    return buf.getvalue()


def corpus_to_text(corpus: BowCorpus) -> str:
    """One line per document: doc_id followed by term_id:count pairs."""
    lines = []
    for doc_id, vec in zip(corpus.doc_ids, corpus.vectors):
        parts = [doc_id] + [f"{t}:{c}" for t, c in vec]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
