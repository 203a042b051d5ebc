"""Model outputs: ranked term tables, document-topic tables, and the JSON
payloads behind the intertopic-map and metadata-distribution views."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .corpus import BowCorpus, Dictionary
from .lda import LdaModel
from .textprep import Document

SCHEMA_VERSION = 1
DEFAULT_LAMBDA_GRID = tuple(i / 10 for i in range(11))


class OutputError(ValueError):
    pass


def format_percent(share: float) -> str:
    """Render a share in [0, 1] as a percentage, half-up to two decimals."""
    value = (Decimal(share) * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return f"{value}%"


@dataclass(frozen=True)
class TermsXTopics:
    """Per topic, the top terms ranked by within-topic probability."""

    topics: tuple[tuple[tuple[str, float], ...], ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["topic", "rank", "term", "probability"])
        for k, ranked in enumerate(self.topics, start=1):
            for rank, (term, prob) in enumerate(ranked, start=1):
                writer.writerow([k, rank, term, repr(prob)])
        return buf.getvalue()


@dataclass(frozen=True)
class DocsXTopics:
    """One row per document: metadata, topic shares, dominant topic (1-based)."""

    doc_ids: tuple[str, ...]
    metadata_columns: tuple[str, ...]
    metadata_rows: tuple[tuple[str, ...], ...]
    theta: np.ndarray
    dominant: tuple[int, ...]

    @property
    def num_topics(self) -> int:
        return self.theta.shape[1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        topic_cols = [f"topic_{k}" for k in range(1, self.num_topics + 1)]
        writer.writerow(["doc_id", *self.metadata_columns, *topic_cols, "dominant_topic"])
        for i, doc_id in enumerate(self.doc_ids):
            row = [doc_id, *self.metadata_rows[i]]
            row += [repr(float(x)) for x in self.theta[i]]
            row.append(self.dominant[i])
            writer.writerow(row)
        return buf.getvalue()


def terms_x_topics(model: LdaModel, dictionary: Dictionary, n: int = 30) -> TermsXTopics:
    """Top min(n, V) terms per topic; ties broken by ascending term id."""
    if model.vocab_size != dictionary.size:
        raise OutputError(
            f"model vocabulary size {model.vocab_size} != dictionary size {dictionary.size}"
        )
    terms = dictionary.id_to_term
    limit = min(n, dictionary.size)
    topics = []
    for row in model.phi:
        order = sorted(range(len(terms)), key=lambda w: (-row[w], w))[:limit]
        topics.append(tuple((terms[w], float(row[w])) for w in order))
    return TermsXTopics(topics=tuple(topics))


def docs_x_topics(model: LdaModel, documents: list[Document]) -> DocsXTopics:
    """Pair each document (by position) with its topic-share row."""
    if len(documents) != model.num_docs:
        raise OutputError(
            f"{len(documents)} documents but the model has {model.num_docs} theta rows"
        )
    columns = sorted({key for d in documents for key in d.metadata})
    rows = tuple(
        tuple(d.metadata.get(c, "") for c in columns) for d in documents
    )
    dominant = tuple(int(np.argmax(r)) + 1 for r in model.theta)
    return DocsXTopics(
        doc_ids=tuple(d.id for d in documents),
        metadata_columns=tuple(columns),
        metadata_rows=rows,
        theta=model.theta.copy(),
        dominant=dominant,
    )


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """JSD with natural log; symmetric, bounded by ln 2."""
    m = 0.5 * (p + q)

    def kl(a):
        mask = a > 0
        return float(np.sum(a[mask] * np.log(a[mask] / m[mask])))

    return max(0.0, 0.5 * kl(np.asarray(p, dtype=float)) + 0.5 * kl(np.asarray(q, dtype=float)))


def _mds_2d(dist: np.ndarray) -> np.ndarray:
    """Classical MDS: double-centered squared distances, top-2 eigenpairs.

    Negative eigenvalues (the divergence is not Euclidean) clamp to zero;
    each axis's sign is fixed by forcing its first nonzero coordinate
    non-negative.
    """
    n = dist.shape[0]
    if n == 1:
        return np.zeros((1, 2))
    if n == 2:
        half = dist[0, 1] / 2.0
        return np.array([[half, 0.0], [-half, 0.0]])
    centering = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * centering @ (dist**2) @ centering
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, i in enumerate(order):
        scale = np.sqrt(max(float(evals[i]), 0.0))
        vec = evecs[:, i].copy()
        for x in vec:
            if abs(x) > 1e-12:
                if x < 0:
                    vec = -vec
                break
        coords[:, axis] = vec * scale
    return coords


def intertopic_map(model: LdaModel) -> tuple[np.ndarray, np.ndarray]:
    """2D topic coordinates plus the pairwise divergence matrix behind them."""
    k = model.num_topics
    dist = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d = jensen_shannon(model.phi[i], model.phi[j])
            dist[i, j] = dist[j, i] = d
    return _mds_2d(dist), dist


def _corpus_term_probabilities(corpus: BowCorpus, dictionary: Dictionary) -> np.ndarray:
    totals = np.zeros(dictionary.size, dtype=np.int64)
    for vec in corpus.vectors:
        for term_id, count in vec:
            totals[term_id] += count
    if (totals == 0).any():
        missing = dictionary.id_to_term[int(np.argmin(totals > 0))]
        raise OutputError(
            f"term {missing!r} has zero corpus frequency; dictionary and corpus disagree"
        )
    return totals / totals.sum()


def relevance_table(
    model: LdaModel,
    corpus: BowCorpus,
    dictionary: Dictionary,
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID,
    top_r: int = 30,
) -> list[list[list[tuple[str, float]]]]:
    """Top terms per topic per lambda under
    r(w, k | lambda) = lambda*log(phi_kw) + (1-lambda)*log(phi_kw / p_w).

    At lambda=1 the ranking reduces to the plain phi ranking; at lambda=0 it
    ranks by lift. Ties break by ascending term id.
    """
    p_w = _corpus_term_probabilities(corpus, dictionary)
    terms = dictionary.id_to_term
    log_p = np.log(p_w)
    limit = min(top_r, dictionary.size)
    table = []
    for row in model.phi:
        log_phi = np.log(row)
        log_lift = log_phi - log_p
        per_lambda = []
        for lam in lambda_grid:
            r = lam * log_phi + (1.0 - lam) * log_lift
            order = sorted(range(len(terms)), key=lambda w: (-r[w], w))[:limit]
            per_lambda.append([(terms[w], float(r[w])) for w in order])
        table.append(per_lambda)
    return table


@dataclass(frozen=True)
class LdavisData:
    """Everything the intertopic-map view needs, precomputed server-side."""

    proportions: tuple[float, ...]  # P_k, indexed by topic-1
    topic_order: tuple[int, ...]  # 1-based topic ids, P_k descending
    coords: np.ndarray  # (K, 2)
    distances: np.ndarray  # (K, K) divergence matrix
    lambda_grid: tuple[float, ...]
    term_table: list  # [topic][lambda_index] -> [(term, relevance), ...]
    default_terms: tuple[tuple[str, float], ...]  # corpus-wide terms by p_w

    def to_json(self) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "ldavis",
            "k": len(self.proportions),
            "proportions": list(self.proportions),
            "topic_order": list(self.topic_order),
            "coords": [[float(x), float(y)] for x, y in self.coords],
            "distances": [[float(v) for v in row] for row in self.distances],
            "lambda_grid": list(self.lambda_grid),
            "term_table": [
                [[[term, value] for term, value in ranking] for ranking in per_lambda]
                for per_lambda in self.term_table
            ],
            "default_terms": [[term, value] for term, value in self.default_terms],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def ldavis_data(
    model: LdaModel,
    corpus: BowCorpus,
    dictionary: Dictionary,
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID,
    top_r: int = 30,
) -> LdavisData:
    """Assemble the intertopic-map payload: layout, marginal topic weights,
    and relevance-ranked term lists over the fixed lambda grid."""
    lengths = np.asarray(corpus.doc_lengths(), dtype=np.float64)
    total = lengths.sum()
    if total <= 0:
        raise OutputError("cannot compute topic proportions on an empty corpus")
    if model.num_docs != corpus.num_docs:
        raise OutputError(
            f"model has {model.num_docs} documents, corpus has {corpus.num_docs}"
        )
    weights = (model.theta * lengths[:, None]).sum(axis=0) / total
    order = sorted(range(model.num_topics), key=lambda k: (-weights[k], k))
    coords, dist = intertopic_map(model)
    p_w = _corpus_term_probabilities(corpus, dictionary)
    terms = dictionary.id_to_term
    by_pw = sorted(range(len(terms)), key=lambda w: (-p_w[w], w))[: min(top_r, len(terms))]
    return LdavisData(
        proportions=tuple(float(w) for w in weights),
        topic_order=tuple(k + 1 for k in order),
        coords=coords,
        distances=dist,
        lambda_grid=tuple(lambda_grid),
        term_table=relevance_table(model, corpus, dictionary, lambda_grid, top_r),
        default_terms=tuple((terms[w], float(p_w[w])) for w in by_pw),
    )


@dataclass(frozen=True)
class MtmGroup:
    value: str
    doc_count: int
    shares: tuple[float, ...]


@dataclass(frozen=True)
class MtmData:
    """Topic shares per metadata group, in natural ascending group order."""

    grouping_key: str
    mode: str
    groups: tuple[MtmGroup, ...]

    def to_json(self) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "mtm",
            "grouping_key": self.grouping_key,
            "mode": self.mode,
            "k": len(self.groups[0].shares) if self.groups else 0,
            "groups": [
                {
                    "value": g.value,
                    "doc_count": g.doc_count,
                    "shares": list(g.shares),
                }
                for g in self.groups
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


_UNKNOWN_GROUP = "unknown"


def _natural_key(value: str):
    parts = re.split(r"(\d+)", value)
    return [(0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != ""]


def mtm_data(table: DocsXTopics, grouping_key: str, mode: str = "dominant") -> MtmData:
    """Group documents by a metadata attribute and compute per-group topic shares.

    dominant mode counts each document under its dominant topic; mean-theta
    averages the full theta rows. Documents lacking the attribute collect
    under the reserved group "unknown", sorted after all real groups.
    """
    if mode not in ("dominant", "mean-theta"):
        raise OutputError(f"unknown mtm mode: {mode!r}")
    grouping_key = grouping_key.lower()
    if grouping_key not in table.metadata_columns:
        raise OutputError(
            f"metadata attribute {grouping_key!r} is absent from every document"
        )
    col = table.metadata_columns.index(grouping_key)
    num_topics = table.num_topics

    members: dict[str, list[int]] = {}
    for i in range(len(table.doc_ids)):
        value = table.metadata_rows[i][col] or _UNKNOWN_GROUP
        members.setdefault(value, []).append(i)

    ordered = sorted((v for v in members if v != _UNKNOWN_GROUP), key=_natural_key)
    if _UNKNOWN_GROUP in members:
        ordered.append(_UNKNOWN_GROUP)

    groups = []
    for value in ordered:
        rows = members[value]
        if mode == "dominant":
            counts = [0] * num_topics
            for i in rows:
                counts[table.dominant[i] - 1] += 1
            shares = tuple(c / len(rows) for c in counts)
        else:
            shares = tuple(float(x) for x in table.theta[rows].mean(axis=0))
        groups.append(MtmGroup(value=value, doc_count=len(rows), shares=shares))
    return MtmData(grouping_key=grouping_key, mode=mode, groups=tuple(groups))
