"""Topic-quality metrics: UMass and NPMI coherence, and a multi-K sweep."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .corpus import BowCorpus, Dictionary
from .lda import LdaConfig, train_lda, perplexity
from .textprep import TokenizedDoc

NPMI_EPSILON = 1e-12


class CoherenceError(ValueError):
    pass


@dataclass(frozen=True)
class CoherenceReport:
    metric: str
    per_topic: tuple[float, ...]

    @property
    def mean(self) -> float:
        return sum(self.per_topic) / len(self.per_topic)


@dataclass(frozen=True)
class SweepRow:
    num_topics: int
    coherence_mean: float
    perplexity: float
    seed: int


@dataclass(frozen=True)
class SweepResult:
    metric: str
    rows: tuple[SweepRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["K", "coherence_mean", "perplexity", "seed"])
        for row in self.rows:
            writer.writerow(
                [row.num_topics, repr(row.coherence_mean), repr(row.perplexity), row.seed]
            )
        return buf.getvalue()


def _doc_postings(docs: list[TokenizedDoc]) -> dict[str, set[int]]:
    postings: dict[str, set[int]] = {}
    for i, doc in enumerate(docs):
        for token in set(doc.tokens):
            postings.setdefault(token, set()).add(i)
    return postings


def _check_terms_present(top_terms, postings):
    for topic in top_terms:
        for term in topic:
            if term not in postings:
                raise CoherenceError(
                    f"top term {term!r} occurs in no document; "
                    "the term lists do not match this document set"
                )


def umass_coherence(
    top_terms: list[list[str]], docs: list[TokenizedDoc]
) -> CoherenceReport:
    """Smoothed log conditional document co-occurrence, averaged over pairs.

    For a ranked term list v_1..v_M the topic score is
    sum_{m=2..M} sum_{l<m} log((D(v_m, v_l) + 1) / D(v_l)) divided by the
    number of pairs M(M-1)/2, where D counts documents containing the
    term(s). A single-term topic scores 0 by the empty-sum convention.
    """
    postings = _doc_postings(docs)
    _check_terms_present(top_terms, postings)
    per_topic = []
    for topic in top_terms:
        n = len(topic)
        if n < 2:
            per_topic.append(0.0)
            continue
        score = 0.0
        for m in range(1, n):
            for l in range(m):
                co = len(postings[topic[m]] & postings[topic[l]])
                score += math.log((co + 1.0) / len(postings[topic[l]]))
        per_topic.append(score / (n * (n - 1) / 2))
    return CoherenceReport(metric="umass", per_topic=tuple(per_topic))


def npmi_pair(p_i: float, p_j: float, p_ij: float) -> float:
    """Normalized pointwise mutual information for one term pair.

    Two documented conventions close the formula's gaps: a pair present in
    every document (0/0) scores 0, and a pair that never co-occurs scores
    exactly -1 (the epsilon-smoothed formula only approaches -1, so the
    boundary is pinned instead of smoothed).
    """
    if p_ij >= 1.0:
        return 0.0
    if p_ij <= 0.0:
        return -1.0
    pmi = math.log((p_ij + NPMI_EPSILON) / (p_i * p_j))
    return pmi / -math.log(p_ij + NPMI_EPSILON)


def npmi_coherence(
    top_terms: list[list[str]], docs: list[TokenizedDoc]
) -> CoherenceReport:
    """NPMI with document-proportion probabilities, averaged over pairs."""
    postings = _doc_postings(docs)
    _check_terms_present(top_terms, postings)
    num_docs = len(docs)
    per_topic = []
    for topic in top_terms:
        n = len(topic)
        if n < 2:
            per_topic.append(0.0)
            continue
        score = 0.0
        for m in range(1, n):
            for l in range(m):
                p_m = len(postings[topic[m]]) / num_docs
                p_l = len(postings[topic[l]]) / num_docs
                p_ml = len(postings[topic[m]] & postings[topic[l]]) / num_docs
                score += npmi_pair(p_m, p_l, p_ml)
        per_topic.append(score / (n * (n - 1) / 2))
    return CoherenceReport(metric="npmi", per_topic=tuple(per_topic))


_METRICS = {"umass": umass_coherence, "npmi": npmi_coherence}


def top_terms_by_phi(phi, dictionary: Dictionary, top_m: int) -> list[list[str]]:
    """Per-topic term lists ranked by probability, ties to the lower term id."""
    terms = dictionary.id_to_term
    result = []
    for row in phi:
        order = sorted(range(len(terms)), key=lambda w: (-row[w], w))
        result.append([terms[w] for w in order[:top_m]])
    return result


def coherence_sweep(
    corpus: BowCorpus,
    dictionary: Dictionary,
    docs: list[TokenizedDoc],
    k_list: list[int],
    config_template: LdaConfig,
    top_m: int = 10,
    metric: str = "umass",
) -> SweepResult:
    """Train one model per K (same seed) and score coherence and perplexity.

    Returns all rows ordered by ascending K; no K is auto-selected.
    """
    if not k_list:
        raise CoherenceError("k_list must be non-empty")
    if len(set(k_list)) != len(k_list):
        raise CoherenceError(f"k_list entries must be distinct: {k_list}")
    if any(k < 1 for k in k_list):
        raise CoherenceError(f"every K must be >= 1: {k_list}")
    if metric not in _METRICS:
        raise CoherenceError(f"unknown coherence metric: {metric!r}")
    score = _METRICS[metric]

    rows = []
    for k in sorted(k_list):
        config = LdaConfig(
            num_topics=k,
            alpha=config_template.alpha,
            beta=config_template.beta,
            iterations=config_template.iterations,
            burn_in=config_template.burn_in,
            seed=config_template.seed,
        )
        try:
            model = train_lda(corpus, dictionary, config)
            report = score(top_terms_by_phi(model.phi, dictionary, top_m), docs)
            ppl = perplexity(model, corpus)
        except Exception as exc:
            raise CoherenceError(f"sweep failed at K={k}: {exc}") from exc
        rows.append(
            SweepRow(
                num_topics=k,
                coherence_mean=report.mean,
                perplexity=ppl,
                seed=config.seed,
            )
        )
    return SweepResult(metric=metric, rows=tuple(rows))
