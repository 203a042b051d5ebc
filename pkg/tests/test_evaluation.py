import math
import random

import pytest

from topicflow.corpus import build_corpus, build_dictionary
from topicflow.evaluation import (
    NPMI_EPSILON,
    CoherenceError,
    coherence_sweep,
    npmi_coherence,
    top_terms_by_phi,
    umass_coherence,
)
from topicflow.lda import LdaConfig, perplexity, train_lda
from topicflow.textprep import TokenizedDoc


def docs_from(token_lists):
    return [TokenizedDoc(f"d{i}", tuple(t)) for i, t in enumerate(token_lists)]


def count_docs_with(docs, *terms):
    """Independent co-occurrence counter used as the oracle."""
    n = 0
    for doc in docs:
        present = set(doc.tokens)
        if all(t in present for t in terms):
            n += 1
    return n


def brute_umass(topic, docs):
    total, pairs = 0.0, 0
    for m in range(1, len(topic)):
        for l in range(m):
            co = count_docs_with(docs, topic[m], topic[l])
            total += math.log((co + 1) / count_docs_with(docs, topic[l]))
            pairs += 1
    return total / pairs if pairs else 0.0


def brute_npmi(topic, docs):
    total, pairs = 0.0, 0
    num_docs = len(docs)
    for m in range(1, len(topic)):
        for l in range(m):
            p_i = count_docs_with(docs, topic[m]) / num_docs
            p_j = count_docs_with(docs, topic[l]) / num_docs
            p_ij = count_docs_with(docs, topic[m], topic[l]) / num_docs
            if p_ij >= 1.0:
                value = 0.0
            elif p_ij <= 0.0:
                value = -1.0
            else:
                value = math.log((p_ij + NPMI_EPSILON) / (p_i * p_j)) / -math.log(
                    p_ij + NPMI_EPSILON
                )
            total += value
            pairs += 1
    return total / pairs if pairs else 0.0


class TestUmass:
    def test_two_doc_hand_enumeration(self):
        docs = docs_from([["v1", "v2"], ["v1"]])
        report = umass_coherence([["v1", "v2"]], docs)
        # D(v1)=2, D(v2,v1)=1 -> log((1+1)/2) = 0
        assert report.per_topic == (0.0,)
        assert report.mean == 0.0

    def test_never_cooccurring_pair(self):
        docs = docs_from([["v1"], ["v1"], ["v2"]])
        report = umass_coherence([["v1", "v2"]], docs)
        assert report.per_topic[0] == pytest.approx(math.log(0.5), abs=1e-12)

    def test_single_term_topic_scores_zero(self):
        docs = docs_from([["v1"]])
        assert umass_coherence([["v1"]], docs).per_topic == (0.0,)

    def test_absent_term_is_an_error_naming_it(self):
        docs = docs_from([["v1"]])
        with pytest.raises(CoherenceError, match="'ghost'"):
            umass_coherence([["v1", "ghost"]], docs)


class TestNpmi:
    def test_saturated_pair_is_zero_by_convention(self):
        docs = docs_from([["a", "b"], ["a", "b"]])
        assert npmi_coherence([["a", "b"]], docs).per_topic == (0.0,)

    def test_independent_pair_is_zero(self):
        # p(i)=p(j)=1/2, p(i,j)=1/4 on a constructed 4-doc corpus
        docs = docs_from([["a", "b"], ["a"], ["b"], ["x"]])
        report = npmi_coherence([["a", "b"]], docs)
        assert report.per_topic[0] == pytest.approx(0.0, abs=1e-9)

    def test_disjoint_pair_is_minus_one(self):
        docs = docs_from([["a"], ["b"]])
        report = npmi_coherence([["a", "b"]], docs)
        assert report.per_topic[0] == pytest.approx(-1.0, abs=1e-6)

    def test_perfectly_correlated_but_rare_pair_is_plus_one(self):
        docs = docs_from([["a", "b"], ["x"], ["y"]])
        report = npmi_coherence([["a", "b"]], docs)
        assert report.per_topic[0] == pytest.approx(1.0, abs=1e-9)


def random_corpus_and_topics(rng):
    vocab = [f"t{i}" for i in range(rng.randint(3, 15))]
    docs = docs_from(
        [
            [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
            for _ in range(rng.randint(2, 10))
        ]
    )
    present = sorted({t for d in docs for t in d.tokens})
    topics = [
        rng.sample(present, rng.randint(1, min(5, len(present))))
        for _ in range(rng.randint(1, 3))
    ]
    return docs, topics


class TestAgainstBruteForce:
    def test_random_corpora_match_oracle(self):
        rng = random.Random(4242)
        for _ in range(20):
            docs, topics = random_corpus_and_topics(rng)
            umass = umass_coherence(topics, docs)
            npmi = npmi_coherence(topics, docs)
            for topic, got_u, got_n in zip(topics, umass.per_topic, npmi.per_topic):
                assert got_u == pytest.approx(brute_umass(topic, docs), abs=1e-12)
                assert got_n == pytest.approx(brute_npmi(topic, docs), abs=1e-12)

    def test_invariant_under_document_permutation(self):
        rng = random.Random(7)
        docs, topics = random_corpus_and_topics(rng)
        shuffled = list(docs)
        rng.shuffle(shuffled)
        assert umass_coherence(topics, docs) == umass_coherence(topics, shuffled)
        assert npmi_coherence(topics, docs) == npmi_coherence(topics, shuffled)

    def test_counts_scale_linearly_under_duplication(self):
        rng = random.Random(8)
        docs, topics = random_corpus_and_topics(rng)
        doubled = docs + [TokenizedDoc(d.doc_id + "-copy", d.tokens) for d in docs]
        terms = sorted({t for d in docs for t in d.tokens})
        for a in terms:
            assert count_docs_with(doubled, a) == 2 * count_docs_with(docs, a)
            for b in terms:
                assert count_docs_with(doubled, a, b) == 2 * count_docs_with(docs, a, b)
        # document-proportion probabilities are unchanged, so NPMI is invariant
        assert npmi_coherence(topics, doubled).per_topic == pytest.approx(
            npmi_coherence(topics, docs).per_topic
        )


class TestSweep:
    def setup_method(self):
        rng = random.Random(31)
        vocab = [f"w{i}" for i in range(25)]
        self.docs = docs_from(
            [[rng.choice(vocab) for _ in range(30)] for _ in range(20)]
        )
        self.dictionary = build_dictionary(self.docs)
        self.corpus = build_corpus(self.docs, self.dictionary)
        self.template = LdaConfig(num_topics=2, iterations=30, seed=77)

    def test_row_per_k_ascending(self):
        result = coherence_sweep(
            self.corpus, self.dictionary, self.docs, [5, 2, 4, 3], self.template
        )
        assert [r.num_topics for r in result.rows] == [2, 3, 4, 5]

    def test_rows_match_independent_train_and_score(self):
        result = coherence_sweep(
            self.corpus, self.dictionary, self.docs, [2, 3], self.template, top_m=5
        )
        for row in result.rows:
            config = LdaConfig(num_topics=row.num_topics, iterations=30, seed=77)
            model = train_lda(self.corpus, self.dictionary, config)
            report = umass_coherence(
                top_terms_by_phi(model.phi, self.dictionary, 5), self.docs
            )
            assert row.coherence_mean == report.mean
            assert row.perplexity == perplexity(model, self.corpus)
            assert row.seed == 77

    def test_single_k(self):
        result = coherence_sweep(
            self.corpus, self.dictionary, self.docs, [5], self.template
        )
        assert len(result.rows) == 1
        assert result.rows[0].num_topics == 5

    def test_determinism_bytes(self):
        args = (self.corpus, self.dictionary, self.docs, [2, 3], self.template)
        assert coherence_sweep(*args).to_csv() == coherence_sweep(*args).to_csv()

    def test_validation(self):
        with pytest.raises(CoherenceError, match="non-empty"):
            coherence_sweep(self.corpus, self.dictionary, self.docs, [], self.template)
        with pytest.raises(CoherenceError, match="distinct"):
            coherence_sweep(self.corpus, self.dictionary, self.docs, [2, 2], self.template)
        with pytest.raises(CoherenceError, match=">= 1"):
            coherence_sweep(self.corpus, self.dictionary, self.docs, [0], self.template)

    def test_csv_columns(self):
        result = coherence_sweep(self.corpus, self.dictionary, self.docs, [2], self.template)
        assert result.to_csv().splitlines()[0] == "K,coherence_mean,perplexity,seed"
