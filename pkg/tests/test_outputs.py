import json
import math

import numpy as np
import pytest

from oracle_lda import brute_force_jsd
from topicflow.corpus import Dictionary, build_corpus, build_dictionary
from topicflow.lda import LdaConfig, LdaModel, train_lda
from topicflow.outputs import (
    OutputError,
    docs_x_topics,
    format_percent,
    intertopic_map,
    jensen_shannon,
    ldavis_data,
    mtm_data,
    relevance_table,
    terms_x_topics,
)
from topicflow.textprep import Document, TokenizedDoc


def synthetic_dictionary(vocab_size):
    terms = [f"w{i:03d}" for i in range(vocab_size)]
    return Dictionary(
        term_to_id={t: i for i, t in enumerate(terms)},
        doc_freq=tuple([1] * vocab_size),
        collection_freq=tuple([1] * vocab_size),
    )


def random_model(num_topics, vocab_size, num_docs, seed=0):
    rng = np.random.default_rng(seed)
    phi = rng.dirichlet(np.ones(vocab_size), size=num_topics)
    theta = rng.dirichlet(np.ones(num_topics), size=num_docs)
    return LdaModel(config=LdaConfig(num_topics=num_topics), phi=phi, theta=theta)


class TestTermsXTopics:
    def test_thirty_terms_per_topic(self):
        model = random_model(5, 200, 3, seed=1)
        table = terms_x_topics(model, synthetic_dictionary(200), n=30)
        assert len(table.topics) == 5
        assert all(len(t) == 30 for t in table.topics)

    def test_truncates_to_vocabulary(self):
        model = random_model(2, 10, 3, seed=2)
        table = terms_x_topics(model, synthetic_dictionary(10), n=30)
        assert all(len(t) == 10 for t in table.topics)

    def test_matches_full_sort_of_each_phi_row(self):
        model = random_model(4, 40, 3, seed=3)
        dictionary = synthetic_dictionary(40)
        table = terms_x_topics(model, dictionary, n=40)
        for k, ranked in enumerate(table.topics):
            expected = sorted(
                ((model.phi[k, w], dictionary.id_to_term[w]) for w in range(40)),
                key=lambda pair: (-pair[0], pair[1]),
            )
            assert [term for _, term in expected] == [term for term, _ in ranked]
            values = [v for _, v in ranked]
            assert values == sorted(values, reverse=True)

    def test_tie_break_by_term_id(self):
        phi = np.array([[0.25, 0.25, 0.5]])
        model = LdaModel(config=LdaConfig(num_topics=1), phi=phi, theta=np.ones((1, 1)))
        table = terms_x_topics(model, synthetic_dictionary(3), n=3)
        assert [t for t, _ in table.topics[0]] == ["w002", "w000", "w001"]


class TestDocsXTopics:
    def _documents(self, n):
        return [Document(f"d{i}", "x", {"year": str(2017 + i % 3)}) for i in range(n)]

    def test_single_topic_degenerate(self):
        model = LdaModel(
            config=LdaConfig(num_topics=1), phi=np.ones((1, 4)) / 4, theta=np.ones((3, 1))
        )
        table = docs_x_topics(model, self._documents(3))
        assert table.dominant == (1, 1, 1)
        assert (table.theta == 1.0).all()

    def test_argmax_and_tie_break(self):
        theta = np.array([[0.2, 0.5, 0.3], [0.5, 0.5, 0.0]])
        model = LdaModel(config=LdaConfig(num_topics=3), phi=np.ones((3, 2)) / 2, theta=theta)
        table = docs_x_topics(model, self._documents(2))
        assert table.dominant == (2, 1)

    def test_argmax_matches_brute_force_everywhere(self):
        model = random_model(4, 6, 30, seed=9)
        table = docs_x_topics(model, self._documents(30))
        for i in range(30):
            best, best_k = -1.0, None
            for k in range(4):
                if model.theta[i, k] > best:
                    best, best_k = model.theta[i, k], k + 1
            assert table.dominant[i] == best_k

    def test_length_mismatch(self):
        model = random_model(2, 5, 3)
        with pytest.raises(OutputError, match="theta rows"):
            docs_x_topics(model, self._documents(2))

    def test_csv_column_order(self):
        model = random_model(2, 5, 3, seed=4)
        table = docs_x_topics(model, self._documents(3))
        header = table.to_csv().splitlines()[0]
        assert header == "doc_id,year,topic_1,topic_2,dominant_topic"


class TestIntertopicMap:
    def test_identical_rows_coincide(self):
        phi = np.tile(np.full(5, 0.2), (2, 1))
        model = LdaModel(config=LdaConfig(num_topics=2), phi=phi, theta=np.ones((1, 2)) / 2)
        coords, dist = intertopic_map(model)
        assert dist[0, 1] == 0.0
        assert np.allclose(coords[0], coords[1])

    def test_disjoint_support_reaches_ln2(self):
        phi = np.array([[0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, 0.5]])
        assert jensen_shannon(phi[0], phi[1]) == pytest.approx(math.log(2), abs=1e-12)

    def test_matrix_matches_brute_force(self):
        model = random_model(4, 30, 3, seed=5)
        _, dist = intertopic_map(model)
        for i in range(4):
            for j in range(4):
                expected = 0.0 if i == j else brute_force_jsd(model.phi[i], model.phi[j])
                assert dist[i, j] == pytest.approx(expected, abs=1e-12)

    def test_matrix_properties(self):
        model = random_model(6, 25, 3, seed=6)
        _, dist = intertopic_map(model)
        assert np.array_equal(dist, dist.T)
        assert (np.diag(dist) == 0).all()
        assert (dist >= 0).all()
        assert (dist <= math.log(2) + 1e-12).all()

    def test_centroid_at_origin(self):
        model = random_model(5, 25, 3, seed=7)
        coords, _ = intertopic_map(model)
        assert np.abs(coords.mean(axis=0)).max() <= 1e-9

    def test_single_topic_at_origin(self):
        model = random_model(1, 5, 2, seed=8)
        coords, dist = intertopic_map(model)
        assert coords.shape == (1, 2)
        assert (coords == 0).all()
        assert dist.shape == (1, 1)

    def test_two_topics_at_plus_minus_half_distance(self):
        model = random_model(2, 12, 2, seed=9)
        coords, dist = intertopic_map(model)
        half = dist[0, 1] / 2
        assert np.allclose(coords, [[half, 0.0], [-half, 0.0]])


class TestRelevance:
    def _setup(self, seed=10):
        rng = np.random.default_rng(seed)
        docs = [
            TokenizedDoc(f"d{i}", tuple(rng.choice([f"t{j}" for j in range(12)], size=20)))
            for i in range(6)
        ]
        dictionary = build_dictionary(docs)
        corpus = build_corpus(docs, dictionary)
        model = train_lda(corpus, dictionary, LdaConfig(num_topics=3, iterations=20, seed=seed))
        return model, corpus, dictionary

    def test_lambda_one_equals_phi_ranking(self):
        model, corpus, dictionary = self._setup()
        table = relevance_table(model, corpus, dictionary, lambda_grid=(1.0,), top_r=30)
        phi_table = terms_x_topics(model, dictionary, n=30)
        for k in range(model.num_topics):
            assert [t for t, _ in table[k][0]] == [t for t, _ in phi_table.topics[k]]

    def test_lambda_zero_ranks_by_lift(self):
        model, corpus, dictionary = self._setup()
        totals = np.zeros(dictionary.size)
        for vec in corpus.vectors:
            for t, c in vec:
                totals[t] += c
        p_w = totals / totals.sum()
        table = relevance_table(model, corpus, dictionary, lambda_grid=(0.0,), top_r=dictionary.size)
        for k in range(model.num_topics):
            lift = model.phi[k] / p_w
            expected = sorted(range(dictionary.size), key=lambda w: (-math.log(lift[w]), w))
            got = [dictionary.term_to_id[t] for t, _ in table[k][0]]
            assert got == expected

    def test_matches_brute_force_at_intermediate_lambda(self):
        model, corpus, dictionary = self._setup()
        lam = 0.6
        totals = np.zeros(dictionary.size)
        for vec in corpus.vectors:
            for t, c in vec:
                totals[t] += c
        p_w = totals / totals.sum()
        table = relevance_table(model, corpus, dictionary, lambda_grid=(lam,), top_r=dictionary.size)
        for k in range(model.num_topics):
            scores = {}
            for w in range(dictionary.size):
                scores[w] = lam * math.log(model.phi[k, w]) + (1 - lam) * math.log(
                    model.phi[k, w] / p_w[w]
                )
            expected = sorted(scores, key=lambda w: (-scores[w], w))
            got = [dictionary.term_to_id[t] for t, _ in table[k][0]]
            assert got == expected
            for term, value in table[k][0]:
                assert value == pytest.approx(scores[dictionary.term_to_id[term]], abs=1e-12)

    def test_ldavis_payload(self):
        model, corpus, dictionary = self._setup()
        payload = ldavis_data(model, corpus, dictionary)
        assert sum(payload.proportions) == pytest.approx(1.0, abs=1e-9)
        assert len(payload.coords) == model.num_topics
        assert len(payload.lambda_grid) == 11
        doc = json.loads(payload.to_json())
        assert doc["schema_version"] == 1
        assert doc["kind"] == "ldavis"
        assert sorted(doc["topic_order"]) == [1, 2, 3]
        # proportions weight theta rows by document length
        lengths = np.asarray(corpus.doc_lengths(), float)
        expected = (model.theta * lengths[:, None]).sum(axis=0) / lengths.sum()
        assert payload.proportions == pytest.approx(tuple(expected), abs=1e-12)


class TestMtm:
    def _table(self, theta, years):
        docs = [Document(f"d{i}", "x", {"year": y}) for i, y in enumerate(years)]
        model = LdaModel(
            config=LdaConfig(num_topics=theta.shape[1]),
            phi=np.ones((theta.shape[1], 3)) / 3,
            theta=np.asarray(theta, float),
        )
        return docs_x_topics(model, docs)

    def test_dominant_share_counting(self):
        theta = np.array([[0.9, 0.05, 0.05], [0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]])
        data = mtm_data(self._table(theta, ["2019"] * 4), "year", mode="dominant")
        assert data.groups[0].shares == (0.5, 0.25, 0.25)
        assert data.groups[0].doc_count == 4

    def test_mean_theta_mode(self):
        theta = np.array([[1.0, 0.0], [0.0, 1.0]])
        data = mtm_data(self._table(theta, ["2019", "2019"]), "year", mode="mean-theta")
        assert data.groups[0].shares == pytest.approx((0.5, 0.5))

    def test_paper_percentage_rendering(self):
        assert format_percent(0.15625) == "15.63%"
        assert format_percent(0.25) == "25.00%"
        assert format_percent(1 / 3) == "33.33%"
        assert format_percent(0.005) == "0.50%"

    def test_groups_natural_order_with_unknown_last(self):
        theta = np.array([[1.0], [1.0], [1.0], [1.0]])
        docs = [
            Document("a", "x", {"year": "10"}),
            Document("b", "x", {"year": "2"}),
            Document("c", "x", {}),
            Document("d", "x", {"year": "2"}),
        ]
        model = LdaModel(
            config=LdaConfig(num_topics=1), phi=np.ones((1, 3)) / 3, theta=theta
        )
        data = mtm_data(docs_x_topics(model, docs), "year")
        assert [g.value for g in data.groups] == ["2", "10", "unknown"]
        assert [g.doc_count for g in data.groups] == [2, 1, 1]

    def test_shares_sum_to_one_and_counts_sum_to_docs(self):
        rng = np.random.default_rng(3)
        theta = rng.dirichlet(np.ones(4), size=20)
        years = [str(2015 + i % 5) for i in range(20)]
        for mode in ("dominant", "mean-theta"):
            data = mtm_data(self._table(theta, years), "year", mode=mode)
            for group in data.groups:
                assert sum(group.shares) == pytest.approx(1.0, abs=1e-9)
            assert sum(g.doc_count for g in data.groups) == 20

    def test_missing_attribute_is_an_error(self):
        theta = np.array([[1.0]])
        with pytest.raises(OutputError, match="absent"):
            mtm_data(self._table(theta, ["2019"]), "venue")

    def test_json_payload(self):
        theta = np.array([[0.9, 0.1], [0.3, 0.7]])
        data = mtm_data(self._table(theta, ["2018", "2019"]), "year")
        doc = json.loads(data.to_json())
        assert doc["schema_version"] == 1
        assert doc["kind"] == "mtm"
        assert doc["grouping_key"] == "year"
        assert [g["value"] for g in doc["groups"]] == ["2018", "2019"]
