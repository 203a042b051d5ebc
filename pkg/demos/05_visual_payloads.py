"""Walkthrough: the four model outputs, including both visualization payloads.

Run with: python demos/05_visual_payloads.py
"""

import numpy as np

from topicflow import (
    LdaConfig,
    build_corpus,
    build_dictionary,
    docs_x_topics,
    format_percent,
    ldavis_data,
    load_documents,
    load_stopwords,
    mtm_data,
    terms_x_topics,
    tokenize_all,
    train_lda,
)
from topicflow.templates import default_stopwords_path, sample_corpus_path

docs = load_documents(sample_corpus_path(), format="delimited")
stopwords = load_stopwords(default_stopwords_path())
tokenized = tokenize_all(docs, stopwords)
dictionary = build_dictionary(tokenized)
corpus = build_corpus(tokenized, dictionary)
model = train_lda(corpus, dictionary, LdaConfig(num_topics=5, iterations=1000, seed=42))

# 1. termsXtopics: the ranked term table (default depth 30).
terms = terms_x_topics(model, dictionary, n=30)
print("termsXtopics: ", len(terms.topics), "topics x", len(terms.topics[0]), "terms")

# 2. docsXtopics: per-document topic shares plus the dominant topic.
table = docs_x_topics(model, docs)
print("docsXtopics row for", table.doc_ids[0] + ":",
      np.round(table.theta[0], 3), "-> dominant topic", table.dominant[0])
print()

# 3. The intertopic-map payload: topic circles on a 2D plane (classical MDS
# over pairwise Jensen-Shannon divergence) plus relevance-ranked terms for
# each lambda on an 11-point grid.
payload = ldavis_data(model, corpus, dictionary)
print("intertopic map (topic, proportion, x, y):")
for k in payload.topic_order:
    x, y = payload.coords[k - 1]
    print(f"  topic {k}: P={payload.proportions[k - 1]:.3f}  ({x:+.3f}, {y:+.3f})")
lam = payload.lambda_grid.index(0.6)
print("top terms of the largest topic at lambda=0.6:")
print(" ", ", ".join(t for t, _ in payload.term_table[payload.topic_order[0] - 1][lam][:8]))
print()

# 4. The metadata-distribution payload: topic shares per group of a
# metadata attribute, here the publication year.
mtm = mtm_data(table, "year", mode="dominant")
print(f"dominant-topic shares by {mtm.grouping_key}:")
header = "  ".join(f"topic {k}" for k in range(1, 6))
print(f"  {'year':<6} docs  {header}")
for group in mtm.groups:
    shares = "  ".join(f"{format_percent(s):>7}" for s in group.shares)
    print(f"  {group.value:<6} {group.doc_count:>4}  {shares}")
print()
print("the same tables ship as JSON payloads:",
      f"ldavis={len(payload.to_json())} bytes, mtm={len(mtm.to_json())} bytes")
