"""Walkthrough: comparing topic counts with a coherence sweep.

Run with: python demos/04_choosing_k.py
"""

from topicflow import LdaConfig, build_corpus, build_dictionary, coherence_sweep
from topicflow import load_documents, load_stopwords, tokenize_all
from topicflow.templates import default_stopwords_path, sample_corpus_path

docs = load_documents(sample_corpus_path(), format="delimited")
stopwords = load_stopwords(default_stopwords_path())
tokenized = tokenize_all(docs, stopwords)
dictionary = build_dictionary(tokenized)
corpus = build_corpus(tokenized, dictionary)

# One model per candidate K, all with the same seed. The sweep reports the
# scores and deliberately does not pick a K for you: coherence is a guide,
# not a decision rule.
template = LdaConfig(num_topics=2, iterations=400, seed=11)
result = coherence_sweep(
    corpus, dictionary, tokenized, k_list=list(range(2, 9)), config_template=template,
    top_m=10, metric="umass",
)

print(f"metric: {result.metric} (mean over the top-10 term pairs per topic)")
print(f"{'K':>3} {'coherence':>12} {'perplexity':>12}")
for row in result.rows:
    print(f"{row.num_topics:>3} {row.coherence_mean:>12.4f} {row.perplexity:>12.2f}")

best = max(result.rows, key=lambda r: r.coherence_mean)
print()
print(f"highest mean coherence at K = {best.num_topics}")
print("(UMass coherence is <= 0; closer to zero means topic terms co-occur more)")

# The same sweep is available from the command line:
#   topicflow sweep --k-list 2..8 --seed 11
