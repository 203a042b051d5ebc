"""Walkthrough: building the term dictionary and bag-of-words corpus.

Run with: python demos/02_dictionary_and_corpus.py
"""

from topicflow import build_corpus, build_dictionary, load_documents, load_stopwords, tokenize_all
from topicflow.corpus import corpus_to_text, dictionary_to_csv
from topicflow.templates import default_stopwords_path, sample_corpus_path

docs = load_documents(sample_corpus_path(), format="delimited")
stopwords = load_stopwords(default_stopwords_path())
tokenized = tokenize_all(docs, stopwords)

# Term ids are assigned by sorting the vocabulary, so the dictionary is
# identical no matter how the documents were ordered.
dictionary = build_dictionary(tokenized)
print(f"vocabulary size V = {dictionary.size}")

by_freq = sorted(
    dictionary.term_to_id, key=lambda t: -dictionary.collection_freq[dictionary.term_to_id[t]]
)
print("most frequent terms:")
for term in by_freq[:8]:
    i = dictionary.term_to_id[term]
    print(f"  {term:<12} doc_freq={dictionary.doc_freq[i]:<3} collection_freq={dictionary.collection_freq[i]}")
print()

# Frequency filters: drop rare terms and terms in almost every document.
filtered = build_dictionary(tokenized, min_df=2, max_df_fraction=0.6)
print(f"with min_df=2, max_df_fraction=0.6: V = {filtered.size}")
print()

# The corpus keeps one sparse (term_id, count) vector per document, in
# document order; empty documents keep an empty vector.
corpus = build_corpus(tokenized, dictionary)
print(f"corpus: D = {corpus.num_docs} documents, N = {corpus.total_tokens} tokens")
print("first document as id:count pairs:")
print(" ", corpus_to_text(corpus).splitlines()[0][:80], "...")
print()

# Both structures have plain-text export formats.
print("dictionary export preview:")
for line in dictionary_to_csv(dictionary).splitlines()[:4]:
    print(" ", line)
