"""Walkthrough: loading documents, regex cleaning, and tokenization.

Run with: python demos/01_text_preparation.py
"""

from topicflow import RegexFilter, clean_text, load_documents, load_stopwords, tokenize
from topicflow.templates import default_stopwords_path, sample_corpus_path

# The bundled sample corpus is a delimited file: one row per abstract,
# with a publication year in the metadata.
docs = load_documents(sample_corpus_path(), format="delimited")
print(f"loaded {len(docs)} documents")
print("first id:", docs[0].id, "| metadata:", docs[0].metadata)
print("text preview:", docs[0].text[:90], "...")
print()

# Regex filters replace every match with a single space. Filters run in
# list order, so later patterns see the earlier patterns' output.
noisy = "<p>Dante, page 12 of 99</p>"
cleaned = clean_text(noisy, [RegexFilter(r"<[^>]*>"), RegexFilter(r"\d+")])
print(f"cleaning {noisy!r} -> {cleaned!r}")
print()

# Tokenization: split on non-letter runs, lowercase, drop short tokens,
# drop stopwords, then stem. Stopwords are removed before stemming, since
# stopword lists hold surface forms.
stopwords = load_stopwords(default_stopwords_path())
print(f"stopword list: {len(stopwords.words)} entries")
tokens = tokenize(docs[0], stopwords)
print("tokens of the first document:")
print(" ", tokens.tokens[:12], "...")

# The stemmer produces classic Porter forms: poetry -> poetri,
# testimonies -> testimoni, philology -> philolog.
from topicflow.porter import stem

for word in ("poetry", "testimonies", "philology", "libraries", "visualization"):
    print(f"  stem({word!r}) = {stem(word)!r}")
