"""Regenerate the bundled synthetic sample corpus.

Produces 51 short pseudo-abstracts spread over five themes and four
publication years, written to src/topicflow/data/sample_corpus.csv. The
output is deterministic; rerunning this script must not change the file.
"""

import csv
import random
from pathlib import Path

THEMES = {
    "memory": [
        "testimony", "holocaust", "war", "memory", "archive", "survivor",
        "witness", "oral", "remembrance", "trauma", "social", "jewish",
        "persecution", "deportation", "interview",
    ],
    "poetry": [
        "poetry", "poet", "dante", "alighieri", "verse", "sonnet",
        "literature", "philology", "manuscript", "commentary", "rhyme",
        "medieval", "canto", "lyric", "edition",
    ],
    "library": [
        "library", "catalogue", "metadata", "collection", "digitization",
        "repository", "preservation", "access", "record", "heritage",
        "shelf", "index", "curation", "holdings", "librarian",
    ],
    "visualization": [
        "visualization", "data", "model", "analysis", "chart", "interactive",
        "network", "graph", "statistical", "dashboard", "diagram", "plot",
        "exploratory", "pattern", "timeline",
    ],
    "ontology": [
        "ontology", "corpus", "corpora", "semantic", "annotation", "linked",
        "vocabulary", "schema", "knowledge", "encoding", "standard",
        "taxonomy", "markup", "alignment", "interoperability",
    ],
}

FILLERS = [
    "study", "article", "research", "approach", "method", "result",
    "digital", "humanities", "project", "text", "tool", "scholars",
    "framework", "experiment", "evaluation", "case", "discussion",
]

TEMPLATES = [
    "This {f0} presents an approach to {t0} and {t1} for {t2} research in the digital humanities.",
    "We describe a {f0} of {t0} based on {t1} and discuss how {t2} supports the {f1}.",
    "The {f0} examines {t0} through {t1}, with attention to {t2} and {t3}.",
    "Our {f0} combines {t0} with {t1} to study {t2} across several {f1} collections.",
    "Building on earlier {f0}, we analyse {t0} and {t1} and propose a {t2} {f1}.",
    "The paper reports results on {t0}, {t1} and {t2} obtained within a collaborative {f0}.",
    "A new {f0} for {t0} is introduced, linking {t1} with {t2} in a reproducible way.",
]

YEARS = ["2017"] * 12 + ["2018"] * 13 + ["2019"] * 16 + ["2020"] * 10


def make_text(rng: random.Random, theme: str) -> str:
    pool = THEMES[theme]
    other = [w for name, words in THEMES.items() if name != theme for w in words]
    sentences = []
    for _ in range(rng.randint(4, 6)):
        template = rng.choice(TEMPLATES)
        theme_words = rng.sample(pool, 4)
        # one word in five drifts in from another theme
        if rng.random() < 0.2:
            theme_words[3] = rng.choice(other)
        fills = rng.sample(FILLERS, 2)
        sentences.append(
            template.format(
                t0=theme_words[0], t1=theme_words[1], t2=theme_words[2],
                t3=theme_words[3], f0=fills[0], f1=fills[1],
            )
        )
    return " ".join(sentences)


def main():
    rng = random.Random(20190614)
    theme_names = list(THEMES)
    rows = []
    for i in range(51):
        doc_id = f"d{i + 1:03d}"
        theme = theme_names[i % len(theme_names)]
        rows.append((doc_id, YEARS[i], make_text(rng, theme)))

    out = Path(__file__).resolve().parents[1] / "src" / "topicflow" / "data" / "sample_corpus.csv"
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "year", "text"])
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} documents)")


if __name__ == "__main__":
    main()
