"""Bundled sample data and the canonical three-step workflow template."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .workflow import Edge, NodeSpec, SourceSpec, Workflow

DELIMITED_OPTIONS = {"delimiter": ",", "text_column": "text", "id_column": "id"}


def _data_path(name: str) -> Path:
    path = resources.files("topicflow").joinpath("data", name)
    return Path(str(path))


def sample_corpus_path() -> Path:
    """The bundled synthetic 51-document corpus (CSV: id, year, text)."""
    return _data_path("sample_corpus.csv")


def default_stopwords_path() -> Path:
    return _data_path("stopwords_en.txt")


def template_workflow_path() -> Path:
    """The bundled workflow file; its data paths are relative to data/."""
    return _data_path("figure1.workflow.json")


def figure1_workflow(
    corpus_path: str | Path | None = None,
    stopwords_path: str | Path | None = None,
    k: int = 5,
    iterations: int = 1000,
    grouping_key: str = "year",
    n_terms: int = 30,
) -> Workflow:
    """The canonical pipeline: documents and stopwords feed a tokenizer,
    a corpus/dictionary builder, the topic model, and the four outputs
    (term and document tables plus both visualization payloads)."""
    corpus_path = str(corpus_path if corpus_path is not None else sample_corpus_path())
    stopwords_path = str(
        stopwords_path if stopwords_path is not None else default_stopwords_path()
    )
    nodes = [
        NodeSpec(
            node_id="docs",
            kind="data",
            source=SourceSpec(path=corpus_path, format="delimited", options=dict(DELIMITED_OPTIONS)),
        ),
        NodeSpec(
            node_id="stopwords",
            kind="data",
            source=SourceSpec(path=stopwords_path, format="stopwords"),
        ),
        NodeSpec(node_id="tokenizer", kind="tool", tool_name="tokenizer", params={}),
        NodeSpec(node_id="corpus-builder", kind="tool", tool_name="corpus-builder", params={}),
        NodeSpec(node_id="lda", kind="tool", tool_name="lda", params={"k": k, "iterations": iterations}),
        NodeSpec(node_id="terms-x-topics", kind="tool", tool_name="terms-x-topics", params={"n": n_terms}),
        NodeSpec(node_id="docs-x-topics", kind="tool", tool_name="docs-x-topics", params={}),
        NodeSpec(node_id="ldavis", kind="tool", tool_name="ldavis", params={}),
        NodeSpec(
            node_id="mtmvis",
            kind="tool",
            tool_name="mtmvis",
            params={"grouping_key": grouping_key, "mode": "dominant"},
        ),
    ]
    edges = [
        Edge("docs", "out", "tokenizer", "docs"),
        Edge("stopwords", "out", "tokenizer", "stopwords"),
        Edge("tokenizer", "tokens", "corpus-builder", "tokens"),
        Edge("corpus-builder", "dictionary", "lda", "dictionary"),
        Edge("corpus-builder", "corpus", "lda", "corpus"),
        Edge("lda", "model", "terms-x-topics", "model"),
        Edge("corpus-builder", "dictionary", "terms-x-topics", "dictionary"),
        Edge("lda", "model", "docs-x-topics", "model"),
        Edge("docs", "out", "docs-x-topics", "docs"),
        Edge("lda", "model", "ldavis", "model"),
        Edge("corpus-builder", "corpus", "ldavis", "corpus"),
        Edge("corpus-builder", "dictionary", "ldavis", "dictionary"),
        Edge("docs-x-topics", "table", "mtmvis", "table"),
    ]
    positions = {
        "docs": (40.0, 40.0),
        "stopwords": (40.0, 180.0),
        "tokenizer": (260.0, 110.0),
        "corpus-builder": (480.0, 110.0),
        "lda": (700.0, 110.0),
        "terms-x-topics": (920.0, 20.0),
        "docs-x-topics": (920.0, 120.0),
        "ldavis": (920.0, 220.0),
        "mtmvis": (1140.0, 120.0),
    }
    return Workflow(
        name="topic-modelling",
        description="Tokenize documents, build the dictionary and corpus, train the topic model, and emit tables and visualization payloads.",
        nodes=nodes,
        edges=edges,
        positions=positions,
    )
