"""topicflow: reproducible topic-modelling workflows.

A numpy/scipy library for the full pipeline (clean -> tokenize ->
dictionary/corpus -> LDA by collapsed Gibbs sampling -> evaluation ->
tabular and visualization outputs), plus a typed dataflow engine that
validates, executes, and serializes the pipeline as a shareable graph with
reproducibility manifests.
"""

__version__ = "0.1.0"

from .corpus import BowCorpus, Dictionary, build_corpus, build_dictionary, to_bow
from .engine import ExecutionError, RunManifest, WorkflowValidationError, derive_node_seed, execute
from .evaluation import (
    CoherenceReport,
    SweepResult,
    coherence_sweep,
    npmi_coherence,
    umass_coherence,
)
from .lda import LdaConfig, LdaModel, perplexity, train_lda
from .outputs import (
    DocsXTopics,
    LdavisData,
    MtmData,
    TermsXTopics,
    docs_x_topics,
    format_percent,
    intertopic_map,
    ldavis_data,
    mtm_data,
    relevance_table,
    terms_x_topics,
)
from .textprep import (
    Document,
    RegexFilter,
    StopwordList,
    TokenizedDoc,
    clean_text,
    load_documents,
    load_stopwords,
    tokenize,
    tokenize_all,
)
from .workflow import (
    Diagnostic,
    Edge,
    NodeSpec,
    PortType,
    SourceSpec,
    Workflow,
    deserialize,
    serialize,
    validate,
    workflow_hash,
)

__all__ = [name for name in dir() if not name.startswith("_")]
