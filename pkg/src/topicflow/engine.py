"""Workflow execution: deterministic node scheduling, artifact writing,
per-node seed derivation, and the run manifest that makes a run verifiable."""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from . import corpus as corpus_mod
from . import evaluation, outputs, textprep
from .lda import LdaConfig, model_to_bytes, train_lda
from .workflow import (
    Diagnostic,
    NodeSpec,
    PortType,
    Workflow,
    topological_order,
    validate,
    workflow_hash,
)

MANIFEST_SCHEMA_VERSION = 1


class WorkflowValidationError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        details = "; ".join(d.message for d in diagnostics)
        super().__init__(f"workflow failed validation: {details}")


class ExecutionError(RuntimeError):
    """A node failed; the partial manifest is attached."""

    def __init__(self, message: str, manifest: "RunManifest"):
        super().__init__(message)
        self.manifest = manifest


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def derive_node_seed(seed: int, node_id: str) -> int:
    """Mix the global run seed with the node id into a per-node 64-bit seed."""
    digest = hashlib.sha256(struct.pack("<Q", seed) + node_id.encode("utf-8")).digest()
    return struct.unpack("<Q", digest[:8])[0]


def hash_source(path: Path) -> str:
    """Content hash of a data source: file bytes, or for a directory the
    sorted (name, file-hash) pairs of its *.txt entries."""
    if path.is_dir():
        h = hashlib.sha256()
        for child in sorted(path.glob("*.txt")):
            h.update(child.name.encode("utf-8") + b"\0")
            h.update(hashlib.sha256(child.read_bytes()).digest())
        return h.hexdigest()
    return sha256_hex(path.read_bytes())


@dataclass
class RunManifest:
    workflow_hash: str
    seed: int
    engine_version: str
    input_hashes: dict[str, str] = field(default_factory=dict)
    artifact_hashes: dict[str, str] = field(default_factory=dict)
    node_status: dict[str, str] = field(default_factory=dict)  # ok | failed | skipped
    started: str = ""
    finished: str = ""
    failed_node: str | None = None
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "workflow_hash": self.workflow_hash,
            "seed": self.seed,
            "engine_version": self.engine_version,
            "input_hashes": self.input_hashes,
            "artifact_hashes": self.artifact_hashes,
            "node_status": self.node_status,
            "started": self.started,
            "finished": self.finished,
            "failed_node": self.failed_node,
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def fingerprint(self) -> str:
        """Identity of the run's reproducible content: everything except the
        wall-clock timestamps."""
        doc = self.as_dict()
        doc.pop("started")
        doc.pop("finished")
        return sha256_hex(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8"))

    @classmethod
    def from_dict(cls, doc: dict) -> "RunManifest":
        return cls(
            workflow_hash=doc["workflow_hash"],
            seed=doc["seed"],
            engine_version=doc["engine_version"],
            input_hashes=dict(doc.get("input_hashes", {})),
            artifact_hashes=dict(doc.get("artifact_hashes", {})),
            node_status=dict(doc.get("node_status", {})),
            started=doc.get("started", ""),
            finished=doc.get("finished", ""),
            failed_node=doc.get("failed_node"),
            error=doc.get("error"),
        )


def _load_data_node(node: NodeSpec, base_dir: Path, resolver) -> tuple[object, str]:
    source = node.source
    raw = source.path
    if resolver is not None:
        resolved = resolver(raw)
    else:
        resolved = None
    if resolved is None:
        resolved = Path(raw)
        if not resolved.is_absolute():
            resolved = base_dir / resolved
    if not resolved.exists():
        raise FileNotFoundError(f"data node {node.node_id!r}: source not found: {raw}")
    content_hash = hash_source(resolved)
    if source.format == "stopwords":
        return textprep.load_stopwords(resolved), content_hash
    options = dict(source.options)
    docs = textprep.load_documents(
        resolved,
        format=source.format,
        delimiter=options.get("delimiter", ","),
        text_column=options.get("text_column", "text"),
        id_column=options.get("id_column", "id"),
        metadata_columns=options.get("metadata_columns"),
    )
    return docs, content_hash


def _merged_params(node: NodeSpec) -> dict:
    from .workflow import TOOLS

    spec = TOOLS[node.tool_name]
    merged = {name: p.default for name, p in spec.params.items()}
    merged.update(node.params)
    return merged


def _run_tool(node: NodeSpec, inputs: dict, node_seed: int) -> dict:
    p = _merged_params(node)
    name = node.tool_name
    if name == "regex-filter":
        filters = [textprep.RegexFilter(pattern) for pattern in p["patterns"]]
        return {
            "docs": [
                textprep.Document(d.id, textprep.clean_text(d.text, filters), d.metadata)
                for d in inputs["docs"]
            ]
        }
    if name == "tokenizer":
        stopwords = inputs.get("stopwords") or textprep.StopwordList(frozenset())
        return {
            "tokens": textprep.tokenize_all(
                inputs["docs"],
                stopwords,
                lowercase=p["lowercase"],
                min_token_length=p["min_token_length"],
                stem=p["stem"],
            )
        }
    if name == "corpus-builder":
        dictionary = corpus_mod.build_dictionary(
            inputs["tokens"],
            min_df=p["min_df"],
            max_df_fraction=p["max_df_fraction"],
            keep_n=p["keep_n"],
        )
        return {
            "dictionary": dictionary,
            "corpus": corpus_mod.build_corpus(inputs["tokens"], dictionary),
        }
    if name == "lda":
        config = LdaConfig(
            num_topics=p["k"],
            alpha=p["alpha"],
            beta=p["beta"],
            iterations=p["iterations"],
            burn_in=p["burn_in"],
            seed=node_seed,
        )
        return {"model": train_lda(inputs["corpus"], inputs["dictionary"], config)}
    if name == "coherence-sweep":
        template = LdaConfig(
            num_topics=max(p["k_list"]),
            alpha=p["alpha"],
            beta=p["beta"],
            iterations=p["iterations"],
            seed=node_seed,
        )
        return {
            "table": evaluation.coherence_sweep(
                inputs["corpus"],
                inputs["dictionary"],
                inputs["tokens"],
                p["k_list"],
                template,
                top_m=p["top_m"],
                metric=p["metric"],
            )
        }
    if name == "terms-x-topics":
        return {"table": outputs.terms_x_topics(inputs["model"], inputs["dictionary"], n=p["n"])}
    if name == "docs-x-topics":
        return {"table": outputs.docs_x_topics(inputs["model"], inputs["docs"])}
    if name == "ldavis":
        return {
            "payload": outputs.ldavis_data(
                inputs["model"], inputs["corpus"], inputs["dictionary"], top_r=p["top_r"]
            )
        }
    if name == "mtmvis":
        table = inputs["table"]
        if not isinstance(table, outputs.DocsXTopics):
            raise TypeError(
                f"mtmvis node {node.node_id!r} needs the docs-x-topics table, "
                f"got {type(table).__name__}"
            )
        return {"payload": outputs.mtm_data(table, p["grouping_key"], mode=p["mode"])}
    raise ValueError(f"no runner for tool {name!r}")  # pragma: no cover


_EXTENSIONS = {
    PortType.TEXT_COLLECTION: "json",
    PortType.STOPWORD_LIST: "txt",
    PortType.TOKENIZED_COLLECTION: "json",
    PortType.DICTIONARY: "csv",
    PortType.BOW_CORPUS: "txt",
    PortType.TOPIC_MODEL: "model",
    PortType.TABLE: "csv",
    PortType.VIZ_PAYLOAD: "json",
}


def _artifact_bytes(port_type: PortType, value, node_inputs: dict, engine_version: str) -> bytes:
    if port_type == PortType.TEXT_COLLECTION:
        doc = [{"id": d.id, "text": d.text, "metadata": d.metadata} for d in value]
        return (json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    if port_type == PortType.STOPWORD_LIST:
        return ("\n".join(sorted(value.words)) + "\n").encode("utf-8")
    if port_type == PortType.TOKENIZED_COLLECTION:
        doc = [{"doc_id": t.doc_id, "tokens": list(t.tokens)} for t in value]
        return (json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    if port_type == PortType.DICTIONARY:
        return corpus_mod.dictionary_to_csv(value).encode("utf-8")
    if port_type == PortType.BOW_CORPUS:
        return corpus_mod.corpus_to_text(value).encode("utf-8")
    if port_type == PortType.TOPIC_MODEL:
        dictionary = node_inputs.get("dictionary")
        dict_hash = (
            sha256_hex(corpus_mod.dictionary_to_csv(dictionary).encode("utf-8"))
            if dictionary is not None
            else ""
        )
        return model_to_bytes(value, dictionary_hash=dict_hash, engine_version=engine_version)
    if port_type == PortType.TABLE:
        return value.to_csv().encode("utf-8")
    if port_type == PortType.VIZ_PAYLOAD:
        return value.to_json().encode("utf-8")
    raise ValueError(f"no artifact writer for {port_type}")  # pragma: no cover


def execute(
    workflow: Workflow,
    seed: int,
    output_dir: str | Path,
    *,
    base_dir: str | Path | None = None,
    path_resolver: Callable[[str], Path | None] | None = None,
) -> RunManifest:
    """Validate, run every node in deterministic topological order, write one
    artifact per output port, and finish with manifest.json.

    Relative data-source paths resolve against base_dir (default: the
    current directory). The global seed never feeds a sampler directly;
    each node gets its own seed derived from (seed, node_id), so inserting
    an unrelated node cannot shift another node's randomness.
    """
    from . import __version__

    diagnostics = validate(workflow)
    if diagnostics:
        raise WorkflowValidationError(diagnostics)

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    base = Path(base_dir) if base_dir is not None else Path.cwd()

    manifest = RunManifest(
        workflow_hash=workflow_hash(workflow),
        seed=seed,
        engine_version=__version__,
        started=datetime.now(timezone.utc).isoformat(),
    )

    nodes = {n.node_id: n for n in workflow.nodes}
    inputs_of: dict[str, dict] = {n: {} for n in nodes}
    order = topological_order(workflow)
    values: dict[tuple[str, str], object] = {}

    failed = False
    for node_id in order:
        node = nodes[node_id]
        if failed:
            manifest.node_status[node_id] = "skipped"
            continue
        try:
            for edge in workflow.edges:
                if edge.to_node == node_id:
                    inputs_of[node_id][edge.to_port] = values[(edge.from_node, edge.from_port)]
            if node.kind == "data":
                value, content_hash = _load_data_node(node, base, path_resolver)
                manifest.input_hashes[node_id] = content_hash
                node_outputs = {"out": value}
            else:
                node_outputs = _run_tool(node, inputs_of[node_id], derive_node_seed(seed, node_id))
            port_types = node.output_ports()
            multi = len(node_outputs) > 1
            for port, value in node_outputs.items():
                values[(node_id, port)] = value
                port_type = port_types[port]
                ext = _EXTENSIONS[port_type]
                name = f"{node_id}.{port}.{ext}" if multi else f"{node_id}.{ext}"
                data = _artifact_bytes(port_type, value, inputs_of[node_id], __version__)
                (output_dir / name).write_bytes(data)
                manifest.artifact_hashes[name] = sha256_hex(data)
            manifest.node_status[node_id] = "ok"
        except Exception as exc:
            manifest.node_status[node_id] = "failed"
            manifest.failed_node = node_id
            manifest.error = f"{type(exc).__name__}: {exc}"
            failed = True

    manifest.finished = datetime.now(timezone.utc).isoformat()
    (output_dir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    if failed:
        raise ExecutionError(
            f"node {manifest.failed_node!r} failed: {manifest.error}", manifest
        )
    return manifest
