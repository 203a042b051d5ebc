"""Typed dataflow graphs of tool and data nodes.

A workflow is a DAG whose edges carry one of a closed set of port types;
compatibility is exact type equality. Serialization is canonical (sorted
nodes, edges and keys, no insignificant whitespace) so equal graphs produce
byte-equal files, and the workflow hash is taken over the canonical bytes
with canvas positions stripped, making layout edits identity-preserving.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum

SCHEMA_VERSION = 1

_NODE_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class WorkflowFormatError(ValueError):
    """Malformed or unsupported workflow document."""


class PortType(str, Enum):
    TEXT_COLLECTION = "TextCollection"
    STOPWORD_LIST = "StopwordList"
    TOKENIZED_COLLECTION = "TokenizedCollection"
    DICTIONARY = "Dictionary"
    BOW_CORPUS = "BowCorpus"
    TOPIC_MODEL = "TopicModel"
    TABLE = "Table"
    VIZ_PAYLOAD = "VizPayload"


# Data-node formats and the port type each produces on its single "out" port.
DATA_FORMATS = {
    "txt-dir": PortType.TEXT_COLLECTION,
    "delimited": PortType.TEXT_COLLECTION,
    "stopwords": PortType.STOPWORD_LIST,
}


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # int | float | str | bool | int-list | str-list
    required: bool = False
    default: object = None
    choices: tuple | None = None
    minimum: float | None = None
    maximum: float | None = None
    nullable: bool = False
    is_regex: bool = False

    def check(self, value) -> str | None:
        """Return an error string, or None if the value is acceptable."""
        if value is None:
            if self.nullable:
                return None
            return f"parameter {self.name!r} must not be null"
        scalar = {
            "int": (int,),
            "float": (int, float),
            "str": (str,),
            "bool": (bool,),
        }
        if self.kind in scalar:
            if isinstance(value, bool) and self.kind != "bool":
                return f"parameter {self.name!r} expects {self.kind}, got bool"
            if not isinstance(value, scalar[self.kind]):
                return f"parameter {self.name!r} expects {self.kind}, got {type(value).__name__}"
        elif self.kind in ("int-list", "str-list"):
            inner = int if self.kind == "int-list" else str
            if not isinstance(value, list) or any(
                not isinstance(v, inner) or isinstance(v, bool) for v in value
            ):
                return f"parameter {self.name!r} expects a list of {inner.__name__}"
        else:  # pragma: no cover - registry definition error
            return f"parameter {self.name!r} has unknown kind {self.kind!r}"
        if self.choices is not None and value not in self.choices:
            return f"parameter {self.name!r} must be one of {list(self.choices)}, got {value!r}"
        values = value if isinstance(value, list) else [value]
        for v in values:
            if self.minimum is not None and isinstance(v, (int, float)) and v < self.minimum:
                return f"parameter {self.name!r} must be >= {self.minimum}, got {v}"
            if self.maximum is not None and isinstance(v, (int, float)) and v > self.maximum:
                return f"parameter {self.name!r} must be <= {self.maximum}, got {v}"
        if self.is_regex:
            for i, pattern in enumerate(values):
                try:
                    re.compile(pattern)
                except re.error as exc:
                    return f"parameter {self.name!r}: pattern {i} does not compile: {exc}"
        return None

    def describe(self) -> dict:
        info = {"kind": self.kind, "required": self.required, "default": self.default}
        if self.choices is not None:
            info["choices"] = list(self.choices)
        if self.minimum is not None:
            info["minimum"] = self.minimum
        if self.maximum is not None:
            info["maximum"] = self.maximum
        if self.nullable:
            info["nullable"] = True
        return info


@dataclass(frozen=True)
class ToolSpec:
    name: str
    inputs: dict[str, tuple[PortType, bool]]  # port -> (type, required)
    outputs: dict[str, PortType]
    params: dict[str, ParamSpec]

    def describe(self) -> dict:
        return {
            "inputs": {
                port: {"type": ptype.value, "required": required}
                for port, (ptype, required) in self.inputs.items()
            },
            "outputs": {port: ptype.value for port, ptype in self.outputs.items()},
            "params": {name: spec.describe() for name, spec in self.params.items()},
        }


def _p(name, kind, **kw) -> tuple[str, ParamSpec]:
    return name, ParamSpec(name=name, kind=kind, **kw)


TOOLS: dict[str, ToolSpec] = {
    spec.name: spec
    for spec in [
        ToolSpec(
            name="regex-filter",
            inputs={"docs": (PortType.TEXT_COLLECTION, True)},
            outputs={"docs": PortType.TEXT_COLLECTION},
            params=dict([
                _p("patterns", "str-list", required=True, is_regex=True),
            ]),
        ),
        ToolSpec(
            name="tokenizer",
            inputs={
                "docs": (PortType.TEXT_COLLECTION, True),
                "stopwords": (PortType.STOPWORD_LIST, False),
            },
            outputs={"tokens": PortType.TOKENIZED_COLLECTION},
            params=dict([
                _p("lowercase", "bool", default=True),
                _p("min_token_length", "int", default=2, minimum=1),
                _p("stem", "str", default="porter", choices=("porter", "none")),
            ]),
        ),
        ToolSpec(
            name="corpus-builder",
            inputs={"tokens": (PortType.TOKENIZED_COLLECTION, True)},
            outputs={
                "dictionary": PortType.DICTIONARY,
                "corpus": PortType.BOW_CORPUS,
            },
            params=dict([
                _p("min_df", "int", default=1, minimum=1),
                _p("max_df_fraction", "float", default=1.0, minimum=1e-9, maximum=1.0),
                _p("keep_n", "int", default=None, nullable=True, minimum=1),
            ]),
        ),
        ToolSpec(
            name="lda",
            inputs={
                "corpus": (PortType.BOW_CORPUS, True),
                "dictionary": (PortType.DICTIONARY, True),
            },
            outputs={"model": PortType.TOPIC_MODEL},
            params=dict([
                _p("k", "int", required=True, minimum=1),
                _p("alpha", "float", default=None, nullable=True, minimum=1e-12),
                _p("beta", "float", default=0.01, minimum=1e-12),
                _p("iterations", "int", default=1000, minimum=1),
                _p("burn_in", "int", default=0, minimum=0),
            ]),
        ),
        ToolSpec(
            name="coherence-sweep",
            inputs={
                "corpus": (PortType.BOW_CORPUS, True),
                "dictionary": (PortType.DICTIONARY, True),
                "tokens": (PortType.TOKENIZED_COLLECTION, True),
            },
            outputs={"table": PortType.TABLE},
            params=dict([
                _p("k_list", "int-list", required=True, minimum=1),
                _p("metric", "str", default="umass", choices=("umass", "npmi")),
                _p("top_m", "int", default=10, minimum=1),
                _p("alpha", "float", default=None, nullable=True, minimum=1e-12),
                _p("beta", "float", default=0.01, minimum=1e-12),
                _p("iterations", "int", default=1000, minimum=1),
            ]),
        ),
        ToolSpec(
            name="terms-x-topics",
            inputs={
                "model": (PortType.TOPIC_MODEL, True),
                "dictionary": (PortType.DICTIONARY, True),
            },
            outputs={"table": PortType.TABLE},
            params=dict([_p("n", "int", default=30, minimum=1)]),
        ),
        ToolSpec(
            name="docs-x-topics",
            inputs={
                "model": (PortType.TOPIC_MODEL, True),
                "docs": (PortType.TEXT_COLLECTION, True),
            },
            outputs={"table": PortType.TABLE},
            params={},
        ),
        ToolSpec(
            name="ldavis",
            inputs={
                "model": (PortType.TOPIC_MODEL, True),
                "corpus": (PortType.BOW_CORPUS, True),
                "dictionary": (PortType.DICTIONARY, True),
            },
            outputs={"payload": PortType.VIZ_PAYLOAD},
            params=dict([_p("top_r", "int", default=30, minimum=1)]),
        ),
        ToolSpec(
            name="mtmvis",
            inputs={"table": (PortType.TABLE, True)},
            outputs={"payload": PortType.VIZ_PAYLOAD},
            params=dict([
                _p("grouping_key", "str", required=True),
                _p("mode", "str", default="dominant", choices=("dominant", "mean-theta")),
            ]),
        ),
    ]
}


def registry_description() -> dict:
    """JSON-able registry view: tools, port types, parameter schemas."""
    return {
        "port_types": [t.value for t in PortType],
        "data_formats": {fmt: ptype.value for fmt, ptype in DATA_FORMATS.items()},
        "tools": {name: spec.describe() for name, spec in sorted(TOOLS.items())},
    }


@dataclass(frozen=True)
class SourceSpec:
    """Where a data node's content comes from."""

    path: str
    format: str  # txt-dir | delimited | stopwords
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class NodeSpec:
    node_id: str
    kind: str  # "data" | "tool"
    tool_name: str | None = None
    params: dict = field(default_factory=dict)
    source: SourceSpec | None = None

    def output_ports(self) -> dict[str, PortType]:
        if self.kind == "data":
            if self.source is not None and self.source.format in DATA_FORMATS:
                return {"out": DATA_FORMATS[self.source.format]}
            return {}
        spec = TOOLS.get(self.tool_name or "")
        return dict(spec.outputs) if spec else {}

    def input_ports(self) -> dict[str, tuple[PortType, bool]]:
        if self.kind == "data":
            return {}
        spec = TOOLS.get(self.tool_name or "")
        return dict(spec.inputs) if spec else {}


@dataclass(frozen=True)
class Edge:
    from_node: str
    from_port: str
    to_node: str
    to_port: str

    def as_tuple(self):
        return (self.from_node, self.from_port, self.to_node, self.to_port)


@dataclass
class Workflow:
    name: str = ""
    description: str = ""
    nodes: list[NodeSpec] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    positions: dict[str, tuple[float, float]] = field(default_factory=dict)

    def node(self, node_id: str) -> NodeSpec | None:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        return None


@dataclass(frozen=True)
class Diagnostic:
    code: str  # cycle | dangling-edge | type-mismatch | unfilled-port |
    #            port-conflict | unknown-tool | bad-param | bad-node
    message: str
    node_id: str | None = None
    edge: tuple | None = None

    def as_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.node_id is not None:
            out["node_id"] = self.node_id
        if self.edge is not None:
            out["edge"] = list(self.edge)
        return out


def validate(workflow: Workflow) -> list[Diagnostic]:
    """Check the whole graph and return every diagnostic found (empty = ok)."""
    diags: list[Diagnostic] = []
    seen_ids: set[str] = set()
    for node in workflow.nodes:
        if not _NODE_ID_RE.match(node.node_id or ""):
            diags.append(Diagnostic("bad-node", f"invalid node id {node.node_id!r}", node.node_id))
            continue
        if node.node_id in seen_ids:
            diags.append(Diagnostic("bad-node", f"duplicate node id {node.node_id!r}", node.node_id))
        seen_ids.add(node.node_id)
        if node.kind == "data":
            if node.source is None or node.source.format not in DATA_FORMATS:
                fmt = None if node.source is None else node.source.format
                diags.append(
                    Diagnostic(
                        "bad-node",
                        f"data node {node.node_id!r} has unsupported source format {fmt!r}",
                        node.node_id,
                    )
                )
        elif node.kind == "tool":
            if node.tool_name not in TOOLS:
                diags.append(
                    Diagnostic(
                        "unknown-tool",
                        f"node {node.node_id!r} names unregistered tool {node.tool_name!r}",
                        node.node_id,
                    )
                )
            else:
                diags.extend(_check_params(node))
        else:
            diags.append(
                Diagnostic("bad-node", f"node {node.node_id!r} has unknown kind {node.kind!r}", node.node_id)
            )

    nodes_by_id = {n.node_id: n for n in workflow.nodes}
    incoming: dict[tuple[str, str], int] = {}
    adjacency: dict[str, set[str]] = {n: set() for n in nodes_by_id}
    for edge in workflow.edges:
        tup = edge.as_tuple()
        src = nodes_by_id.get(edge.from_node)
        dst = nodes_by_id.get(edge.to_node)
        ok = True
        if src is None:
            diags.append(Diagnostic("dangling-edge", f"edge {tup} leaves unknown node {edge.from_node!r}", edge=tup))
            ok = False
        elif edge.from_port not in src.output_ports():
            diags.append(
                Diagnostic(
                    "dangling-edge",
                    f"edge {tup} leaves nonexistent output port {edge.from_node}.{edge.from_port}",
                    edge=tup,
                )
            )
            ok = False
        if dst is None:
            diags.append(Diagnostic("dangling-edge", f"edge {tup} enters unknown node {edge.to_node!r}", edge=tup))
            ok = False
        elif edge.to_port not in dst.input_ports():
            diags.append(
                Diagnostic(
                    "dangling-edge",
                    f"edge {tup} enters nonexistent input port {edge.to_node}.{edge.to_port}",
                    edge=tup,
                )
            )
            ok = False
        if ok:
            out_type = src.output_ports()[edge.from_port]
            in_type, _ = dst.input_ports()[edge.to_port]
            if out_type != in_type:
                diags.append(
                    Diagnostic(
                        "type-mismatch",
                        f"edge {tup} connects {out_type.value} output to {in_type.value} input",
                        edge=tup,
                    )
                )
            incoming[(edge.to_node, edge.to_port)] = incoming.get((edge.to_node, edge.to_port), 0) + 1
            adjacency[edge.from_node].add(edge.to_node)

    for node in workflow.nodes:
        for port, (ptype, required) in node.input_ports().items():
            count = incoming.get((node.node_id, port), 0)
            if required and count == 0:
                diags.append(
                    Diagnostic(
                        "unfilled-port",
                        f"required input port {node.node_id}.{port} ({ptype.value}) has no incoming edge",
                        node.node_id,
                    )
                )
            elif count > 1:
                diags.append(
                    Diagnostic(
                        "port-conflict",
                        f"input port {node.node_id}.{port} has {count} incoming edges (exactly one allowed)",
                        node.node_id,
                    )
                )

    diags.extend(_find_cycles(adjacency))
    return diags


def _check_params(node: NodeSpec) -> list[Diagnostic]:
    spec = TOOLS[node.tool_name]
    diags = []
    for name in sorted(node.params):
        if name not in spec.params:
            diags.append(
                Diagnostic("bad-param", f"node {node.node_id!r}: unknown parameter {name!r}", node.node_id)
            )
    for name, pspec in spec.params.items():
        if name not in node.params:
            if pspec.required:
                diags.append(
                    Diagnostic(
                        "bad-param",
                        f"node {node.node_id!r}: required parameter {name!r} missing",
                        node.node_id,
                    )
                )
            continue
        error = pspec.check(node.params[name])
        if error:
            diags.append(Diagnostic("bad-param", f"node {node.node_id!r}: {error}", node.node_id))
    return diags


def _find_cycles(adjacency: dict[str, set[str]]) -> list[Diagnostic]:
    """Kahn's algorithm; whatever cannot be peeled off belongs to a cycle."""
    indegree = {n: 0 for n in adjacency}
    for src, dsts in adjacency.items():
        for dst in dsts:
            if dst in indegree:
                indegree[dst] += 1
    ready = sorted(n for n, deg in indegree.items() if deg == 0)
    seen = 0
    while ready:
        node = ready.pop(0)
        seen += 1
        for dst in sorted(adjacency[node]):
            indegree[dst] -= 1
            if indegree[dst] == 0:
                ready.append(dst)
        ready.sort()
    remaining = sorted(n for n, deg in indegree.items() if deg > 0)
    if seen < len(adjacency) and remaining:
        return [
            Diagnostic(
                "cycle",
                f"workflow contains a cycle through nodes {remaining}",
                node_id=remaining[0],
            )
        ]
    return []


def topological_order(workflow: Workflow) -> list[str]:
    """Deterministic execution order: Kahn's algorithm, ties by node id."""
    adjacency: dict[str, set[str]] = {n.node_id: set() for n in workflow.nodes}
    indegree = {n.node_id: 0 for n in workflow.nodes}
    for edge in workflow.edges:
        if edge.to_node not in adjacency[edge.from_node]:
            adjacency[edge.from_node].add(edge.to_node)
            indegree[edge.to_node] += 1
    ready = sorted(n for n, deg in indegree.items() if deg == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        changed = False
        for dst in adjacency[node]:
            indegree[dst] -= 1
            if indegree[dst] == 0:
                ready.append(dst)
                changed = True
        if changed:
            ready.sort()
    if len(order) != len(workflow.nodes):
        raise WorkflowFormatError("cannot order a cyclic workflow")
    return order


def _document(workflow: Workflow, include_positions: bool) -> dict:
    nodes = []
    for node in sorted(workflow.nodes, key=lambda n: n.node_id):
        entry: dict = {"node_id": node.node_id, "kind": node.kind}
        if node.kind == "tool":
            entry["tool_name"] = node.tool_name
            entry["params"] = node.params
        else:
            entry["source"] = {
                "path": node.source.path,
                "format": node.source.format,
                "options": node.source.options,
            }
        nodes.append(entry)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": workflow.name,
        "description": workflow.description,
        "nodes": nodes,
        "edges": sorted(e.as_tuple() for e in workflow.edges),
    }
    if include_positions and workflow.positions:
        doc["positions"] = {
            node_id: [float(x), float(y)]
            for node_id, (x, y) in sorted(workflow.positions.items())
        }
    return doc


def serialize(workflow: Workflow) -> bytes:
    """Canonical bytes: UTF-8 JSON, sorted keys and collections, LF-terminated."""
    doc = _document(workflow, include_positions=True)
    doc["edges"] = [list(e) for e in doc["edges"]]
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def workflow_hash(workflow: Workflow) -> str:
    """SHA-256 over the canonical serialization without canvas positions."""
    doc = _document(workflow, include_positions=False)
    doc["edges"] = [list(e) for e in doc["edges"]]
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256((text + "\n").encode("utf-8")).hexdigest()


def _expect(condition, message):
    if not condition:
        raise WorkflowFormatError(message)


def workflow_from_document(doc: dict) -> Workflow:
    """Build a Workflow from a parsed JSON document (semantic checks deferred)."""
    _expect(isinstance(doc, dict), "workflow document must be a JSON object")
    version = doc.get("schema_version")
    _expect(
        version == SCHEMA_VERSION,
        f"unsupported workflow schema_version: {version!r} (expected {SCHEMA_VERSION})",
    )
    nodes = []
    _expect(isinstance(doc.get("nodes"), list), "workflow 'nodes' must be a list")
    for i, entry in enumerate(doc["nodes"]):
        _expect(isinstance(entry, dict), f"nodes[{i}] must be an object")
        _expect(isinstance(entry.get("node_id"), str), f"nodes[{i}] missing string 'node_id'")
        kind = entry.get("kind")
        _expect(kind in ("data", "tool"), f"nodes[{i}] has invalid kind {kind!r}")
        if kind == "tool":
            params = entry.get("params", {})
            _expect(isinstance(params, dict), f"nodes[{i}].params must be an object")
            nodes.append(
                NodeSpec(
                    node_id=entry["node_id"],
                    kind="tool",
                    tool_name=entry.get("tool_name"),
                    params=params,
                )
            )
        else:
            source = entry.get("source")
            _expect(isinstance(source, dict), f"nodes[{i}].source must be an object")
            _expect(isinstance(source.get("path"), str), f"nodes[{i}].source.path must be a string")
            _expect(isinstance(source.get("format"), str), f"nodes[{i}].source.format must be a string")
            options = source.get("options", {})
            _expect(isinstance(options, dict), f"nodes[{i}].source.options must be an object")
            nodes.append(
                NodeSpec(
                    node_id=entry["node_id"],
                    kind="data",
                    source=SourceSpec(path=source["path"], format=source["format"], options=options),
                )
            )
    edges = []
    _expect(isinstance(doc.get("edges"), list), "workflow 'edges' must be a list")
    for i, entry in enumerate(doc["edges"]):
        _expect(
            isinstance(entry, list) and len(entry) == 4 and all(isinstance(x, str) for x in entry),
            f"edges[{i}] must be [from_node, from_port, to_node, to_port]",
        )
        edges.append(Edge(*entry))
    positions = {}
    for node_id, xy in (doc.get("positions") or {}).items():
        _expect(
            isinstance(xy, list) and len(xy) == 2,
            f"positions[{node_id!r}] must be [x, y]",
        )
        positions[node_id] = (float(xy[0]), float(xy[1]))
    return Workflow(
        name=doc.get("name", ""),
        description=doc.get("description", ""),
        nodes=nodes,
        edges=edges,
        positions=positions,
    )


def deserialize(data: bytes) -> Workflow:
    """Parse workflow bytes; malformed JSON reports line and column."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise WorkflowFormatError(f"workflow file is not UTF-8: {exc}") from None
    except json.JSONDecodeError as exc:
        raise WorkflowFormatError(
            f"malformed workflow document at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return workflow_from_document(doc)
