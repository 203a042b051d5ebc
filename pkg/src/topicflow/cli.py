"""Command-line entry points: run, validate, sweep, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, templates
from .engine import ExecutionError, execute
from .evaluation import coherence_sweep
from .lda import LdaConfig
from .workflow import NodeSpec, SourceSpec, WorkflowFormatError, deserialize, validate
from . import corpus as corpus_mod
from . import textprep


def _parse_k_list(text: str) -> list[int]:
    """Accept comma-separated integers and a..b ranges, e.g. '2..8' or '2,4,8'."""
    values: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if ".." in item:
            lo, hi = item.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif item:
            values.append(int(item))
    if not values:
        raise ValueError(f"empty k-list: {text!r}")
    if len(set(values)) != len(values):
        raise ValueError(f"k-list entries must be distinct: {values}")
    if any(k < 1 for k in values):
        raise ValueError(f"k-list entries must be positive: {values}")
    return values


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--corpus expects NODE=PATH, got {pair!r}")
        node_id, path = pair.split("=", 1)
        overrides[node_id] = path
    return overrides


def _load_workflow_file(path: Path):
    if not path.is_file():
        raise WorkflowFormatError(f"workflow file not found: {path}")
    return deserialize(path.read_bytes())


def cmd_run(args) -> int:
    try:
        workflow = _load_workflow_file(Path(args.workflow))
        for node_id, path in _parse_overrides(args.corpus or []).items():
            node = workflow.node(node_id)
            if node is None or node.kind != "data":
                raise ValueError(f"--corpus override names no data node {node_id!r}")
            replacement = NodeSpec(
                node_id=node.node_id,
                kind="data",
                source=SourceSpec(path=path, format=node.source.format, options=node.source.options),
            )
            workflow.nodes[workflow.nodes.index(node)] = replacement
    except (WorkflowFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    diagnostics = validate(workflow)
    if diagnostics:
        for d in diagnostics:
            print(f"[{d.code}] {d.message}", file=sys.stderr)
        return 1
    try:
        manifest = execute(
            workflow,
            seed=args.seed,
            output_dir=args.out,
            base_dir=Path(args.workflow).resolve().parent,
        )
    except ExecutionError as exc:
        print(f"execution failed: {exc}", file=sys.stderr)
        return 2
    print(f"run complete: {len(manifest.artifact_hashes)} artifacts in {args.out}")
    print(f"workflow_hash {manifest.workflow_hash}")
    print(f"fingerprint   {manifest.fingerprint()}")
    return 0


def cmd_validate(args) -> int:
    try:
        workflow = _load_workflow_file(Path(args.workflow))
    except WorkflowFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    diagnostics = validate(workflow)
    if diagnostics:
        for d in diagnostics:
            print(f"[{d.code}] {d.message}", file=sys.stderr)
        return 1
    print("ok")
    return 0


def cmd_sweep(args) -> int:
    try:
        k_list = _parse_k_list(args.k_list)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    corpus_path = Path(args.corpus) if args.corpus else templates.sample_corpus_path()
    stopwords_path = Path(args.stopwords) if args.stopwords else templates.default_stopwords_path()
    try:
        docs = textprep.load_documents(
            corpus_path,
            format=args.format,
            delimiter=args.delimiter,
            text_column=args.text_column,
            id_column=args.id_column,
        )
        stopwords = textprep.load_stopwords(stopwords_path)
        tokenized = textprep.tokenize_all(docs, stopwords)
        dictionary = corpus_mod.build_dictionary(tokenized)
        bow = corpus_mod.build_corpus(tokenized, dictionary)
        template = LdaConfig(
            num_topics=max(k_list), iterations=args.iterations, seed=args.seed
        )
        result = coherence_sweep(
            bow, dictionary, tokenized, k_list, template,
            top_m=args.top_m, metric=args.metric,
        )
    except (textprep.TextPrepError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    table = result.to_csv()
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    data_dir = Path(args.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    app = create_app(data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicflow",
        description="Compose, validate, execute and share topic-modelling workflows.",
    )
    parser.add_argument("--version", action="version", version=f"topicflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="validate and execute a workflow file")
    p_run.add_argument("workflow", help="path to a .workflow.json file")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default="results", help="artifact output directory")
    p_run.add_argument(
        "--corpus",
        action="append",
        metavar="NODE=PATH",
        help="override a data node's source path (repeatable)",
    )
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="report all workflow diagnostics")
    p_val.add_argument("workflow")
    p_val.set_defaults(func=cmd_validate)

    p_sweep = sub.add_parser("sweep", help="train one model per K and report coherence")
    p_sweep.add_argument("--corpus", help="corpus path (default: bundled sample corpus)")
    p_sweep.add_argument("--format", choices=("delimited", "txt-dir"), default="delimited")
    p_sweep.add_argument("--delimiter", default=",")
    p_sweep.add_argument("--text-column", default="text")
    p_sweep.add_argument("--id-column", default="id")
    p_sweep.add_argument("--stopwords", help="stopword file (default: bundled list)")
    p_sweep.add_argument("--k-list", required=True, help="e.g. 2,3,4 or 2..8")
    p_sweep.add_argument("--metric", choices=("umass", "npmi"), default="umass")
    p_sweep.add_argument("--top-m", type=int, default=10)
    p_sweep.add_argument("--iterations", type=int, default=1000)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", help="also write the table to this CSV file")
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--data-dir", default="topicflow-data")
    p_serve.add_argument("--ui-dir", help="directory of built web-UI assets")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
