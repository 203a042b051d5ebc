"""HTTP service: workflow CRUD, corpus uploads, and a single-flight job
queue executing runs on a dedicated worker thread.

Everything persists as plain JSON files under the data directory, so jobs
and workflows survive restarts. A job interrupted by a shutdown is marked
failed on the next startup rather than silently re-queued.
"""

from __future__ import annotations

import io
import json
import queue
import shutil
import threading
import uuid
import zipfile
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, UploadFile
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__, templates, textprep
from .engine import ExecutionError, execute, sha256_hex
from .workflow import (
    WorkflowFormatError,
    registry_description,
    serialize,
    validate,
    workflow_from_document,
    workflow_hash,
)

_CONTENT_TYPES = {
    ".csv": "text/csv; charset=utf-8",
    ".json": "application/json",
    ".txt": "text/plain; charset=utf-8",
    ".model": "application/octet-stream",
}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class DataStore:
    """File-backed state: workflows, jobs, runs, uploaded corpora."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        for sub in ("workflows", "jobs", "runs", "corpora"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()

    # -- workflows ----------------------------------------------------------
    def workflow_path(self, workflow_id: str) -> Path:
        return self.root / "workflows" / f"{workflow_id}.json"

    def save_workflow(self, workflow_id: str, document: dict) -> dict:
        wf = workflow_from_document(document)
        data = serialize(wf)
        self.workflow_path(workflow_id).write_bytes(data)
        return {"workflow_id": workflow_id, "workflow_hash": workflow_hash(wf)}

    def load_workflow(self, workflow_id: str):
        path = self.workflow_path(workflow_id)
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no workflow {workflow_id!r}")
        return workflow_from_document(json.loads(path.read_text(encoding="utf-8")))

    def list_workflows(self) -> list[dict]:
        out = []
        for path in sorted((self.root / "workflows").glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            out.append(
                {
                    "workflow_id": path.stem,
                    "name": doc.get("name", ""),
                    "description": doc.get("description", ""),
                }
            )
        return out

    # -- jobs ---------------------------------------------------------------
    def job_path(self, job_id: str) -> Path:
        return self.root / "jobs" / f"{job_id}.json"

    def save_job(self, job: dict):
        # atomic replace so a concurrent poll never sees a torn file
        with self.lock:
            path = self.job_path(job["job_id"])
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(
                json.dumps(job, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
            tmp.replace(path)

    def load_job(self, job_id: str) -> dict:
        path = self.job_path(job_id)
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def list_jobs(self) -> list[dict]:
        return [
            json.loads(p.read_text(encoding="utf-8"))
            for p in sorted((self.root / "jobs").glob("*.json"))
        ]

    def run_dir(self, job_id: str) -> Path:
        return self.root / "runs" / job_id

    # -- corpora ------------------------------------------------------------
    def corpus_dir(self, corpus_id: str) -> Path:
        return self.root / "corpora" / corpus_id

    def corpus_meta(self, corpus_id: str) -> dict:
        meta_path = self.corpus_dir(corpus_id) / "meta.json"
        if not meta_path.is_file():
            raise HTTPException(status_code=404, detail=f"no corpus {corpus_id!r}")
        return json.loads(meta_path.read_text(encoding="utf-8"))

    def store_corpus(self, filename: str, data: bytes, options: dict) -> dict:
        corpus_id = sha256_hex(data)[:16]
        target = self.corpus_dir(corpus_id)
        if not (target / "meta.json").is_file():
            target.mkdir(parents=True, exist_ok=True)
            if filename.lower().endswith(".zip"):
                docs_dir = target / "docs"
                docs_dir.mkdir(exist_ok=True)
                with zipfile.ZipFile(io.BytesIO(data)) as zf:
                    for info in zf.infolist():
                        name = Path(info.filename).name
                        if info.is_dir() or not name.lower().endswith(".txt"):
                            continue
                        (docs_dir / name).write_bytes(zf.read(info))
                fmt, source = "txt-dir", "docs"
            else:
                (target / "source.csv").write_bytes(data)
                fmt, source = "delimited", "source.csv"
            try:
                docs = textprep.load_documents(
                    target / source,
                    format=fmt,
                    delimiter=options.get("delimiter", ","),
                    text_column=options.get("text_column", "text"),
                    id_column=options.get("id_column", "id"),
                )
            except textprep.TextPrepError as exc:
                shutil.rmtree(target, ignore_errors=True)
                raise HTTPException(status_code=400, detail=str(exc)) from None
            meta = {
                "corpus_id": corpus_id,
                "filename": filename,
                "format": fmt,
                "source": source,
                "options": options,
                "doc_count": len(docs),
                "uploaded": _now(),
            }
            (target / "meta.json").write_text(
                json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
        return self.corpus_meta(corpus_id)

    def resolve_path(self, raw: str) -> Path | None:
        """Resolve corpus://<id> references against the uploaded-corpus store."""
        if raw.startswith("corpus://"):
            corpus_id = raw[len("corpus://") :]
            meta = self.corpus_meta(corpus_id)
            return self.corpus_dir(corpus_id) / meta["source"]
        return None


class JobWorker:
    """FIFO single-flight executor on one daemon thread."""

    def __init__(self, store: DataStore):
        self.store = store
        self.queue: queue.Queue[str | None] = queue.Queue()
        self.thread: threading.Thread | None = None

    def start(self):
        if self.thread is None or not self.thread.is_alive():
            self.thread = threading.Thread(target=self._loop, daemon=True)
            self.thread.start()

    def submit(self, job_id: str):
        self.queue.put(job_id)

    def _loop(self):
        while True:
            job_id = self.queue.get()
            if job_id is None:
                return
            try:
                self._run(job_id)
            except Exception:  # keep the worker alive whatever a job does
                pass

    def _run(self, job_id: str):
        job = self.store.load_job(job_id)
        job["state"] = "running"
        job["started"] = _now()
        self.store.save_job(job)
        try:
            wf = self.store.load_workflow(job["workflow_id"])
            manifest = execute(
                wf,
                seed=job["seed"],
                output_dir=self.store.run_dir(job_id),
                base_dir=self.store.root,
                path_resolver=self.store.resolve_path,
            )
            job["state"] = "succeeded"
            job["manifest"] = manifest.as_dict()
            job["progress"] = [
                {"node_id": n, "status": s} for n, s in manifest.node_status.items()
            ]
        except ExecutionError as exc:
            # manifest is present iff the job succeeded; the partial manifest
            # remains readable as the run's manifest.json artifact
            job["state"] = "failed"
            job["error"] = str(exc)
            job["progress"] = [
                {"node_id": n, "status": s} for n, s in exc.manifest.node_status.items()
            ]
        except Exception as exc:
            job["state"] = "failed"
            job["error"] = f"{type(exc).__name__}: {exc}"
        job["finished"] = _now()
        self.store.save_job(job)


def create_app(data_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    store = DataStore(data_dir)
    worker = JobWorker(store)

    # a run in flight when the previous process stopped cannot be resumed
    for job in store.list_jobs():
        if job["state"] in ("queued", "running"):
            job["state"] = "failed"
            job["error"] = "interrupted by service shutdown"
            job["finished"] = _now()
            store.save_job(job)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        worker.start()
        yield

    app = FastAPI(title="topicflow", version=__version__, lifespan=lifespan)
    app.state.store = store
    app.state.worker = worker

    @app.get("/api/version")
    def version():
        return {"engine_version": __version__}

    @app.get("/api/tools")
    def tools():
        return registry_description()

    @app.get("/api/templates")
    def list_templates():
        wf = templates.figure1_workflow()
        return [
            {
                "name": wf.name,
                "document": json.loads(serialize(wf).decode("utf-8")),
            }
        ]

    # -- corpora ------------------------------------------------------------
    @app.post("/api/corpora", status_code=201)
    async def upload_corpus(
        file: UploadFile,
        delimiter: str = ",",
        text_column: str = "text",
        id_column: str = "id",
    ):
        data = await file.read()
        meta = store.store_corpus(
            file.filename or "upload",
            data,
            {"delimiter": delimiter, "text_column": text_column, "id_column": id_column},
        )
        return {"corpus_id": meta["corpus_id"], "doc_count": meta["doc_count"]}

    @app.get("/api/corpora")
    def list_corpora():
        out = []
        for path in sorted((store.root / "corpora").glob("*/meta.json")):
            out.append(json.loads(path.read_text(encoding="utf-8")))
        return out

    @app.get("/api/corpora/{corpus_id}")
    def get_corpus(corpus_id: str):
        return store.corpus_meta(corpus_id)

    # -- workflows ----------------------------------------------------------
    @app.post("/api/workflows", status_code=201)
    async def create_workflow(request: Request):
        document = await request.json()
        workflow_id = uuid.uuid4().hex[:12]
        try:
            return store.save_workflow(workflow_id, document)
        except WorkflowFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.get("/api/workflows")
    def list_workflows():
        return store.list_workflows()

    @app.get("/api/workflows/{workflow_id}")
    def get_workflow(workflow_id: str):
        path = store.workflow_path(workflow_id)
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no workflow {workflow_id!r}")
        return JSONResponse(json.loads(path.read_text(encoding="utf-8")))

    @app.put("/api/workflows/{workflow_id}")
    async def update_workflow(workflow_id: str, request: Request):
        if not store.workflow_path(workflow_id).is_file():
            raise HTTPException(status_code=404, detail=f"no workflow {workflow_id!r}")
        document = await request.json()
        try:
            return store.save_workflow(workflow_id, document)
        except WorkflowFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.delete("/api/workflows/{workflow_id}", status_code=204)
    def delete_workflow(workflow_id: str):
        path = store.workflow_path(workflow_id)
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no workflow {workflow_id!r}")
        path.unlink()

    @app.post("/api/workflows/{workflow_id}/validate")
    def validate_workflow(workflow_id: str):
        wf = store.load_workflow(workflow_id)
        return {"diagnostics": [d.as_dict() for d in validate(wf)]}

    # -- runs and jobs ------------------------------------------------------
    @app.post("/api/workflows/{workflow_id}/runs", status_code=201)
    async def start_run(workflow_id: str, request: Request):
        wf = store.load_workflow(workflow_id)  # 404 on unknown id
        body = await request.json() if await request.body() else {}
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise HTTPException(status_code=400, detail="seed must be a 64-bit unsigned integer")
        job_id = uuid.uuid4().hex[:12]
        job = {
            "job_id": job_id,
            "workflow_id": workflow_id,
            "workflow_hash": workflow_hash(wf),
            "seed": seed,
            "state": "queued",
            "created": _now(),
            "started": None,
            "finished": None,
            "error": None,
            "manifest": None,
            "progress": [],
        }
        store.save_job(job)
        worker.submit(job_id)
        return {"job_id": job_id}

    @app.get("/api/jobs")
    def list_jobs():
        return store.list_jobs()

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        return store.load_job(job_id)

    @app.get("/api/runs/{job_id}/artifacts")
    def list_artifacts(job_id: str):
        store.load_job(job_id)  # 404 on unknown id
        run_dir = store.run_dir(job_id)
        if not run_dir.is_dir():
            return []
        return sorted(p.name for p in run_dir.iterdir() if p.is_file())

    @app.get("/api/runs/{job_id}/artifacts/{name}")
    def get_artifact(job_id: str, name: str):
        store.load_job(job_id)
        path = store.run_dir(job_id) / Path(name).name
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no artifact {name!r}")
        media_type = _CONTENT_TYPES.get(path.suffix, "application/octet-stream")
        return FileResponse(path, media_type=media_type)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return {
                "service": "topicflow",
                "version": __version__,
                "api": "/api/tools",
                "note": "no web UI assets configured; pass --ui-dir to serve them",
            }

    return app
