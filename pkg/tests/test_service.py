import io
import json
import time
import zipfile

import pytest
from fastapi.testclient import TestClient

from topicflow.service import create_app
from topicflow.templates import figure1_workflow
from topicflow.workflow import serialize


def template_document(iterations=40):
    return json.loads(serialize(figure1_workflow(iterations=iterations)).decode())


def wait_for_job(client, job_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["state"] in ("succeeded", "failed"):
            return job
        time.sleep(0.05)
    raise AssertionError(f"job {job_id} did not finish")


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


class TestWorkflowCrud:
    def test_create_returns_201_with_id(self, client):
        response = client.post("/api/workflows", json=template_document())
        assert response.status_code == 201
        body = response.json()
        assert "workflow_id" in body and "workflow_hash" in body

    def test_get_put_delete_cycle(self, client):
        workflow_id = client.post("/api/workflows", json=template_document()).json()["workflow_id"]
        fetched = client.get(f"/api/workflows/{workflow_id}")
        assert fetched.status_code == 200
        doc = fetched.json()
        doc["name"] = "renamed"
        assert client.put(f"/api/workflows/{workflow_id}", json=doc).status_code == 200
        assert client.get(f"/api/workflows/{workflow_id}").json()["name"] == "renamed"
        assert client.delete(f"/api/workflows/{workflow_id}").status_code == 204
        assert client.get(f"/api/workflows/{workflow_id}").status_code == 404

    def test_malformed_document_rejected(self, client):
        assert client.post("/api/workflows", json={"schema_version": 99}).status_code == 400

    def test_validate_endpoint(self, client):
        doc = template_document()
        workflow_id = client.post("/api/workflows", json=doc).json()["workflow_id"]
        body = client.post(f"/api/workflows/{workflow_id}/validate").json()
        assert body == {"diagnostics": []}
        doc["edges"].append(["tokenizer", "tokens", "lda", "corpus"])
        workflow_id = client.post("/api/workflows", json=doc).json()["workflow_id"]
        body = client.post(f"/api/workflows/{workflow_id}/validate").json()
        codes = [d["code"] for d in body["diagnostics"]]
        assert "type-mismatch" in codes


class TestRuns:
    def test_run_unknown_workflow_is_404(self, client):
        assert client.post("/api/workflows/nope/runs", json={"seed": 1}).status_code == 404

    def test_job_lifecycle_and_artifacts(self, client):
        workflow_id = client.post("/api/workflows", json=template_document()).json()["workflow_id"]
        job_id = client.post(f"/api/workflows/{workflow_id}/runs", json={"seed": 42}).json()["job_id"]
        job = wait_for_job(client, job_id)
        assert job["state"] == "succeeded"
        assert job["manifest"] is not None
        assert all(p["status"] == "ok" for p in job["progress"])
        names = client.get(f"/api/runs/{job_id}/artifacts").json()
        assert "terms-x-topics.csv" in names and "manifest.json" in names
        art = client.get(f"/api/runs/{job_id}/artifacts/terms-x-topics.csv")
        assert art.status_code == 200
        assert art.headers["content-type"].startswith("text/csv")
        payload = client.get(f"/api/runs/{job_id}/artifacts/ldavis.json")
        assert payload.json()["kind"] == "ldavis"

    def test_failed_run_is_reported(self, client):
        doc = template_document()
        for node in doc["nodes"]:
            if node["node_id"] == "stopwords":
                node["source"]["path"] = "/nonexistent/stopwords.txt"
        workflow_id = client.post("/api/workflows", json=doc).json()["workflow_id"]
        job_id = client.post(f"/api/workflows/{workflow_id}/runs", json={"seed": 1}).json()["job_id"]
        job = wait_for_job(client, job_id)
        assert job["state"] == "failed"
        assert "stopwords" in job["error"]
        assert job["manifest"] is None  # manifest present iff succeeded
        assert any(p["node_id"] == "stopwords" and p["status"] == "failed" for p in job["progress"])
        # the partial manifest is still readable as a run artifact
        assert "manifest.json" in client.get(f"/api/runs/{job_id}/artifacts").json()

    def test_bad_seed_rejected(self, client):
        workflow_id = client.post("/api/workflows", json=template_document()).json()["workflow_id"]
        assert (
            client.post(f"/api/workflows/{workflow_id}/runs", json={"seed": -3}).status_code == 400
        )


class TestPersistence:
    def test_jobs_and_workflows_survive_restart(self, tmp_path):
        data_dir = tmp_path / "data"
        with TestClient(create_app(data_dir)) as client:
            workflow_id = client.post("/api/workflows", json=template_document()).json()[
                "workflow_id"
            ]
            job_id = client.post(f"/api/workflows/{workflow_id}/runs", json={"seed": 5}).json()[
                "job_id"
            ]
            before = wait_for_job(client, job_id)
            assert before["state"] == "succeeded"

        with TestClient(create_app(data_dir)) as client:
            after = client.get(f"/api/jobs/{job_id}").json()
            assert after == before
            assert client.get(f"/api/workflows/{workflow_id}").status_code == 200
            names = client.get(f"/api/runs/{job_id}/artifacts").json()
            assert "lda.model" in names

    def test_interrupted_jobs_marked_failed_on_startup(self, tmp_path):
        data_dir = tmp_path / "data"
        store_dir = data_dir / "jobs"
        store_dir.mkdir(parents=True)
        (store_dir / "j1.json").write_text(
            json.dumps({"job_id": "j1", "state": "running", "workflow_id": "w"}), encoding="utf-8"
        )
        with TestClient(create_app(data_dir)) as client:
            job = client.get("/api/jobs/j1").json()
            assert job["state"] == "failed"
            assert "interrupted" in job["error"]


class TestCorpora:
    def test_upload_delimited(self, client):
        body = b"id,text,year\na,alpha beta,2019\nb,gamma,2020\n"
        response = client.post(
            "/api/corpora", files={"file": ("docs.csv", body, "text/csv")}
        )
        assert response.status_code == 201
        meta = response.json()
        assert meta["doc_count"] == 2
        listed = client.get("/api/corpora").json()
        assert any(c["corpus_id"] == meta["corpus_id"] for c in listed)
        assert client.get(f"/api/corpora/{meta['corpus_id']}").json()["doc_count"] == 2

    def test_upload_zip_of_txt(self, client):
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w") as zf:
            zf.writestr("one.txt", "hello world")
            zf.writestr("two.txt", "more text")
        response = client.post(
            "/api/corpora", files={"file": ("corpus.zip", buf.getvalue(), "application/zip")}
        )
        assert response.status_code == 201
        assert response.json()["doc_count"] == 2

    def test_duplicate_upload_deduplicates(self, client):
        body = b"id,text\na,x\n"
        first = client.post("/api/corpora", files={"file": ("a.csv", body, "text/csv")}).json()
        second = client.post("/api/corpora", files={"file": ("b.csv", body, "text/csv")}).json()
        assert first["corpus_id"] == second["corpus_id"]

    def test_invalid_upload_rejected(self, client):
        body = b"wrong,header\n1,2\n"
        response = client.post("/api/corpora", files={"file": ("a.csv", body, "text/csv")})
        assert response.status_code == 400

    def test_workflow_can_reference_uploaded_corpus(self, client):
        body = b"id,text,year\n" + b"".join(
            f"d{i},word{i % 3} common tokens here,201{i % 2}\n".encode() for i in range(8)
        )
        corpus_id = client.post(
            "/api/corpora", files={"file": ("c.csv", body, "text/csv")}
        ).json()["corpus_id"]
        doc = template_document(iterations=10)
        for node in doc["nodes"]:
            if node["node_id"] == "docs":
                node["source"]["path"] = f"corpus://{corpus_id}"
        workflow_id = client.post("/api/workflows", json=doc).json()["workflow_id"]
        job_id = client.post(f"/api/workflows/{workflow_id}/runs", json={"seed": 2}).json()["job_id"]
        job = wait_for_job(client, job_id)
        assert job["state"] == "succeeded"


class TestRegistry:
    def test_tools_endpoint_feeds_the_palette(self, client):
        registry = client.get("/api/tools").json()
        assert "tokenizer" in registry["tools"]
        assert registry["tools"]["tokenizer"]["outputs"]["tokens"] == "TokenizedCollection"
        assert registry["data_formats"]["stopwords"] == "StopwordList"

    def test_templates_endpoint(self, client):
        templates = client.get("/api/templates").json()
        assert templates[0]["name"] == "topic-modelling"
        node_ids = {n["node_id"] for n in templates[0]["document"]["nodes"]}
        assert {"docs", "stopwords", "tokenizer", "corpus-builder", "lda"} <= node_ids
