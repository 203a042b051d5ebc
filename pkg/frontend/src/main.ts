import { ApiClient } from "./api.js";
import { WorkflowEditor } from "./editor.js";
import { CanvasGraph } from "./graph.js";
import { pollJob } from "./jobs.js";
import { MtmView } from "./mtm.js";
import { TopicMapView } from "./topicmap.js";
import type { Job, LdavisPayload, MtmPayload, Registry } from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

async function boot(): Promise<void> {
  const registry: Registry = await api.getTools();
  let graph = new CanvasGraph(registry);
  const editor = new WorkflowEditor(el("editor-root"), graph, registry);
  let workflowId: string | null = null;
  let dirty = true;
  editor.onChange = () => {
    dirty = true;
  };

  const status = el<HTMLElement>("status-line");
  const say = (text: string) => {
    status.textContent = text;
  };

  /** Create or update the server copy of the canvas graph. */
  async function syncWorkflow(): Promise<string> {
    const document_ = editor.graph.toDocument();
    if (workflowId === null) {
      workflowId = (await api.createWorkflow(document_)).workflow_id;
    } else if (dirty) {
      await api.updateWorkflow(workflowId, document_);
    }
    dirty = false;
    return workflowId;
  }

  el<HTMLButtonElement>("btn-template").addEventListener("click", async () => {
    const templates = await api.getTemplates();
    graph = CanvasGraph.fromDocument(templates[0].document, registry);
    editor.setGraph(graph);
    workflowId = null;
    say(`loaded template "${templates[0].name}"`);
  });

  el<HTMLButtonElement>("btn-validate").addEventListener("click", async () => {
    try {
      const id = await syncWorkflow();
      const { diagnostics } = await api.validateWorkflow(id);
      editor.showDiagnostics(diagnostics);
      say(diagnostics.length === 0 ? "workflow is valid" : `${diagnostics.length} diagnostic(s)`);
    } catch (error) {
      say(String(error));
    }
  });

  el<HTMLButtonElement>("btn-save").addEventListener("click", () => {
    const blob = new Blob([JSON.stringify(editor.graph.toDocument(), null, 1)], {
      type: "application/json",
    });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${editor.graph.name || "workflow"}.workflow.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  });

  el<HTMLInputElement>("file-open").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) {
      return;
    }
    graph = CanvasGraph.fromDocument(JSON.parse(await file.text()), registry);
    editor.setGraph(graph);
    workflowId = null;
    say(`opened ${file.name}`);
    input.value = "";
  });

  el<HTMLButtonElement>("btn-run").addEventListener("click", async () => {
    try {
      const id = await syncWorkflow();
      const { diagnostics } = await api.validateWorkflow(id);
      editor.showDiagnostics(diagnostics);
      if (diagnostics.length > 0) {
        say("fix the diagnostics before running");
        return;
      }
      const seed = Number.parseInt(el<HTMLInputElement>("seed-input").value, 10) || 0;
      const { job_id } = await api.startRun(id, seed);
      say(`job ${job_id} queued (seed ${seed})`);
      const job = await pollJob(api, job_id, (update) => renderProgress(update));
      if (job.state === "succeeded") {
        say(`job ${job_id} succeeded`);
        await showResults(job);
      } else {
        say(`job ${job_id} failed: ${job.error}`);
      }
    } catch (error) {
      say(String(error));
    }
  });

  function renderProgress(job: Job): void {
    const box = el("progress-box");
    box.innerHTML = "";
    const line = document.createElement("p");
    line.textContent = `state: ${job.state}`;
    box.appendChild(line);
    for (const entry of job.progress ?? []) {
      const item = document.createElement("span");
      item.className = `progress-node ${entry.status}`;
      item.textContent = `${entry.node_id}: ${entry.status}`;
      box.appendChild(item);
    }
  }

  async function showResults(job: Job): Promise<void> {
    const names = await api.listArtifacts(job.job_id);
    el("results-section").hidden = false;

    const links = el("artifact-links");
    links.innerHTML = "";
    for (const name of names) {
      const link = document.createElement("a");
      link.href = api.artifactUrl(job.job_id, name);
      link.textContent = name;
      link.target = "_blank";
      links.appendChild(link);
    }

    const mapRoot = el("topicmap-root");
    mapRoot.innerHTML = "";
    const ldavisName = names.find((n) => n.endsWith("ldavis.json"));
    if (ldavisName) {
      const payload = await api.getArtifactJson<LdavisPayload>(job.job_id, ldavisName);
      new TopicMapView(mapRoot, payload);
    }

    const mtmRoot = el("mtm-root");
    mtmRoot.innerHTML = "";
    const mtmName = names.find((n) => n.endsWith("mtmvis.json"));
    if (mtmName) {
      const payload = await api.getArtifactJson<MtmPayload>(job.job_id, mtmName);
      new MtmView(mtmRoot, payload);
    }
  }

  say("ready — load the template or build a workflow from the palette");
}

boot().catch((error) => {
  const status = document.getElementById("status-line");
  if (status) {
    status.textContent = `failed to reach the service: ${error}`;
  }
});
