import type {
  Diagnostic,
  Job,
  Registry,
  TemplateEntry,
  WorkflowDocument,
} from "./types.js";

/** Thin fetch client for the workflow service. */
export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = (await response.json()).detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(`${init?.method ?? "GET"} ${path}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  getTools(): Promise<Registry> {
    return this.request("/api/tools");
  }

  getTemplates(): Promise<TemplateEntry[]> {
    return this.request("/api/templates");
  }

  createWorkflow(document: WorkflowDocument): Promise<{ workflow_id: string }> {
    return this.request("/api/workflows", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
  }

  updateWorkflow(id: string, document: WorkflowDocument): Promise<{ workflow_id: string }> {
    return this.request(`/api/workflows/${id}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
  }

  getWorkflow(id: string): Promise<WorkflowDocument> {
    return this.request(`/api/workflows/${id}`);
  }

  validateWorkflow(id: string): Promise<{ diagnostics: Diagnostic[] }> {
    return this.request(`/api/workflows/${id}/validate`, { method: "POST" });
  }

  startRun(workflowId: string, seed: number): Promise<{ job_id: string }> {
    return this.request(`/api/workflows/${workflowId}/runs`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ seed }),
    });
  }

  getJob(jobId: string): Promise<Job> {
    return this.request(`/api/jobs/${jobId}`);
  }

  listArtifacts(jobId: string): Promise<string[]> {
    return this.request(`/api/runs/${jobId}/artifacts`);
  }

  async getArtifactJson<T>(jobId: string, name: string): Promise<T> {
    return this.request(`/api/runs/${jobId}/artifacts/${name}`);
  }

  async getArtifactText(jobId: string, name: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/api/runs/${jobId}/artifacts/${name}`);
    if (!response.ok) {
      throw new Error(`GET artifact ${name}: ${response.statusText}`);
    }
    return response.text();
  }

  artifactUrl(jobId: string, name: string): string {
    return `${this.baseUrl}/api/runs/${jobId}/artifacts/${name}`;
  }
}
