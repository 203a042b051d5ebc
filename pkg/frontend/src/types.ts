/** Wire types for the workflow service API. */

export type PortTypeName =
  | "TextCollection"
  | "StopwordList"
  | "TokenizedCollection"
  | "Dictionary"
  | "BowCorpus"
  | "TopicModel"
  | "Table"
  | "VizPayload";

export interface PortInfo {
  type: PortTypeName;
  required: boolean;
}

export interface ParamInfo {
  kind: "int" | "float" | "str" | "bool" | "int-list" | "str-list";
  required: boolean;
  default: unknown;
  choices?: unknown[];
  minimum?: number;
  maximum?: number;
  nullable?: boolean;
}

export interface ToolInfo {
  inputs: Record<string, PortInfo>;
  outputs: Record<string, PortTypeName>;
  params: Record<string, ParamInfo>;
}

export interface Registry {
  port_types: PortTypeName[];
  data_formats: Record<string, PortTypeName>;
  tools: Record<string, ToolInfo>;
}

export interface SourceSpec {
  path: string;
  format: string;
  options: Record<string, unknown>;
}

export interface WorkflowNode {
  node_id: string;
  kind: "data" | "tool";
  tool_name?: string;
  params?: Record<string, unknown>;
  source?: SourceSpec;
}

/** [from_node, from_port, to_node, to_port] */
export type WorkflowEdge = [string, string, string, string];

export interface WorkflowDocument {
  schema_version: number;
  name: string;
  description: string;
  nodes: WorkflowNode[];
  edges: WorkflowEdge[];
  positions?: Record<string, [number, number]>;
}

export interface Diagnostic {
  code: string;
  message: string;
  node_id?: string;
  edge?: WorkflowEdge;
}

export interface Job {
  job_id: string;
  workflow_id: string;
  state: "queued" | "running" | "succeeded" | "failed";
  seed: number;
  error: string | null;
  manifest: { artifact_hashes: Record<string, string> } | null;
  progress: { node_id: string; status: string }[];
}

export interface LdavisPayload {
  schema_version: number;
  kind: "ldavis";
  k: number;
  proportions: number[];
  topic_order: number[];
  coords: [number, number][];
  distances: number[][];
  lambda_grid: number[];
  /** term_table[topicIndex][lambdaIndex] -> ranked [term, relevance] pairs */
  term_table: [string, number][][][];
  default_terms: [string, number][];
}

export interface MtmGroup {
  value: string;
  doc_count: number;
  shares: number[];
}

export interface MtmPayload {
  schema_version: number;
  kind: "mtm";
  grouping_key: string;
  mode: string;
  k: number;
  groups: MtmGroup[];
}

export interface TemplateEntry {
  name: string;
  document: WorkflowDocument;
}
