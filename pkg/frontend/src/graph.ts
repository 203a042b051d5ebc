import type {
  PortTypeName,
  Registry,
  WorkflowDocument,
  WorkflowEdge,
  WorkflowNode,
} from "./types.js";

export interface CanvasNode {
  id: string;
  kind: "data" | "tool";
  toolName?: string;
  params: Record<string, unknown>;
  source?: { path: string; format: string; options: Record<string, unknown> };
  x: number;
  y: number;
}

export interface CanvasEdge {
  fromNode: string;
  fromPort: string;
  toNode: string;
  toPort: string;
}

export type ConnectionVerdict =
  | { ok: true }
  | { ok: false; code: string; reason: string };

/**
 * Client-side mirror of the server's workflow graph plus canvas positions.
 * Connection rules come from the registry fetched over /api/tools, so the
 * editor refuses exactly the edges the server would refuse.
 */
export class CanvasGraph {
  nodes: CanvasNode[] = [];
  edges: CanvasEdge[] = [];
  name = "untitled";
  description = "";

  constructor(private registry: Registry) {}

  node(id: string): CanvasNode | undefined {
    return this.nodes.find((n) => n.id === id);
  }

  outputPorts(node: CanvasNode): Record<string, PortTypeName> {
    if (node.kind === "data") {
      const portType = this.registry.data_formats[node.source?.format ?? ""];
      return portType ? { out: portType } : {};
    }
    return this.registry.tools[node.toolName ?? ""]?.outputs ?? {};
  }

  inputPorts(node: CanvasNode): Record<string, { type: PortTypeName; required: boolean }> {
    if (node.kind === "data") {
      return {};
    }
    return this.registry.tools[node.toolName ?? ""]?.inputs ?? {};
  }

  uniqueId(base: string): string {
    if (!this.node(base)) {
      return base;
    }
    for (let i = 2; ; i++) {
      if (!this.node(`${base}-${i}`)) {
        return `${base}-${i}`;
      }
    }
  }

  addToolNode(toolName: string, x: number, y: number): CanvasNode {
    const tool = this.registry.tools[toolName];
    if (!tool) {
      throw new Error(`unknown tool: ${toolName}`);
    }
    const params: Record<string, unknown> = {};
    for (const [name, info] of Object.entries(tool.params)) {
      if (info.required && info.default === null) {
        continue; // the parameter panel will demand a value
      }
      params[name] = info.default;
    }
    const node: CanvasNode = {
      id: this.uniqueId(toolName),
      kind: "tool",
      toolName,
      params,
      x,
      y,
    };
    this.nodes.push(node);
    return node;
  }

  addDataNode(format: string, path: string, x: number, y: number): CanvasNode {
    if (!(format in this.registry.data_formats)) {
      throw new Error(`unknown data format: ${format}`);
    }
    const node: CanvasNode = {
      id: this.uniqueId(format === "stopwords" ? "stopwords" : "docs"),
      kind: "data",
      params: {},
      source: { path, format, options: {} },
      x,
      y,
    };
    this.nodes.push(node);
    return node;
  }

  removeNode(id: string): void {
    this.nodes = this.nodes.filter((n) => n.id !== id);
    this.edges = this.edges.filter((e) => e.fromNode !== id && e.toNode !== id);
  }

  removeEdge(edge: CanvasEdge): void {
    this.edges = this.edges.filter(
      (e) =>
        !(
          e.fromNode === edge.fromNode &&
          e.fromPort === edge.fromPort &&
          e.toNode === edge.toNode &&
          e.toPort === edge.toPort
        ),
    );
  }

  /**
   * The drag-time connection rule. Mirrors server validation: the ports
   * must exist, their types must match exactly, the input must be free,
   * and the edge must not close a cycle.
   */
  canConnect(fromNode: string, fromPort: string, toNode: string, toPort: string): ConnectionVerdict {
    const source = this.node(fromNode);
    const target = this.node(toNode);
    if (!source || !target) {
      return { ok: false, code: "dangling-edge", reason: "both ends must be existing nodes" };
    }
    const outType = this.outputPorts(source)[fromPort];
    if (!outType) {
      return { ok: false, code: "dangling-edge", reason: `no output port ${fromNode}.${fromPort}` };
    }
    const input = this.inputPorts(target)[toPort];
    if (!input) {
      return { ok: false, code: "dangling-edge", reason: `no input port ${toNode}.${toPort}` };
    }
    if (outType !== input.type) {
      return {
        ok: false,
        code: "type-mismatch",
        reason: `${outType} output cannot feed ${input.type} input`,
      };
    }
    if (this.edges.some((e) => e.toNode === toNode && e.toPort === toPort)) {
      return { ok: false, code: "port-conflict", reason: `${toNode}.${toPort} is already connected` };
    }
    if (fromNode === toNode || this.reaches(toNode, fromNode)) {
      return { ok: false, code: "cycle", reason: "connection would create a cycle" };
    }
    return { ok: true };
  }

  /** True if `target` is reachable from `start` along existing edges. */
  private reaches(start: string, target: string): boolean {
    const pending = [start];
    const seen = new Set<string>();
    while (pending.length) {
      const current = pending.pop()!;
      if (current === target) {
        return true;
      }
      if (seen.has(current)) {
        continue;
      }
      seen.add(current);
      for (const edge of this.edges) {
        if (edge.fromNode === current) {
          pending.push(edge.toNode);
        }
      }
    }
    return false;
  }

  connect(fromNode: string, fromPort: string, toNode: string, toPort: string): ConnectionVerdict {
    const verdict = this.canConnect(fromNode, fromPort, toNode, toPort);
    if (verdict.ok) {
      this.edges.push({ fromNode, fromPort, toNode, toPort });
    }
    return verdict;
  }

  /** Serialize into the server's workflow document schema. */
  toDocument(): WorkflowDocument {
    const nodes: WorkflowNode[] = this.nodes.map((n) =>
      n.kind === "tool"
        ? { node_id: n.id, kind: "tool", tool_name: n.toolName, params: n.params }
        : { node_id: n.id, kind: "data", source: { ...n.source! } },
    );
    const edges: WorkflowEdge[] = this.edges.map((e) => [
      e.fromNode,
      e.fromPort,
      e.toNode,
      e.toPort,
    ]);
    const positions: Record<string, [number, number]> = {};
    for (const n of this.nodes) {
      positions[n.id] = [n.x, n.y];
    }
    return {
      schema_version: 1,
      name: this.name,
      description: this.description,
      nodes,
      edges,
      positions,
    };
  }

  /** Load a server workflow document, keeping stored positions if present. */
  static fromDocument(document: WorkflowDocument, registry: Registry): CanvasGraph {
    const graph = new CanvasGraph(registry);
    graph.name = document.name;
    graph.description = document.description;
    document.nodes.forEach((n, index) => {
      const [x, y] = document.positions?.[n.node_id] ?? [60 + 190 * (index % 5), 60 + 130 * Math.floor(index / 5)];
      graph.nodes.push(
        n.kind === "tool"
          ? {
              id: n.node_id,
              kind: "tool",
              toolName: n.tool_name,
              params: { ...(n.params ?? {}) },
              x,
              y,
            }
          : {
              id: n.node_id,
              kind: "data",
              params: {},
              source: { ...n.source!, options: n.source!.options ?? {} },
              x,
              y,
            },
      );
    });
    graph.edges = document.edges.map(([fromNode, fromPort, toNode, toPort]) => ({
      fromNode,
      fromPort,
      toNode,
      toPort,
    }));
    return graph;
  }
}
