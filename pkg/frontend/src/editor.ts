import type { CanvasEdge, CanvasGraph, CanvasNode } from "./graph.js";
import type { Diagnostic, ParamInfo, Registry } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_WIDTH = 150;
const NODE_HEADER = 26;
const PORT_SPACING = 20;
const PORT_RADIUS = 5;

interface PendingConnection {
  fromNode: string;
  fromPort: string;
  line: SVGLineElement;
}

/**
 * SVG workflow editor: a palette built from the service registry, nodes
 * dragged on a canvas, edges drawn from output to input ports. Invalid
 * connections are refused while dragging, with the same verdict the
 * server's validator would give; server diagnostics render as badges.
 */
export class WorkflowEditor {
  private svg: SVGSVGElement;
  private edgeLayer: SVGGElement;
  private nodeLayer: SVGGElement;
  private paramPanel: HTMLElement;
  private messageBox: HTMLElement;
  private pending: PendingConnection | null = null;
  private dragging: { node: CanvasNode; dx: number; dy: number } | null = null;
  private selectedNode: string | null = null;
  private selectedEdge: CanvasEdge | null = null;
  private badges = new Map<string, string[]>();
  onChange: (() => void) | null = null;

  constructor(
    private root: HTMLElement,
    public graph: CanvasGraph,
    private registry: Registry,
  ) {
    root.innerHTML = "";
    root.classList.add("editor");

    const palette = this.buildPalette();
    const canvasBox = document.createElement("div");
    canvasBox.className = "canvas-box";
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "canvas");
    this.svg.setAttribute("width", "100%");
    this.svg.setAttribute("height", "560");
    this.edgeLayer = document.createElementNS(SVG_NS, "g");
    this.nodeLayer = document.createElementNS(SVG_NS, "g");
    this.svg.append(this.edgeLayer, this.nodeLayer);
    canvasBox.appendChild(this.svg);

    this.messageBox = document.createElement("div");
    this.messageBox.className = "editor-message";
    canvasBox.appendChild(this.messageBox);

    this.paramPanel = document.createElement("div");
    this.paramPanel.className = "param-panel";

    this.root.append(palette, canvasBox, this.paramPanel);

    this.svg.addEventListener("mousemove", (e) => this.onMouseMove(e));
    this.svg.addEventListener("mouseup", () => this.onMouseUp());
    this.svg.addEventListener("mouseleave", () => this.cancelPending());
    document.addEventListener("keydown", (e) => {
      if (e.key === "Delete" || e.key === "Backspace") {
        this.deleteSelection();
      }
    });

    this.render();
  }

  setGraph(graph: CanvasGraph): void {
    this.graph = graph;
    this.selectedNode = null;
    this.selectedEdge = null;
    this.badges.clear();
    this.render();
    this.changed();
  }

  showDiagnostics(diagnostics: Diagnostic[]): void {
    this.badges.clear();
    for (const d of diagnostics) {
      const target = d.node_id ?? d.edge?.[2] ?? null;
      if (target) {
        const list = this.badges.get(target) ?? [];
        list.push(`[${d.code}] ${d.message}`);
        this.badges.set(target, list);
      }
    }
    this.say(
      diagnostics.length === 0
        ? "validation: clean"
        : `validation: ${diagnostics.length} diagnostic(s) — hover the marked nodes`,
      diagnostics.length === 0 ? "ok" : "warn",
    );
    this.render();
  }

  private changed(): void {
    this.onChange?.();
  }

  private say(text: string, tone: "ok" | "warn" | "err" | "" = ""): void {
    this.messageBox.textContent = text;
    this.messageBox.dataset.tone = tone;
  }

  private buildPalette(): HTMLElement {
    const palette = document.createElement("div");
    palette.className = "palette";
    const toolsHeading = document.createElement("h3");
    toolsHeading.textContent = "tools";
    palette.appendChild(toolsHeading);
    for (const name of Object.keys(this.registry.tools).sort()) {
      const button = document.createElement("button");
      button.textContent = name;
      button.title = this.toolSummary(name);
      button.addEventListener("click", () => {
        const node = this.graph.addToolNode(name, 80 + Math.random() * 240, 60 + Math.random() * 300);
        this.selectNode(node.id);
        this.render();
        this.changed();
      });
      palette.appendChild(button);
    }
    const dataHeading = document.createElement("h3");
    dataHeading.textContent = "data";
    palette.appendChild(dataHeading);
    for (const format of Object.keys(this.registry.data_formats).sort()) {
      const button = document.createElement("button");
      button.textContent = `${format} source`;
      button.title = `produces ${this.registry.data_formats[format]}`;
      button.addEventListener("click", () => {
        const node = this.graph.addDataNode(format, "", 60, 60 + Math.random() * 300);
        this.selectNode(node.id);
        this.render();
        this.changed();
      });
      palette.appendChild(button);
    }
    return palette;
  }

  private toolSummary(name: string): string {
    const tool = this.registry.tools[name];
    const inputs = Object.entries(tool.inputs)
      .map(([port, info]) => `${port}: ${info.type}`)
      .join(", ");
    const outputs = Object.entries(tool.outputs)
      .map(([port, type]) => `${port}: ${type}`)
      .join(", ");
    return `in (${inputs || "none"}) → out (${outputs})`;
  }

  // -- rendering ------------------------------------------------------------

  render(): void {
    this.edgeLayer.innerHTML = "";
    this.nodeLayer.innerHTML = "";
    for (const edge of this.graph.edges) {
      this.edgeLayer.appendChild(this.renderEdge(edge));
    }
    for (const node of this.graph.nodes) {
      this.nodeLayer.appendChild(this.renderNode(node));
    }
    this.renderParams();
  }

  private nodeHeight(node: CanvasNode): number {
    const ports = Math.max(
      Object.keys(this.graph.inputPorts(node)).length,
      Object.keys(this.graph.outputPorts(node)).length,
      1,
    );
    return NODE_HEADER + ports * PORT_SPACING + 6;
  }

  private portPosition(node: CanvasNode, port: string, side: "in" | "out"): [number, number] {
    const names = Object.keys(side === "in" ? this.graph.inputPorts(node) : this.graph.outputPorts(node));
    const index = Math.max(0, names.indexOf(port));
    return [
      node.x + (side === "in" ? 0 : NODE_WIDTH),
      node.y + NODE_HEADER + PORT_SPACING * index + PORT_SPACING / 2,
    ];
  }

  private renderEdge(edge: CanvasEdge): SVGElement {
    const from = this.graph.node(edge.fromNode);
    const to = this.graph.node(edge.toNode);
    const path = document.createElementNS(SVG_NS, "path");
    if (!from || !to) {
      return path;
    }
    const [x1, y1] = this.portPosition(from, edge.fromPort, "out");
    const [x2, y2] = this.portPosition(to, edge.toPort, "in");
    const bend = Math.max(40, (x2 - x1) / 2);
    path.setAttribute("d", `M ${x1} ${y1} C ${x1 + bend} ${y1}, ${x2 - bend} ${y2}, ${x2} ${y2}`);
    const isSelected =
      this.selectedEdge !== null &&
      this.selectedEdge.fromNode === edge.fromNode &&
      this.selectedEdge.fromPort === edge.fromPort &&
      this.selectedEdge.toNode === edge.toNode &&
      this.selectedEdge.toPort === edge.toPort;
    path.setAttribute("class", "edge" + (isSelected ? " selected" : ""));
    path.addEventListener("click", () => {
      this.selectedEdge = edge;
      this.selectedNode = null;
      this.render();
    });
    return path;
  }

  private renderNode(node: CanvasNode): SVGGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("transform", `translate(${node.x}, ${node.y})`);
    const height = this.nodeHeight(node);

    const body = document.createElementNS(SVG_NS, "rect");
    body.setAttribute("class", `node ${node.kind}` + (this.selectedNode === node.id ? " selected" : ""));
    body.setAttribute("width", String(NODE_WIDTH));
    body.setAttribute("height", String(height));
    body.setAttribute("rx", "6");
    group.appendChild(body);

    const title = document.createElementNS(SVG_NS, "text");
    title.setAttribute("class", "node-title");
    title.setAttribute("x", String(NODE_WIDTH / 2));
    title.setAttribute("y", "17");
    title.textContent = node.id;
    group.appendChild(title);

    const badge = this.badges.get(node.id);
    if (badge) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("class", "badge");
      dot.setAttribute("cx", String(NODE_WIDTH - 10));
      dot.setAttribute("cy", "10");
      dot.setAttribute("r", "6");
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = badge.join("\n");
      dot.appendChild(tip);
      group.appendChild(dot);
    }

    body.addEventListener("mousedown", (event) => {
      const point = this.svgPoint(event);
      this.dragging = { node, dx: point[0] - node.x, dy: point[1] - node.y };
      this.selectNode(node.id);
    });

    Object.entries(this.graph.inputPorts(node)).forEach(([port, info]) => {
      const [x, y] = this.portPosition(node, port, "in");
      group.appendChild(
        this.renderPort(node, port, x - node.x, y - node.y, `${port}: ${info.type}`, "in"),
      );
    });
    Object.entries(this.graph.outputPorts(node)).forEach(([port, type]) => {
      const [x, y] = this.portPosition(node, port, "out");
      group.appendChild(this.renderPort(node, port, x - node.x, y - node.y, `${port}: ${type}`, "out"));
    });
    return group;
  }

  private renderPort(
    node: CanvasNode,
    port: string,
    x: number,
    y: number,
    label: string,
    side: "in" | "out",
  ): SVGElement {
    const group = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("class", `port ${side}`);
    circle.setAttribute("cx", String(x));
    circle.setAttribute("cy", String(y));
    circle.setAttribute("r", String(PORT_RADIUS));
    const tip = document.createElementNS(SVG_NS, "title");
    tip.textContent = label;
    circle.appendChild(tip);

    if (side === "out") {
      circle.addEventListener("mousedown", (event) => {
        event.stopPropagation();
        this.startPending(node.id, port, event);
      });
    } else {
      circle.addEventListener("mouseup", (event) => {
        event.stopPropagation();
        this.finishPending(node.id, port);
      });
    }
    group.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("class", "port-label");
    text.setAttribute("x", String(side === "in" ? x + 9 : x - 9));
    text.setAttribute("y", String(y + 3));
    text.setAttribute("text-anchor", side === "in" ? "start" : "end");
    text.textContent = port;
    group.appendChild(text);
    return group;
  }

  // -- interactions ----------------------------------------------------------

  private svgPoint(event: MouseEvent): [number, number] {
    const rect = this.svg.getBoundingClientRect();
    return [event.clientX - rect.left, event.clientY - rect.top];
  }

  private selectNode(id: string): void {
    this.selectedNode = id;
    this.selectedEdge = null;
    this.render();
  }

  private startPending(fromNode: string, fromPort: string, event: MouseEvent): void {
    const node = this.graph.node(fromNode)!;
    const [x, y] = this.portPosition(node, fromPort, "out");
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", "pending-edge");
    line.setAttribute("x1", String(x));
    line.setAttribute("y1", String(y));
    const [mx, my] = this.svgPoint(event);
    line.setAttribute("x2", String(mx));
    line.setAttribute("y2", String(my));
    this.edgeLayer.appendChild(line);
    this.pending = { fromNode, fromPort, line };
  }

  /** Complete a drag onto an input port; refusals show the verdict. */
  finishPending(toNode: string, toPort: string): void {
    if (!this.pending) {
      return;
    }
    const { fromNode, fromPort } = this.pending;
    this.cancelPending();
    const verdict = this.graph.connect(fromNode, fromPort, toNode, toPort);
    if (verdict.ok) {
      this.say(`connected ${fromNode}.${fromPort} → ${toNode}.${toPort}`, "ok");
      this.render();
      this.changed();
    } else {
      this.say(`connection refused [${verdict.code}]: ${verdict.reason}`, "err");
    }
  }

  private cancelPending(): void {
    if (this.pending) {
      this.pending.line.remove();
      this.pending = null;
    }
  }

  private onMouseMove(event: MouseEvent): void {
    const [x, y] = this.svgPoint(event);
    if (this.pending) {
      this.pending.line.setAttribute("x2", String(x));
      this.pending.line.setAttribute("y2", String(y));
    } else if (this.dragging) {
      this.dragging.node.x = x - this.dragging.dx;
      this.dragging.node.y = y - this.dragging.dy;
      this.render();
    }
  }

  private onMouseUp(): void {
    if (this.dragging) {
      this.dragging = null;
      this.changed();
    }
    this.cancelPending();
  }

  private deleteSelection(): void {
    if (this.selectedEdge) {
      this.graph.removeEdge(this.selectedEdge);
      this.selectedEdge = null;
    } else if (this.selectedNode) {
      this.graph.removeNode(this.selectedNode);
      this.selectedNode = null;
    } else {
      return;
    }
    this.render();
    this.changed();
  }

  // -- parameter panel ---------------------------------------------------------

  private renderParams(): void {
    this.paramPanel.innerHTML = "";
    const node = this.selectedNode ? this.graph.node(this.selectedNode) : undefined;
    const heading = document.createElement("h3");
    heading.textContent = node ? `${node.id}` : "parameters";
    this.paramPanel.appendChild(heading);
    if (!node) {
      const hint = document.createElement("p");
      hint.textContent = "select a node to edit its parameters";
      this.paramPanel.appendChild(hint);
      return;
    }
    if (node.kind === "data") {
      this.renderDataParams(node);
    } else {
      this.renderToolParams(node);
    }
  }

  private field(labelText: string, input: HTMLElement): HTMLElement {
    const row = document.createElement("label");
    row.className = "param-row";
    const span = document.createElement("span");
    span.textContent = labelText;
    row.append(span, input);
    return row;
  }

  private renderDataParams(node: CanvasNode): void {
    const path = document.createElement("input");
    path.value = node.source!.path;
    path.placeholder = "path or corpus://<id>";
    path.addEventListener("change", () => {
      node.source!.path = path.value;
      this.changed();
    });
    this.paramPanel.appendChild(this.field("source path", path));

    const note = document.createElement("p");
    note.className = "param-note";
    note.textContent = `format: ${node.source!.format} → ${this.registry.data_formats[node.source!.format]}`;
    this.paramPanel.appendChild(note);
  }

  private renderToolParams(node: CanvasNode): void {
    const tool = this.registry.tools[node.toolName!];
    for (const [name, info] of Object.entries(tool.params)) {
      this.paramPanel.appendChild(this.field(name, this.paramInput(node, name, info)));
    }
  }

  private paramInput(node: CanvasNode, name: string, info: ParamInfo): HTMLElement {
    const current = node.params[name];
    if (info.choices) {
      const select = document.createElement("select");
      for (const choice of info.choices) {
        const option = document.createElement("option");
        option.value = String(choice);
        option.textContent = String(choice);
        option.selected = current === choice;
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        node.params[name] = select.value;
        this.changed();
      });
      return select;
    }
    if (info.kind === "bool") {
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = Boolean(current);
      box.addEventListener("change", () => {
        node.params[name] = box.checked;
        this.changed();
      });
      return box;
    }
    const input = document.createElement("input");
    input.value = current === null || current === undefined ? "" : String(current);
    input.placeholder = info.required ? "required" : "default";
    input.addEventListener("change", () => {
      node.params[name] = parseParamValue(input.value, info);
      this.changed();
    });
    return input;
  }
}

/** Parse a text-field value according to the parameter schema. */
export function parseParamValue(raw: string, info: ParamInfo): unknown {
  const text = raw.trim();
  if (text === "") {
    return info.nullable ? null : info.default;
  }
  switch (info.kind) {
    case "int":
      return Number.parseInt(text, 10);
    case "float":
      return Number.parseFloat(text);
    case "int-list":
      return text.split(",").map((part) => Number.parseInt(part.trim(), 10));
    case "str-list":
      return text.split(",").map((part) => part.trim());
    default:
      return text;
  }
}
