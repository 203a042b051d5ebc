import type { LdavisPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 460;
const HEIGHT = 380;
const MARGIN = 40;
const MIN_RADIUS = 10;
const MAX_RADIUS = 42;

/**
 * The intertopic-map view: one circle per topic, area scaled by the
 * topic's marginal proportion, positions straight from the server's 2D
 * layout. Clicking a circle shows that topic's term list; the lambda
 * slider switches between the server's precomputed relevance rankings —
 * the client does no model arithmetic.
 */
export class TopicMapView {
  private selected: number | null = null; // 1-based topic id
  private lambdaIndex: number;
  private svg!: SVGSVGElement;
  private panel!: HTMLElement;
  private slider!: HTMLInputElement;
  private sliderLabel!: HTMLElement;

  constructor(
    private container: HTMLElement,
    private payload: LdavisPayload,
  ) {
    const grid = payload.lambda_grid;
    this.lambdaIndex = grid.indexOf(1.0) >= 0 ? grid.indexOf(1.0) : grid.length - 1;
    this.build();
  }

  get lambda(): number {
    return this.payload.lambda_grid[this.lambdaIndex];
  }

  setLambda(value: number): void {
    const index = this.payload.lambda_grid.findIndex((v) => Math.abs(v - value) < 1e-9);
    if (index < 0) {
      throw new Error(`lambda ${value} is not on the precomputed grid`);
    }
    this.lambdaIndex = index;
    this.slider.value = String(index);
    this.renderPanel();
  }

  selectTopic(topic: number | null): void {
    this.selected = topic;
    this.renderCircles();
    this.renderPanel();
  }

  /** The term list currently shown, in display order. */
  visibleTerms(): string[] {
    if (this.selected === null) {
      return this.payload.default_terms.map(([term]) => term);
    }
    return this.payload.term_table[this.selected - 1][this.lambdaIndex].map(([term]) => term);
  }

  private build(): void {
    this.container.innerHTML = "";
    this.container.classList.add("topicmap");

    const mapBox = document.createElement("div");
    mapBox.className = "topicmap-chart";
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    this.svg.setAttribute("width", String(WIDTH));
    this.svg.setAttribute("height", String(HEIGHT));
    mapBox.appendChild(this.svg);

    const sliderBox = document.createElement("div");
    sliderBox.className = "lambda-slider";
    this.sliderLabel = document.createElement("span");
    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.min = "0";
    this.slider.max = String(this.payload.lambda_grid.length - 1);
    this.slider.step = "1";
    this.slider.value = String(this.lambdaIndex);
    this.slider.addEventListener("input", () => {
      this.lambdaIndex = Number(this.slider.value);
      this.renderPanel();
    });
    sliderBox.append(this.sliderLabel, this.slider);
    mapBox.appendChild(sliderBox);

    this.panel = document.createElement("div");
    this.panel.className = "term-panel";

    this.container.append(mapBox, this.panel);
    this.renderCircles();
    this.renderPanel();
  }

  private scale(): (xy: [number, number]) => [number, number] {
    const xs = this.payload.coords.map((c) => c[0]);
    const ys = this.payload.coords.map((c) => c[1]);
    const spanX = Math.max(...xs) - Math.min(...xs) || 1;
    const spanY = Math.max(...ys) - Math.min(...ys) || 1;
    const minX = Math.min(...xs);
    const minY = Math.min(...ys);
    return ([x, y]) => [
      MARGIN + ((x - minX) / spanX) * (WIDTH - 2 * MARGIN),
      MARGIN + ((y - minY) / spanY) * (HEIGHT - 2 * MARGIN),
    ];
  }

  private renderCircles(): void {
    this.svg.innerHTML = "";
    const project = this.scale();
    const maxShare = Math.max(...this.payload.proportions) || 1;
    for (const topic of this.payload.topic_order) {
      const index = topic - 1;
      const [cx, cy] = project(this.payload.coords[index]);
      const share = this.payload.proportions[index];
      const radius = MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * Math.sqrt(share / maxShare);

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("class", "topic-circle" + (this.selected === topic ? " selected" : ""));
      circle.setAttribute("data-topic", String(topic));
      circle.setAttribute("cx", cx.toFixed(2));
      circle.setAttribute("cy", cy.toFixed(2));
      circle.setAttribute("r", radius.toFixed(2));
      circle.addEventListener("click", () => {
        this.selectTopic(this.selected === topic ? null : topic);
      });
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `topic ${topic}: ${(share * 100).toFixed(1)}% of tokens`;
      circle.appendChild(title);
      this.svg.appendChild(circle);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("class", "topic-label");
      label.setAttribute("x", cx.toFixed(2));
      label.setAttribute("y", cy.toFixed(2));
      label.textContent = String(topic);
      this.svg.appendChild(label);
    }
  }

  private renderPanel(): void {
    this.sliderLabel.textContent = `relevance λ = ${this.lambda.toFixed(1)}`;
    this.panel.innerHTML = "";
    const heading = document.createElement("h3");
    heading.textContent =
      this.selected === null
        ? "corpus-wide top terms"
        : `topic ${this.selected} terms (λ = ${this.lambda.toFixed(1)})`;
    this.panel.appendChild(heading);
    const list = document.createElement("ol");
    list.className = "term-list";
    for (const term of this.visibleTerms()) {
      const item = document.createElement("li");
      item.textContent = term;
      list.appendChild(item);
    }
    this.panel.appendChild(list);
  }
}
