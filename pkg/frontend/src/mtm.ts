import { formatPercent } from "./format.js";
import type { MtmPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const BAR_WIDTH = 64;
const BAR_GAP = 26;
const CHART_HEIGHT = 320;
const TOP = 16;
const BOTTOM = 34;
const LEFT = 20;

export const TOPIC_COLORS = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

export function tooltipText(topic: number, share: number): string {
  return `topic ${topic}: ${formatPercent(share)}`;
}

/**
 * Stacked per-group topic shares: one bar per metadata group (e.g. year),
 * one slice per topic, heights proportional to the server's shares.
 * Hovering a slice shows the topic and its percentage rounded half-up to
 * two decimals.
 */
export class MtmView {
  private tooltip!: HTMLElement;

  constructor(
    private container: HTMLElement,
    private payload: MtmPayload,
  ) {
    this.build();
  }

  private build(): void {
    this.container.innerHTML = "";
    this.container.classList.add("mtm");

    const width = LEFT * 2 + this.payload.groups.length * (BAR_WIDTH + BAR_GAP);
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${CHART_HEIGHT}`);
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(CHART_HEIGHT));

    this.tooltip = document.createElement("div");
    this.tooltip.className = "mtm-tooltip";
    this.tooltip.style.display = "none";

    const usable = CHART_HEIGHT - TOP - BOTTOM;
    this.payload.groups.forEach((group, groupIndex) => {
      const x = LEFT + groupIndex * (BAR_WIDTH + BAR_GAP);
      let y = TOP;
      group.shares.forEach((share, topicIndex) => {
        const height = share * usable;
        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute("class", "mtm-slice");
        rect.setAttribute("data-group", group.value);
        rect.setAttribute("data-topic", String(topicIndex + 1));
        rect.setAttribute("data-share", String(share));
        rect.setAttribute("x", String(x));
        rect.setAttribute("y", y.toFixed(2));
        rect.setAttribute("width", String(BAR_WIDTH));
        rect.setAttribute("height", height.toFixed(2));
        rect.setAttribute("fill", TOPIC_COLORS[topicIndex % TOPIC_COLORS.length]);
        rect.addEventListener("mouseenter", (event) => {
          this.showTooltip(event as MouseEvent, topicIndex + 1, share);
        });
        rect.addEventListener("mouseleave", () => {
          this.tooltip.style.display = "none";
        });
        svg.appendChild(rect);
        y += height;
      });

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("class", "mtm-group-label");
      label.setAttribute("x", String(x + BAR_WIDTH / 2));
      label.setAttribute("y", String(CHART_HEIGHT - BOTTOM + 16));
      label.textContent = group.value;
      svg.appendChild(label);

      const count = document.createElementNS(SVG_NS, "text");
      count.setAttribute("class", "mtm-count-label");
      count.setAttribute("x", String(x + BAR_WIDTH / 2));
      count.setAttribute("y", String(CHART_HEIGHT - BOTTOM + 30));
      count.textContent = `${group.doc_count} docs`;
      svg.appendChild(count);
    });

    const caption = document.createElement("p");
    caption.className = "mtm-caption";
    caption.textContent =
      `topic distribution by ${this.payload.grouping_key} ` +
      `(${this.payload.mode === "dominant" ? "dominant-topic shares" : "mean topic weights"})`;

    this.container.append(caption, svg, this.tooltip, this.legend());
  }

  private legend(): HTMLElement {
    const box = document.createElement("div");
    box.className = "mtm-legend";
    for (let topic = 1; topic <= this.payload.k; topic++) {
      const entry = document.createElement("span");
      const swatch = document.createElement("i");
      swatch.style.background = TOPIC_COLORS[(topic - 1) % TOPIC_COLORS.length];
      entry.append(swatch, ` topic ${topic}`);
      box.appendChild(entry);
    }
    return box;
  }

  private showTooltip(event: MouseEvent, topic: number, share: number): void {
    this.tooltip.textContent = tooltipText(topic, share);
    this.tooltip.style.display = "block";
    this.tooltip.style.left = `${event.offsetX + 14}px`;
    this.tooltip.style.top = `${event.offsetY + 6}px`;
  }
}
