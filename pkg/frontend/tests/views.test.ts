import { beforeEach, describe, expect, it } from "vitest";

import { MtmView, tooltipText } from "../src/mtm.js";
import { TopicMapView } from "../src/topicmap.js";
import type { LdavisPayload, MtmPayload } from "../src/types.js";

const LAMBDA_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

function ldavisFixture(k = 5): LdavisPayload {
  const termTable = [];
  for (let topic = 0; topic < k; topic++) {
    const perLambda = LAMBDA_GRID.map((lam, li) =>
      [0, 1, 2].map((rank): [string, number] => [`t${topic}-l${li}-r${rank}`, -rank - lam]),
    );
    termTable.push(perLambda);
  }
  return {
    schema_version: 1,
    kind: "ldavis",
    k,
    proportions: Array.from({ length: k }, (_, i) => (i + 1) / ((k * (k + 1)) / 2)),
    topic_order: Array.from({ length: k }, (_, i) => k - i),
    coords: Array.from({ length: k }, (_, i) => [Math.cos(i), Math.sin(i)] as [number, number]),
    distances: Array.from({ length: k }, () => Array(k).fill(0.1)),
    lambda_grid: LAMBDA_GRID,
    term_table: termTable,
    default_terms: [
      ["common-a", 0.2],
      ["common-b", 0.1],
    ],
  };
}

function mtmFixture(): MtmPayload {
  return {
    schema_version: 1,
    kind: "mtm",
    grouping_key: "year",
    mode: "dominant",
    k: 3,
    groups: [
      { value: "2018", doc_count: 4, shares: [0.5, 0.25, 0.25] },
      { value: "2019", doc_count: 8, shares: [0.15625, 0.34375, 0.5] },
    ],
  };
}

describe("TopicMapView", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "<div id='root'></div>";
    root = document.getElementById("root")!;
  });

  it("renders one circle per topic", () => {
    new TopicMapView(root, ldavisFixture(5));
    expect(root.querySelectorAll(".topic-circle")).toHaveLength(5);
  });

  it("shows corpus-wide terms when nothing is selected", () => {
    const view = new TopicMapView(root, ldavisFixture());
    expect(view.visibleTerms()).toEqual(["common-a", "common-b"]);
    const items = [...root.querySelectorAll(".term-list li")].map((li) => li.textContent);
    expect(items).toEqual(["common-a", "common-b"]);
  });

  it("starts at lambda=1 and switches rankings with the slider", () => {
    const view = new TopicMapView(root, ldavisFixture());
    expect(view.lambda).toBe(1.0);
    view.selectTopic(2);
    expect(view.visibleTerms()).toEqual(["t1-l10-r0", "t1-l10-r1", "t1-l10-r2"]);
    view.setLambda(0.6);
    expect(view.visibleTerms()).toEqual(["t1-l6-r0", "t1-l6-r1", "t1-l6-r2"]);
    const shown = [...root.querySelectorAll(".term-list li")].map((li) => li.textContent);
    expect(shown).toEqual(view.visibleTerms());
  });

  it("rejects lambdas off the precomputed grid", () => {
    const view = new TopicMapView(root, ldavisFixture());
    expect(() => view.setLambda(0.55)).toThrow(/grid/);
  });

  it("clicking a circle selects its topic", () => {
    const view = new TopicMapView(root, ldavisFixture());
    const circle = root.querySelector<SVGCircleElement>(".topic-circle[data-topic='3']")!;
    circle.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(view.visibleTerms()[0]).toBe("t2-l10-r0");
  });
});

describe("MtmView", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "<div id='root'></div>";
    root = document.getElementById("root")!;
  });

  it("renders one stacked bar per group with one slice per topic", () => {
    new MtmView(root, mtmFixture());
    expect(root.querySelectorAll(".mtm-slice[data-group='2018']")).toHaveLength(3);
    expect(root.querySelectorAll(".mtm-slice[data-group='2019']")).toHaveLength(3);
    expect(root.querySelectorAll(".mtm-group-label")).toHaveLength(2);
  });

  it("slice heights are proportional to shares and fill the bar", () => {
    new MtmView(root, mtmFixture());
    const slices = [...root.querySelectorAll(".mtm-slice[data-group='2019']")];
    // rendered heights carry two-decimal pixel rounding
    const heights = slices.map((s) => Number(s.getAttribute("height")));
    const total = heights.reduce((a, b) => a + b, 0);
    expect(heights[2] / total).toBeCloseTo(0.5, 3);
    expect(heights[0] / total).toBeCloseTo(0.15625, 3);
  });

  it("tooltip shows the half-up two-decimal percentage", () => {
    expect(tooltipText(1, 0.15625)).toBe("topic 1: 15.63%");
    new MtmView(root, mtmFixture());
    const slice = root.querySelector<SVGRectElement>(
      ".mtm-slice[data-group='2019'][data-topic='1']",
    )!;
    slice.dispatchEvent(new MouseEvent("mouseenter", { bubbles: true }));
    const tooltip = root.querySelector<HTMLElement>(".mtm-tooltip")!;
    expect(tooltip.textContent).toBe("topic 1: 15.63%");
    expect(tooltip.style.display).toBe("block");
  });

  it("a single-group payload renders one full bar", () => {
    const payload = mtmFixture();
    payload.groups = [{ value: "2020", doc_count: 3, shares: [1.0, 0.0, 0.0] }];
    new MtmView(root, payload);
    const slices = [...root.querySelectorAll(".mtm-slice")];
    expect(slices).toHaveLength(3);
    const heights = slices.map((s) => Number(s.getAttribute("height")));
    expect(Math.max(...heights)).toBeGreaterThan(0);
    expect(heights[1]).toBe(0);
  });
});
