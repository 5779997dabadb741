/**
 * Chart rendering: bars for numeric buckets (age, tenure), donut for
 * categorical dimensions. Purely presentational; every displayed number is
 * a payload field, and zero buckets are drawn with an explicit "0" rather
 * than omitted so "no S3 lecturers" is visible, not invisible.
 */

import { el } from "./dom.js";
import type { Distribution } from "./types.js";

export type SegmentHandler = (bucket: string) => void;

const NUMERIC_DIMENSIONS = new Set(["age", "tenure"]);

const PALETTE = ["#2563eb", "#16a34a", "#d97706", "#dc2626", "#7c3aed", "#0891b2", "#be185d"];

function segmentButton(label: string, count: number, onSegment: SegmentHandler): HTMLButtonElement {
  const button = el("button", "segment");
  button.type = "button";
  button.dataset["label"] = label;
  button.dataset["count"] = String(count);
  button.addEventListener("click", () => onSegment(label));
  return button;
}

function caption(dist: Distribution): HTMLElement {
  const node = el("figcaption");
  node.append(el("span", "chart-title", dist.title));
  const total = el("span", "chart-total", `Total: ${dist.total}`);
  total.dataset["total"] = String(dist.total);
  node.append(total);
  return node;
}

export function barChart(dist: Distribution, onSegment: SegmentHandler): HTMLElement {
  const figure = el("figure", "chart bar-chart");
  figure.dataset["entity"] = dist.entity;
  figure.dataset["dimension"] = dist.dimension;
  figure.append(caption(dist));
  const bars = el("div", "bars");
  const peak = Math.max(1, ...dist.buckets.map((b) => b.count));
  for (const bucket of dist.buckets) {
    const button = segmentButton(bucket.label, bucket.count, onSegment);
    const bar = el("span", "bar");
    bar.style.height = `${Math.round((bucket.count / peak) * 100)}%`;
    button.append(
      el("span", "seg-count", String(bucket.count)),
      bar,
      el("span", "seg-label", bucket.label),
    );
    bars.append(button);
  }
  figure.append(bars);
  return figure;
}

export function donutChart(dist: Distribution, onSegment: SegmentHandler): HTMLElement {
  const figure = el("figure", "chart donut-chart");
  figure.dataset["entity"] = dist.entity;
  figure.dataset["dimension"] = dist.dimension;
  figure.append(caption(dist));

  const size = 120;
  const radius = 45;
  const circumference = 2 * Math.PI * radius;
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  svg.setAttribute("class", "donut");
  let offset = 0;
  dist.buckets.forEach((bucket, index) => {
    if (dist.total === 0 || bucket.count === 0) return;
    const fraction = bucket.count / dist.total;
    const arc = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    arc.setAttribute("cx", String(size / 2));
    arc.setAttribute("cy", String(size / 2));
    arc.setAttribute("r", String(radius));
    arc.setAttribute("fill", "none");
    arc.setAttribute("stroke", PALETTE[index % PALETTE.length] ?? "#888");
    arc.setAttribute("stroke-width", "16");
    arc.setAttribute(
      "stroke-dasharray",
      `${fraction * circumference} ${(1 - fraction) * circumference}`,
    );
    arc.setAttribute("stroke-dashoffset", String(-offset * circumference));
    offset += fraction;
    svg.append(arc);
  });
  figure.append(svg);

  const legend = el("ul", "legend");
  dist.buckets.forEach((bucket, index) => {
    const item = el("li");
    const button = segmentButton(bucket.label, bucket.count, onSegment);
    const swatch = el("span", "swatch");
    swatch.style.background = PALETTE[index % PALETTE.length] ?? "#888";
    button.append(
      swatch,
      el("span", "seg-label", bucket.label),
      el("span", "seg-count", String(bucket.count)),
    );
    item.append(button);
    legend.append(item);
  });
  figure.append(legend);
  return figure;
}

export function chartFor(dist: Distribution, onSegment: SegmentHandler): HTMLElement {
  return NUMERIC_DIMENSIONS.has(dist.dimension)
    ? barChart(dist, onSegment)
    : donutChart(dist, onSegment);
}

/** The bucket table shown beside every chart; values are the same payload fields. */
export function bucketTable(dist: Distribution, onSegment: SegmentHandler): HTMLElement {
  const table = el("table", "bucket-table");
  const head = el("tr");
  head.append(el("th", "", "Bucket"), el("th", "", "Count"));
  table.append(head);
  for (const bucket of dist.buckets) {
    const row = el("tr", "bucket-row");
    row.dataset["label"] = bucket.label;
    row.dataset["count"] = String(bucket.count);
    const link = el("a", "", bucket.label) as HTMLAnchorElement;
    link.href = "#";
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onSegment(bucket.label);
    });
    const labelCell = el("td");
    labelCell.append(link);
    row.append(labelCell, el("td", "count-cell", String(bucket.count)));
    table.append(row);
  }
  const totalRow = el("tr", "total-row");
  totalRow.append(el("td", "", "TOTAL"), el("td", "count-cell", String(dist.total)));
  table.append(totalRow);
  return table;
}
