// Deterministic SVG rendering of the view model: aggregations on an
// outer ring, everything else ringed around whichever aggregation
// first claims it. No layout physics; a static corpus gets a static
// picture.

import type { GraphViewModel, NodeKind, ViewNode } from "./model.js";

const COLORS: Record<NodeKind, string> = {
  aggregation: "#e8b23c",        // expandable
  resourceMap: "#7aa7d6",
  aggregatedResource: "#555555",
  proxy: "#4fae70",
  other: "#b08ed6",              // similarTo targets etc.
};

const SVG_NS = "http://www.w3.org/2000/svg";

interface Point { x: number; y: number; }

function layout(model: GraphViewModel, width: number, height: number): Map<string, Point> {
  const points = new Map<string, Point>();
  const center = { x: width / 2, y: height / 2 };
  const aggregations = model.nodes.filter((n) => n.kind === "aggregation");
  const ringRadius = Math.min(width, height) * 0.32;

  aggregations.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / Math.max(aggregations.length, 1) - Math.PI / 2;
    points.set(node.uri, {
      x: center.x + ringRadius * Math.cos(angle),
      y: center.y + ringRadius * Math.sin(angle),
    });
  });

  // satellites cluster around the first aggregation that references them
  const anchor = new Map<string, string>();
  for (const edge of model.edges) {
    if (points.has(edge.from) && !points.has(edge.to) && !anchor.has(edge.to)) {
      anchor.set(edge.to, edge.from);
    }
    if (points.has(edge.to) && !points.has(edge.from) && !anchor.has(edge.from)) {
      anchor.set(edge.from, edge.to);
    }
  }
  const perAnchor = new Map<string, string[]>();
  for (const node of model.nodes) {
    if (points.has(node.uri)) continue;
    const home = anchor.get(node.uri) ?? "";
    const bucket = perAnchor.get(home) ?? [];
    bucket.push(node.uri);
    perAnchor.set(home, bucket);
  }
  for (const [home, uris] of [...perAnchor.entries()].sort()) {
    const base = points.get(home) ?? center;
    const r = Math.min(width, height) * 0.16;
    uris.forEach((uri, i) => {
      const angle = (2 * Math.PI * i) / uris.length;
      points.set(uri, {
        x: base.x + r * Math.cos(angle),
        y: base.y + r * Math.sin(angle),
      });
    });
  }
  return points;
}

export interface RenderCallbacks {
  onNodeClick(node: ViewNode): void;
}

export function render(
  host: SVGSVGElement, model: GraphViewModel, callbacks: RenderCallbacks,
): void {
  const width = host.clientWidth || 960;
  const height = host.clientHeight || 640;
  host.replaceChildren();
  const points = layout(model, width, height);

  for (const edge of model.edges) {
    const a = points.get(edge.from);
    const b = points.get(edge.to);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", "edge");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = edge.predicate;
    line.appendChild(title);
    host.appendChild(line);
  }

  for (const node of model.nodes) {
    const p = points.get(node.uri);
    if (!p) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "node");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
    circle.setAttribute("r", node.kind === "aggregation" ? "14" : "8");
    circle.setAttribute("fill", COLORS[node.kind]);
    if (node.uri === model.selection) circle.setAttribute("stroke-width", "4");
    if (node.expanded) circle.setAttribute("stroke-dasharray", "3 2");
    if (node.error) circle.setAttribute("stroke", "#c0392b");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.error ? `${node.uri}\n${node.error}` : node.uri;
    circle.appendChild(title);
    group.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(p.x));
    text.setAttribute("y", String(p.y - (node.kind === "aggregation" ? 20 : 13)));
    text.setAttribute("text-anchor", "middle");
    text.textContent = node.label;
    group.appendChild(text);

    group.addEventListener("click", () => callbacks.onNodeClick(node));
    host.appendChild(group);
  }
}
