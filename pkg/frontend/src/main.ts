// Explorer wiring: clicking an unexpanded aggregation fetches its
// resource map and grows the graph; clicking anything selects it for
// the inspector panel; a second click on an expanded aggregation
// contracts it.

import { fetchExpansion, localUrl } from "./api.js";
import {
  ExplorerState, ViewNode, contractNode, expandFailed, expandNode,
  initialState, inspect, select, view,
} from "./model.js";
import { render } from "./render.js";

let state: ExplorerState = initialState([]);
const inFlight = new Set<string>();

const svg = document.getElementById("graph") as unknown as SVGSVGElement;
const panel = document.getElementById("panel")!;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const goButton = document.getElementById("go")!;

function redraw(): void {
  render(svg, view(state), { onNodeClick: handleClick });
  renderPanel();
}

function setState(next: ExplorerState): void {
  state = next;
  redraw();
}

async function expand(aggUri: string): Promise<void> {
  if (inFlight.has(aggUri)) return;
  inFlight.add(aggUri);
  try {
    const result = await fetchExpansion(aggUri);
    setState(expandNode(state, aggUri, result));
  } catch (err) {
    setState(expandFailed(state, aggUri, String(err)));
  } finally {
    inFlight.delete(aggUri);
  }
}

function handleClick(node: ViewNode): void {
  setState(select(state, node.uri));
  if (node.kind !== "aggregation") return;
  if (node.expanded) {
    setState(contractNode(state, node.uri));
  } else {
    void expand(node.uri);
  }
}

function renderPanel(): void {
  if (!state.selection) {
    panel.innerHTML = "<p>Select a node.</p>";
    return;
  }
  const data = inspect(state, state.selection);
  const rows = data.metadata
    .map(([p, o]) => `<tr><td>${escapeHtml(p)}</td><td>${escapeHtml(o)}</td></tr>`)
    .join("");
  const fact = (label: string, value: string | null) =>
    value === null ? "" : `<p><b>${label}</b> ${escapeHtml(value)}</p>`;
  panel.innerHTML = `
    <h2>${escapeHtml(data.kind)}</h2>
    <p class="uri">${escapeHtml(data.uri)}</p>
    ${fact("stands for", data.proxyFor)}
    ${fact("in the context of", data.proxyIn)}
    ${data.aggregatedBy.length
      ? `<p><b>aggregated by</b></p><ul>${data.aggregatedBy
          .map((a) => `<li>${escapeHtml(a)}</li>`).join("")}</ul>`
      : ""}
    ${data.authoritative === null ? ""
      : `<p><b>resource map</b> <a href="${escapeHtml(localUrl(data.remUri ?? ""))}">`
        + `${escapeHtml(data.remUri ?? "")}</a>`
        + ` (${data.authoritative ? "authoritative" : "non-authoritative"})</p>`}
    ${rows ? `<table>${rows}</table>` : "<p>No metadata.</p>"}
  `;
}

function escapeHtml(value: string): string {
  return value.replace(/[&<>"]/g, (c) =>
    c === "&" ? "&amp;" : c === "<" ? "&lt;" : c === ">" ? "&gt;" : "&quot;");
}

goButton.addEventListener("click", () => {
  const seed = seedInput.value.trim();
  if (!seed) return;
  state = initialState([seed]);
  redraw();
  void expand(seed);
});

redraw();
