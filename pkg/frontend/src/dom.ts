/** DOM rendering. Everything here is a thin projection of the view models
 * in `views/` onto elements in index.html; no numbers are computed here.
 */

import type { Store, ViewModel } from "./store.js";
import { buildCurveChart } from "./views/curve.js";
import { buildInspectorPanel } from "./views/inspector.js";
import { buildTimelineChart } from "./views/timeline.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function pct(x: number): string {
  return `${(100 * x).toFixed(1)}%`;
}

export function mount(store: Store): void {
  const slider = el<HTMLInputElement>("commitment");
  slider.addEventListener("input", () => {
    void store.slideCommitment(Number(slider.value));
  });
  el<HTMLSelectElement>("episode-select").addEventListener("change", (e) => {
    const value = (e.target as HTMLSelectElement).value;
    if (value !== "") void store.loadEpisode(Number(value));
  });
  el<HTMLButtonElement>("ask-what").addEventListener("click", () => {
    void store.askWhat();
  });
  store.subscribe(render);
  render(store.state);

  function render(model: ViewModel): void {
    el("commitment-value").textContent = model.commitment.toFixed(2);
    renderToast(model);
    renderSummary(model);
    renderStates(model, store);
    renderInspector(model, store);
    renderCurve(model);
    renderTimeline(model);
  }
}

function renderToast(model: ViewModel): void {
  const toast = el("toast");
  toast.textContent = model.toast ?? "";
  toast.hidden = model.toast === null;
}

function renderSummary(model: ViewModel): void {
  const summary = model.summary;
  el("summary").textContent = summary
    ? `${summary.states} states, ${summary.edges} edges, ` +
      `${summary.total_occupancy} visits, desires: ` +
      (summary.desires.join(", ") || "none")
    : "loading…";
  const select = el<HTMLSelectElement>("episode-select");
  if (summary && select.options.length <= 1) {
    for (const episode of summary.episodes) {
      const option = document.createElement("option");
      option.value = String(episode);
      option.textContent = `episode ${episode}`;
      select.append(option);
    }
  }
}

function renderStates(model: ViewModel, store: Store): void {
  const list = el("state-list");
  const entropy = model.metrics?.entropy;
  el("entropy").textContent = entropy
    ? `H=${entropy.weighted.total.toFixed(3)} bits ` +
      `(action ${entropy.weighted.action.toFixed(3)}, ` +
      `world ${entropy.weighted.world.toFixed(3)})`
    : "";
  if (!model.summary) return;
  if (list.childElementCount === 0) {
    // state ids arrive with the first metrics fetch; list is rebuilt lazily
    void 0;
  }
  const anyDesire = model.metrics?.any_desire;
  el("interpretability").textContent = anyDesire
    ? `interpretability ${pct(anyDesire.interpretability)}` +
      (anyDesire.reliability !== null
        ? `, reliability ${anyDesire.reliability.toFixed(3)}`
        : "")
    : "";
  void store;
}

function renderInspector(model: ViewModel, store: Store): void {
  const panel = el("inspector");
  if (!model.selectedState) {
    panel.innerHTML = "<p class='hint'>Select a state to inspect it.</p>";
    return;
  }
  const view = buildInspectorPanel(
    model.selectedState,
    model.what,
    model.how,
    model.why,
  );
  const rows = [
    `<h3>${escapeHtml(view.stateId)}</h3>`,
    `<p>P(s) = ${view.pState.toFixed(4)}${view.terminal ? " · terminal" : ""}</p>`,
    view.unintentionalBanner
      ? "<p class='banner'>No intention attributed at this threshold.</p>"
      : "",
    "<h4>Actions</h4>",
    ...view.actions.map(
      (a) =>
        `<div class="row"><span>${escapeHtml(a.action)}</span>` +
        `<span>${pct(a.probability)}</span>` +
        `<button data-why="${escapeHtml(a.action)}">why?</button></div>`,
    ),
    "<h4>Intentions</h4>",
    ...view.intentions.map(
      (i) =>
        `<div class="row"><span>${escapeHtml(i.desire)}</span>` +
        `<span>${i.intention.toFixed(4)}</span>` +
        (i.howEnabled
          ? `<button data-how="${escapeHtml(i.desire)}">how?</button>`
          : ""),
    ),
    view.whatText ? `<pre>${escapeHtml(view.whatText)}</pre>` : "",
    view.howText ? `<pre>${escapeHtml(view.howText)}</pre>` : "",
    view.howPath.length
      ? `<p class="path">${view.howPath.map(escapeHtml).join(" → ")}</p>`
      : "",
    view.whyText ? `<pre>${escapeHtml(view.whyText)}</pre>` : "",
  ];
  panel.innerHTML = rows.join("\n");
  for (const button of panel.querySelectorAll<HTMLButtonElement>("[data-why]")) {
    button.addEventListener("click", () => {
      void store.askWhy(button.dataset["why"] ?? "");
    });
  }
  for (const button of panel.querySelectorAll<HTMLButtonElement>("[data-how]")) {
    button.addEventListener("click", () => {
      void store.askHow(button.dataset["how"] ?? "");
    });
  }
}

function renderCurve(model: ViewModel): void {
  const host = el("curve");
  if (model.curve.length === 0) {
    host.innerHTML = "";
    return;
  }
  const chart = buildCurveChart(model.curve);
  host.innerHTML = chart.series
    .map(
      (series) =>
        `<div class="series"><span class="label">${escapeHtml(series.label)}</span>` +
        series.points
          .map((p) =>
            p.y === null
              ? `<span class="pt empty" title="${p.x}"></span>`
              : `<span class="pt" title="${p.x}: ${p.y.toFixed(3)}" ` +
                `style="height:${Math.round(40 * p.y)}px"></span>`,
          )
          .join("") +
        "</div>",
    )
    .join("\n");
}

function renderTimeline(model: ViewModel): void {
  const host = el("timeline");
  if (!model.timeline || !model.regions) {
    host.innerHTML = "<p class='hint'>Pick an episode to see its timeline.</p>";
    return;
  }
  const chart = buildTimelineChart(model.timeline, model.regions);
  const bands = chart.bands
    .map(
      (band) =>
        `<div class="band ${band.region.kind}" ` +
        `style="left:${pct(band.left)};width:${pct(band.width)}" ` +
        `title="${band.region.kind}${band.region.desire ? ` (${escapeHtml(band.region.desire)})` : ""}` +
        ` t=${band.region.t_start}..${band.region.t_end}"></div>`,
    )
    .join("");
  const lines = chart.series
    .map(
      (series) =>
        `<div class="line"><span class="label">${escapeHtml(series.desire)}</span>` +
        series.points
          .map(
            (p) =>
              `<span class="pt" title="t=${p.t}: ${p.value.toFixed(3)}" ` +
              `style="height:${Math.round(40 * p.value)}px"></span>`,
          )
          .join("") +
        "</div>",
    )
    .join("\n");
  host.innerHTML =
    `<div class="bands">${bands}</div>` +
    lines +
    `<p class="hint">episode ${chart.episode}, c=${chart.commitment}</p>`;
}
