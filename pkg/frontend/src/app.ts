import { ApiClient, ApiError } from "./api";
import {
  DEFAULT_LAYOUT,
  labelOrder,
  nearestCurve,
  pointerToData,
  renderPlot,
  type RenderedPlot,
} from "./chart";
import { RequestScheduler } from "./scheduler";
import {
  SLIDER_STEPS,
  alphaToSlider,
  parse,
  serialize,
  sliderToAlpha,
  toggleLabel,
  visibleSet,
  type ViewState,
} from "./state";
import type { ComputeResponse, DatasetInfo } from "./types";

export const DEBOUNCE_MS = 250;

type PushUrl = (query: string) => void;

function html<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class ExplorerApp {
  state: ViewState;
  lastResponse: ComputeResponse | null = null;
  plot: RenderedPlot | null = null;
  readonly scheduler: RequestScheduler<ComputeResponse>;

  private readonly els: {
    dataset: HTMLSelectElement;
    modeClassic: HTMLInputElement;
    modeSsqv: HTMLInputElement;
    alpha: HTMLInputElement;
    alphaValue: HTMLElement;
    samples: HTMLSelectElement;
    bands: HTMLInputElement;
    labels: HTMLElement;
    banner: HTMLElement;
    plot: HTMLElement;
    tooltip: HTMLElement;
    objective: HTMLElement;
    bound: HTMLElement;
    nFinal: HTMLElement;
    convergence: HTMLElement;
    warnings: HTMLElement;
  };
  private highlighted: SVGPolylineElement | null = null;

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
    initial: ViewState,
    private readonly pushUrl: PushUrl = (q) => history.replaceState(null, "", q),
  ) {
    this.state = initial;
    this.els = this.buildDom();
    this.scheduler = new RequestScheduler<ComputeResponse>(
      () => this.api.compute(this.state),
      (resp) => this.applyResponse(resp),
      (err) => this.showError(err),
      DEBOUNCE_MS,
    );
    this.syncControls();
  }

  async start(): Promise<void> {
    try {
      const datasets = await this.api.datasets();
      this.populateDatasets(datasets);
    } catch (err) {
      this.showError(err);
      return;
    }
    this.scheduler.scheduleNow();
  }

  // ---- state transitions -------------------------------------------------

  setAlphaFromSlider(position: number): void {
    this.state = { ...this.state, alpha: sliderToAlpha(position / SLIDER_STEPS) };
    this.els.alphaValue.textContent = this.formatAlpha(this.state.alpha);
    this.syncUrl();
    this.scheduler.schedule(); // debounced: sliders fire in bursts
  }

  setMode(mode: "classic" | "ssqv"): void {
    if (mode === this.state.mode) return;
    this.state = { ...this.state, mode };
    this.syncControls();
    this.syncUrl();
    this.scheduler.scheduleNow();
  }

  setDataset(dataset: string): void {
    if (dataset === this.state.dataset) return;
    this.state = { ...this.state, dataset, hidden: [] };
    this.syncUrl();
    this.scheduler.scheduleNow();
  }

  setSamples(samples: number): void {
    this.state = { ...this.state, samples };
    this.syncUrl();
    this.scheduler.scheduleNow();
  }

  setShowBands(show: boolean): void {
    this.state = { ...this.state, showBands: show };
    this.syncUrl();
    this.render(); // presentation only; no new request
  }

  toggle(label: string): void {
    this.state = toggleLabel(this.state, label);
    this.syncUrl();
    this.render(); // curves are already in hand; hide/show locally
  }

  // ---- response handling ---------------------------------------------------

  private applyResponse(resp: ComputeResponse): void {
    this.lastResponse = resp;
    this.clearBanner();
    this.render();
  }

  private showError(err: unknown): void {
    // non-blocking: the previous plot stays on screen
    const banner = this.els.banner;
    banner.hidden = false;
    if (err instanceof ApiError) {
      let text = err.message;
      if (err.report) {
        text += ` (stopped at N=${err.report.N_final}, not converged)`;
        this.els.nFinal.textContent = String(err.report.N_final);
        this.setConvergenceBadge(false);
      }
      banner.textContent = text;
    } else {
      banner.textContent = `service unreachable: ${String(err)}`;
    }
  }

  private clearBanner(): void {
    this.els.banner.hidden = true;
    this.els.banner.textContent = "";
  }

  // ---- rendering -----------------------------------------------------------

  render(): void {
    const resp = this.lastResponse;
    if (!resp) return;
    const order = labelOrder(resp);
    const visible = order.length > 0 ? visibleSet(this.state, order) : null;
    this.plot = renderPlot(this.els.plot, resp, visible, this.state.showBands, DEFAULT_LAYOUT);
    this.els.plot.querySelector("svg")?.addEventListener("mousemove", (ev) =>
      this.onPointerMove(ev as MouseEvent),
    );
    this.els.plot.querySelector("svg")?.addEventListener("mouseleave", () => this.hideTooltip());
    this.renderLabelToggles(order);
    this.renderStatus(resp);
  }

  private renderLabelToggles(order: string[]): void {
    const box = this.els.labels;
    box.replaceChildren();
    for (const label of order) {
      const id = `label-${label}`;
      const wrap = html("label", { class: "label-toggle", for: id });
      const input = html("input", { type: "checkbox", id, "data-label": label });
      input.checked = !this.state.hidden.includes(label);
      input.addEventListener("change", () => this.toggle(label));
      wrap.appendChild(input);
      wrap.appendChild(html("span", {}, label));
      box.appendChild(wrap);
    }
  }

  private renderStatus(resp: ComputeResponse): void {
    // displayed numbers come straight from the response
    this.els.objective.textContent =
      resp.objective === null ? "—" : Number(resp.objective).toPrecision(6);
    this.els.bound.textContent =
      resp.lower_bound === null ? "—" : Number(resp.lower_bound).toPrecision(6);
    if (resp.report) {
      this.els.nFinal.textContent = String(resp.report.N_final);
      this.setConvergenceBadge(resp.report.converged);
    } else {
      this.els.nFinal.textContent = "—";
      this.setConvergenceBadge(true);
    }
    this.els.warnings.replaceChildren(
      ...resp.warnings.map((w) => html("li", { class: "warning" }, w)),
    );
  }

  private setConvergenceBadge(convergedFlag: boolean): void {
    this.els.convergence.textContent = convergedFlag ? "converged" : "NOT CONVERGED";
    this.els.convergence.className = convergedFlag ? "badge ok" : "badge alert";
  }

  // ---- pointer/tooltip -----------------------------------------------------

  private onPointerMove(ev: MouseEvent): void {
    if (!this.plot || !this.lastResponse) return;
    const rect = this.plot.svg.getBoundingClientRect();
    const scaleX = rect.width > 0 ? this.plot.layout.width / rect.width : 1;
    const scaleY = rect.height > 0 ? this.plot.layout.height / rect.height : 1;
    const data = pointerToData(
      this.plot,
      (ev.clientX - rect.left) * scaleX,
      (ev.clientY - rect.top) * scaleY,
    );
    if (!data) {
      this.hideTooltip();
      return;
    }
    const order = labelOrder(this.lastResponse);
    const visible = order.length > 0 ? visibleSet(this.state, order) : null;
    const hit = nearestCurve(this.lastResponse, visible, data.tFrac, data.yValue);
    if (!hit) {
      this.hideTooltip();
      return;
    }
    this.highlight(hit.id);
    const tip = this.els.tooltip;
    tip.hidden = false;
    tip.textContent = hit.label === null ? `point ${hit.id}` : `point ${hit.id} — ${hit.label}`;
    tip.style.left = `${ev.clientX - rect.left + 12}px`;
    tip.style.top = `${ev.clientY - rect.top - 8}px`;
  }

  private highlight(id: string): void {
    if (this.highlighted?.getAttribute("data-id") === id) return;
    this.highlighted?.setAttribute("stroke-width", "1");
    const node = this.els.plot.querySelector<SVGPolylineElement>(
      `polyline[data-id="${id}"]`,
    );
    node?.setAttribute("stroke-width", "2.5");
    this.highlighted = node;
  }

  private hideTooltip(): void {
    this.els.tooltip.hidden = true;
    this.highlighted?.setAttribute("stroke-width", "1");
    this.highlighted = null;
  }

  // ---- dom plumbing ----------------------------------------------------------

  private formatAlpha(alpha: number): string {
    return alpha.toPrecision(3);
  }

  private populateDatasets(datasets: DatasetInfo[]): void {
    const select = this.els.dataset;
    select.replaceChildren();
    for (const info of datasets) {
      select.appendChild(
        html("option", { value: info.id }, `${info.id} (${info.n} × ${info.d})`),
      );
    }
    if (!datasets.some((d) => d.id === this.state.dataset) && datasets.length > 0) {
      this.state = { ...this.state, dataset: datasets[0]!.id };
    }
    select.value = this.state.dataset;
  }

  private syncControls(): void {
    this.els.modeClassic.checked = this.state.mode === "classic";
    this.els.modeSsqv.checked = this.state.mode === "ssqv";
    this.els.alpha.disabled = this.state.mode !== "ssqv";
    this.els.alpha.value = String(Math.round(alphaToSlider(this.state.alpha) * SLIDER_STEPS));
    this.els.alphaValue.textContent = this.formatAlpha(this.state.alpha);
    const samples = String(this.state.samples);
    if (![...this.els.samples.options].some((o) => o.value === samples)) {
      // a URL can carry any sample count; make it selectable
      this.els.samples.appendChild(html("option", { value: samples }, samples));
    }
    this.els.samples.value = samples;
    this.els.bands.checked = this.state.showBands;
  }

  private syncUrl(): void {
    const query = serialize(this.state);
    const api = new URLSearchParams(window.location.search).get("api");
    this.pushUrl(`?${api ? `${query}&api=${encodeURIComponent(api)}` : query}`);
  }

  private buildDom() {
    const root = this.root;
    root.replaceChildren();
    const sidebar = html("div", { class: "sidebar" });
    const main = html("div", { class: "main" });
    root.appendChild(sidebar);
    root.appendChild(main);

    const dataset = html("select", { id: "dataset" });
    dataset.addEventListener("change", () => this.setDataset(dataset.value));
    sidebar.appendChild(field("Dataset", dataset));

    const modeClassic = html("input", { type: "radio", name: "mode", value: "classic", id: "mode-classic" });
    const modeSsqv = html("input", { type: "radio", name: "mode", value: "ssqv", id: "mode-ssqv" });
    modeClassic.addEventListener("change", () => this.setMode("classic"));
    modeSsqv.addEventListener("change", () => this.setMode("ssqv"));
    const modeBox = html("div", { class: "mode-box" });
    const lc = html("label", { for: "mode-classic" });
    lc.appendChild(modeClassic);
    lc.appendChild(html("span", {}, "classic"));
    const ls = html("label", { for: "mode-ssqv" });
    ls.appendChild(modeSsqv);
    ls.appendChild(html("span", {}, "smoothed"));
    modeBox.appendChild(lc);
    modeBox.appendChild(ls);
    sidebar.appendChild(field("Mode", modeBox));

    const alpha = html("input", {
      type: "range", id: "alpha", min: "0", max: String(SLIDER_STEPS), step: "1",
    });
    alpha.addEventListener("input", () => this.setAlphaFromSlider(Number(alpha.value)));
    const alphaValue = html("span", { id: "alpha-value", class: "mono" });
    const alphaBox = html("div", {});
    alphaBox.appendChild(alpha);
    alphaBox.appendChild(alphaValue);
    sidebar.appendChild(field("Smoothing α (log scale)", alphaBox));

    const samples = html("select", { id: "samples" });
    for (const n of [128, 256, 512, 1024]) {
      samples.appendChild(html("option", { value: String(n) }, String(n)));
    }
    samples.addEventListener("change", () => this.setSamples(Number(samples.value)));
    sidebar.appendChild(field("Samples", samples));

    const bands = html("input", { type: "checkbox", id: "bands" });
    bands.addEventListener("change", () => this.setShowBands(bands.checked));
    sidebar.appendChild(field("Class bands", bands));

    const labels = html("div", { id: "labels" });
    sidebar.appendChild(field("Classes", labels));

    const status = html("dl", { class: "status" });
    const objective = html("dd", { id: "objective", class: "mono" }, "—");
    const bound = html("dd", { id: "bound", class: "mono" }, "—");
    const nFinal = html("dd", { id: "n-final", class: "mono" }, "—");
    const convergence = html("span", { id: "convergence", class: "badge ok" }, "converged");
    status.appendChild(html("dt", {}, "objective"));
    status.appendChild(objective);
    status.appendChild(html("dt", {}, "lower bound"));
    status.appendChild(bound);
    status.appendChild(html("dt", {}, "N final"));
    status.appendChild(nFinal);
    sidebar.appendChild(status);
    sidebar.appendChild(convergence);
    const warnings = html("ul", { id: "warnings", class: "warnings" });
    sidebar.appendChild(warnings);

    const banner = html("div", { id: "banner", class: "banner" });
    banner.hidden = true;
    const plot = html("div", { id: "plot", class: "plot" });
    const tooltip = html("div", { id: "tooltip", class: "tooltip" });
    tooltip.hidden = true;
    main.appendChild(banner);
    main.appendChild(plot);
    main.appendChild(tooltip);

    return {
      dataset, modeClassic, modeSsqv, alpha, alphaValue, samples, bands,
      labels, banner, plot, tooltip, objective, bound, nFinal, convergence, warnings,
    };

    function field(title: string, control: HTMLElement): HTMLElement {
      const box = html("div", { class: "field" });
      box.appendChild(html("div", { class: "field-title" }, title));
      box.appendChild(control);
      return box;
    }
  }
}

export { parse as parseViewState };
