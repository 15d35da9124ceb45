import type { ComputeResponse } from "./types";

// Same fixed palette as the service's SVG output, assigned by label order of
// first appearance, so the browser view matches rendered files.
export const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0",
  "#3ca951", "#ff8ab7", "#a463f2", "#97bbf5",
] as const;
export const UNLABELED_COLOR = "#555555";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface PlotLayout {
  width: number;
  height: number;
  marginLeft: number;
  marginRight: number;
  marginTop: number;
  marginBottom: number;
}

export const DEFAULT_LAYOUT: PlotLayout = {
  width: 860,
  height: 480,
  marginLeft: 56,
  marginRight: 16,
  marginTop: 16,
  marginBottom: 36,
};

export function labelOrder(response: ComputeResponse): string[] {
  const seen: string[] = [];
  for (const curve of response.curves) {
    if (curve.label !== null && !seen.includes(curve.label)) {
      seen.push(curve.label);
    }
  }
  return seen;
}

export function colorFor(label: string | null, order: string[]): string {
  if (label === null) return UNLABELED_COLOR;
  const idx = order.indexOf(label);
  return idx >= 0 ? PALETTE[idx % PALETTE.length]! : UNLABELED_COLOR;
}

interface Extent {
  lo: number;
  hi: number;
}

function valueExtent(response: ComputeResponse, visible: Set<string> | null): Extent {
  // fixed over ALL curves (not just visible) so toggling a class does not
  // rescale the plot under the pointer
  let lo = Infinity;
  let hi = -Infinity;
  for (const curve of response.curves) {
    for (const v of curve.values) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    lo = -1;
    hi = 1;
  }
  if (hi - lo < 1e-12) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.05 * (hi - lo);
  return { lo: lo - pad, hi: hi + pad };
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  return node;
}

export interface RenderedPlot {
  svg: SVGSVGElement;
  extent: Extent;
  layout: PlotLayout;
}

/**
 * Rebuild the plot from a response and the visible-label set. Pure function
 * of its inputs: the same (response, visible, showBands) yields an identical
 * DOM subtree, so hiding and re-showing a class restores the exact markup.
 */
export function renderPlot(
  container: HTMLElement,
  response: ComputeResponse,
  visible: Set<string> | null,
  showBands: boolean,
  layout: PlotLayout = DEFAULT_LAYOUT,
): RenderedPlot {
  const { width, height, marginLeft, marginRight, marginTop, marginBottom } = layout;
  const extent = valueExtent(response, visible);
  const x0 = marginLeft;
  const x1 = width - marginRight;
  const y0 = marginTop;
  const y1 = height - marginBottom;
  const px = (t: number) => x0 + (x1 - x0) * t;
  const py = (v: number) => y1 - ((y1 - y0) * (v - extent.lo)) / (extent.hi - extent.lo);
  const fmt = (v: number) => v.toFixed(2);

  const svg = el("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    role: "img",
  });

  svg.appendChild(el("line", {
    x1: fmt(x0), y1: fmt(y1), x2: fmt(x1), y2: fmt(y1),
    stroke: "#333", "stroke-width": "1", class: "axis",
  }));
  svg.appendChild(el("line", {
    x1: fmt(x0), y1: fmt(y0), x2: fmt(x0), y2: fmt(y1),
    stroke: "#333", "stroke-width": "1", class: "axis",
  }));
  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    const x = px(tick);
    svg.appendChild(el("line", {
      x1: fmt(x), y1: fmt(y1), x2: fmt(x), y2: fmt(y1 + 5), stroke: "#333", "stroke-width": "1",
    }));
    const label = el("text", {
      x: fmt(x), y: fmt(y1 + 18), "text-anchor": "middle", "font-size": "11", fill: "#333",
    });
    label.textContent = String(tick);
    svg.appendChild(label);
  }

  const order = labelOrder(response);
  const isVisible = (label: string | null) =>
    label === null || visible === null || visible.has(label);

  if (showBands) {
    for (const band of response.bands) {
      if (!isVisible(band.label)) continue;
      const up = response.t.map((t, i) => `${fmt(px(t))},${fmt(py(band.upper[i]!))}`);
      const down = [...response.t.keys()]
        .reverse()
        .map((i) => `${fmt(px(response.t[i]!))},${fmt(py(band.lower[i]!))}`);
      const path = el("path", {
        d: `M ${[...up, ...down].join(" L ")} Z`,
        fill: colorFor(band.label, order),
        "fill-opacity": "0.25",
        stroke: "none",
        class: "band",
        "data-label": band.label,
      });
      svg.appendChild(path);
    }
  }

  for (const curve of response.curves) {
    if (!isVisible(curve.label)) continue;
    const pts = response.t.map((t, i) => `${fmt(px(t))},${fmt(py(curve.values[i]!))}`);
    svg.appendChild(el("polyline", {
      points: pts.join(" "),
      fill: "none",
      stroke: colorFor(curve.label, order),
      "stroke-width": "1",
      "stroke-opacity": "0.8",
      class: "curve",
      "data-id": curve.id,
      "data-label": curve.label ?? "",
    }));
  }

  container.replaceChildren(svg);
  return { svg, extent, layout };
}

export interface NearestCurve {
  id: string;
  label: string | null;
  index: number;
  value: number;
}

function idBefore(a: string, b: string): boolean {
  const na = Number(a);
  const nb = Number(b);
  if (Number.isFinite(na) && Number.isFinite(nb) && na !== nb) {
    return na < nb;
  }
  return a < b;
}

/**
 * Curve nearest to a pointer position, measured by vertical distance at the
 * nearest grid point; an exact tie goes to the lower point id.
 */
export function nearestCurve(
  response: ComputeResponse,
  visible: Set<string> | null,
  tFrac: number,
  yValue: number,
): NearestCurve | null {
  if (response.t.length === 0 || tFrac < 0 || tFrac > 1) {
    return null;
  }
  const index = Math.round(tFrac * (response.t.length - 1));
  let best: NearestCurve | null = null;
  let bestDist = Infinity;
  for (const curve of response.curves) {
    if (curve.label !== null && visible !== null && !visible.has(curve.label)) {
      continue;
    }
    const value = curve.values[index];
    if (value === undefined) continue;
    const dist = Math.abs(value - yValue);
    if (
      dist < bestDist ||
      (dist === bestDist && best !== null && idBefore(curve.id, best.id))
    ) {
      bestDist = dist;
      best = { id: curve.id, label: curve.label, index, value };
    }
  }
  return best;
}

/** Map pixel coordinates inside the svg back to (tFrac, yValue). */
export function pointerToData(
  plot: RenderedPlot,
  pxX: number,
  pxY: number,
): { tFrac: number; yValue: number } | null {
  const { layout, extent } = plot;
  const x0 = layout.marginLeft;
  const x1 = layout.width - layout.marginRight;
  const y0 = layout.marginTop;
  const y1 = layout.height - layout.marginBottom;
  if (pxX < x0 || pxX > x1 || pxY < y0 || pxY > y1) {
    return null;
  }
  const tFrac = (pxX - x0) / (x1 - x0);
  const yValue = extent.lo + ((y1 - pxY) / (y1 - y0)) * (extent.hi - extent.lo);
  return { tFrac, yValue };
}
