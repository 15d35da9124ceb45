import type { Mode } from "./types";

// The smoothing-weight slider covers [1e-2, 1e3] log-uniformly.
export const ALPHA_MIN = 1e-2;
export const ALPHA_MAX = 1e3;
export const SLIDER_STEPS = 1000;

export interface ViewState {
  dataset: string;
  mode: Mode;
  alpha: number;
  samples: number;
  showBands: boolean;
  /** labels currently hidden, kept sorted so serialization is canonical */
  hidden: string[];
}

export function defaultState(): ViewState {
  return {
    dataset: "iris",
    mode: "classic",
    alpha: 1.0,
    samples: 512,
    showBands: true,
    hidden: [],
  };
}

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

/** slider position in [0, 1] -> weight, log-uniform over [ALPHA_MIN, ALPHA_MAX] */
export function sliderToAlpha(pos: number): number {
  const p = clamp(pos, 0, 1);
  const logSpan = Math.log10(ALPHA_MAX) - Math.log10(ALPHA_MIN);
  return 10 ** (Math.log10(ALPHA_MIN) + p * logSpan);
}

/** weight -> slider position in [0, 1] */
export function alphaToSlider(alpha: number): number {
  const a = clamp(alpha, ALPHA_MIN, ALPHA_MAX);
  const logSpan = Math.log10(ALPHA_MAX) - Math.log10(ALPHA_MIN);
  return (Math.log10(a) - Math.log10(ALPHA_MIN)) / logSpan;
}

function canonical(state: ViewState): ViewState {
  return {
    ...state,
    alpha: clamp(state.alpha, ALPHA_MIN, ALPHA_MAX),
    samples: Math.max(2, Math.round(state.samples)),
    hidden: [...new Set(state.hidden)].sort(),
  };
}

/**
 * Canonical query-string form of the view state. parse(serialize(s)) equals
 * canonical(s), and serialize(parse(q)) returns q for strings this function
 * produced, so the state survives the URL round trip unchanged.
 */
export function serialize(state: ViewState): string {
  const s = canonical(state);
  const params = new URLSearchParams();
  params.set("dataset", s.dataset);
  params.set("mode", s.mode);
  params.set("alpha", String(s.alpha));
  params.set("samples", String(s.samples));
  params.set("bands", s.showBands ? "1" : "0");
  if (s.hidden.length > 0) {
    params.set("hide", s.hidden.join(","));
  }
  return params.toString();
}

export function parse(query: string): ViewState {
  const params = new URLSearchParams(query);
  const base = defaultState();
  const mode = params.get("mode");
  const alpha = Number(params.get("alpha"));
  const samples = Number(params.get("samples"));
  const hide = params.get("hide");
  return canonical({
    dataset: params.get("dataset") ?? base.dataset,
    mode: mode === "ssqv" ? "ssqv" : "classic",
    alpha: Number.isFinite(alpha) && alpha > 0 ? alpha : base.alpha,
    samples: Number.isFinite(samples) && samples >= 2 ? samples : base.samples,
    showBands: params.get("bands") !== "0",
    hidden: hide ? hide.split(",").filter((x) => x.length > 0) : [],
  });
}

export function toggleLabel(state: ViewState, label: string): ViewState {
  const hidden = state.hidden.includes(label)
    ? state.hidden.filter((l) => l !== label)
    : [...state.hidden, label];
  return canonical({ ...state, hidden });
}

export function visibleSet(state: ViewState, allLabels: string[]): Set<string> {
  return new Set(allLabels.filter((l) => !state.hidden.includes(l)));
}
