// Wire types of the compute service. The UI never derives mathematics from
// these; every number it displays is copied out of a response verbatim.

export interface CurveData {
  id: string;
  label: string | null;
  values: number[];
}

export interface BandData {
  label: string;
  upper: number[];
  lower: number[];
}

export interface ConvergenceInfo {
  N_final: number;
  max_last_delta: number;
  converged: boolean;
  tail_bound_ok: boolean;
  schedule: number[];
}

export interface ComputeResponse {
  t: number[];
  curves: CurveData[];
  bands: BandData[];
  objective: number | null;
  lower_bound: number | null;
  eigenvalues: number[];
  report: ConvergenceInfo | null;
  warnings: string[];
}

export interface DatasetInfo {
  id: string;
  d: number;
  n: number;
  labels: string[];
}

export type Mode = "classic" | "ssqv";
