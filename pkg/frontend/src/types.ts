// Wire-format types for the vizcheck HTTP API. These mirror the JSON the
// service emits; see docs/layout-schema.md in the repository root.

export type ColumnKind = "continuous" | "discrete";
export type ChartKind = "bar" | "strip" | "scatter" | "heatmap";
export type Level = string | number;

export interface SchemaEntry {
  name: string;
  type: ColumnKind;
  levels?: Level[];
  range?: [number, number] | null;
}

export interface PipelineStepInfo {
  kind: "filter" | "transform";
  column: string;
  op?: string;
  mode?: string;
  criterion?: Level;
  transform?: string;
}

export interface DatasetInfo {
  id: string;
  name: string;
  n_rows: number;
  dropped_rows: number;
  pipeline: PipelineStepInfo[];
  schema: SchemaEntry[];
}

export interface FamilyInfo {
  kind: string;
  has_scale: boolean;
  support: string;
}

export interface FitRequest {
  dataset: string;
  family: string;
  location: string;
  scale?: string | null;
  label?: string | null;
}

export interface FitResponse {
  model: string;
  label: string;
  family: string;
  converged: boolean;
  diagnostic: string | null;
  n_obs: number;
  description: string[];
}

export interface FilterSpec {
  column: string;
  op: "lt" | "le" | "gt" | "ge" | "eq" | "ne";
  mode: "include" | "exclude";
  criterion: Level;
}

export interface TransformSpec {
  column: string;
  kind: "log" | "logit";
}

export interface ChartRequest {
  x?: string | null;
  y?: string | null;
  row?: string | null;
  column?: string | null;
  show_residuals?: boolean;
}

export interface CheckRequest {
  dataset: string;
  chart: ChartRequest;
  models: string[];
  n_draws?: number;
  seed?: number;
}

export type ScaleInfo =
  | { kind: "continuous"; domain: [number, number] }
  | { kind: "discrete"; levels: Level[] };

export interface EncodingInfo {
  field: string;
  type: ColumnKind;
}

export interface FacetInfo {
  row: { field: string; levels: Level[] } | null;
  column: { field: string; levels: Level[] } | null;
}

export interface PanelInfo {
  source: string;
  converged: boolean | null;
  diagnostic: string | null;
  n_draws: number;
  animation_field: string | null;
  scales: Record<string, ScaleInfo>;
}

export interface ModelBlockInfo {
  label: string;
  family: string;
  response: string;
  converged: boolean;
  diagnostic: string | null;
  n_draws: number;
}

export interface TableRecord {
  source: string;
  draw: number | null;
  row: number;
  [column: string]: unknown;
}

export interface PredictiveTableInfo {
  dataset: string;
  outcome: string | null;
  columns: string[];
  models: ModelBlockInfo[];
  records: TableRecord[];
}

export interface CheckLayoutInfo {
  kind: ChartKind;
  encodings: { x: EncodingInfo | null; y: EncodingInfo | null };
  facet: FacetInfo;
  outcome_axis: "x" | "y" | null;
  residual_view: boolean;
  zero_reference: boolean;
  scales: Record<string, ScaleInfo>;
  panels: PanelInfo[];
  table: PredictiveTableInfo;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}
