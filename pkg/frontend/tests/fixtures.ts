import type {
  CheckLayoutInfo,
  DatasetInfo,
  FamilyInfo,
  PanelInfo,
  TableRecord,
} from "../src/types.js";

export const FAMILIES: FamilyInfo[] = [
  { kind: "normal", has_scale: true, support: "all real numbers" },
  { kind: "log_normal", has_scale: true, support: "positive values" },
  { kind: "logit_normal", has_scale: true,
    support: "values strictly between 0 and 1" },
  { kind: "logistic", has_scale: false, support: "0 or 1" },
  { kind: "poisson", has_scale: false, support: "non-negative integers" },
  { kind: "negative_binomial", has_scale: true,
    support: "non-negative integers" },
];

export function datasetInfo(): DatasetInfo {
  return {
    id: "ds_1",
    name: "demo",
    n_rows: 6,
    dropped_rows: 0,
    pipeline: [],
    schema: [
      { name: "x", type: "continuous", range: [0, 5] },
      { name: "y", type: "continuous", range: [0, 10] },
      { name: "g", type: "discrete", levels: ["a", "b"] },
    ],
  };
}

export interface LayoutOptions {
  models?: { label: string; converged: boolean; nDraws: number }[];
  nRows?: number;
  residual?: boolean;
}

export function scatterLayout(opts: LayoutOptions = {}): CheckLayoutInfo {
  const models = opts.models ?? [
    { label: "m1", converged: true, nDraws: 3 },
    { label: "m2", converged: true, nDraws: 3 },
  ];
  const nRows = opts.nRows ?? 6;

  const records: TableRecord[] = [];
  for (let i = 0; i < nRows; i++) {
    records.push({ source: "observed", draw: null, row: i,
                   x: i, g: i % 2 ? "b" : "a", y: i * 1.5 });
  }
  for (const m of models) {
    if (!m.converged) continue;
    for (let d = 0; d < m.nDraws; d++) {
      for (let i = 0; i < nRows; i++) {
        records.push({ source: m.label, draw: d, row: i,
                       x: i, g: i % 2 ? "b" : "a",
                       y: i * 1.5 + 0.3 * (d + 1) });
      }
    }
  }
  if (opts.residual) {
    for (const r of records) r["residual"] = (r["y"] as number) - 4.0;
  }

  const scales: CheckLayoutInfo["scales"] = {
    x: { kind: "continuous", domain: [-0.3, nRows - 1 + 0.3] },
    y: { kind: "continuous", domain: [-1.0, 11.0] },
  };

  const panels: PanelInfo[] = [
    { source: "observed", converged: null, diagnostic: null, n_draws: 0,
      animation_field: null, scales },
    ...models.map((m): PanelInfo => ({
      source: m.label,
      converged: m.converged,
      diagnostic: m.converged ? null : "degenerate scale",
      n_draws: m.converged ? m.nDraws : 0,
      animation_field: m.converged ? "draw" : null,
      scales,
    })),
  ];

  return {
    kind: "scatter",
    encodings: {
      x: { field: "x", type: "continuous" },
      y: { field: opts.residual ? "residual" : "y", type: "continuous" },
    },
    facet: { row: null, column: null },
    outcome_axis: "y",
    residual_view: Boolean(opts.residual),
    zero_reference: Boolean(opts.residual),
    scales,
    panels,
    table: {
      dataset: "demo",
      outcome: "y",
      columns: ["source", "draw", "row", "x", "g", "y"],
      models: models.map((m) => ({
        label: m.label, family: "normal", response: "y",
        converged: m.converged,
        diagnostic: m.converged ? null : "degenerate scale",
        n_draws: m.converged ? m.nDraws : 0,
      })),
      records,
    },
  };
}
