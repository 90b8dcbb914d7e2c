"""Chart specifications, smart defaults, faceting, and check layouts.

A check layout grafts one predictions panel per model onto the user's chart,
left of observed data to right in model-bar order, with every axis scale
computed jointly over observed and predicted values so all panels share a
common frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ColumnType, Dataset
from .errors import DomainError, UnknownVariableError, UnsupportedError
from .predict import OBSERVED, PredictiveTable

PAD_FRACTION = 0.05

CHART_KINDS = ("bar", "strip", "scatter", "heatmap")


@dataclass(frozen=True)
class ChartSpec:
    x: str | None = None
    y: str | None = None
    row: str | None = None
    column: str | None = None
    show_residuals: bool = False


def default_chart(x_type: ColumnType | None, y_type: ColumnType | None) -> str:
    """Chart kind implied by the encoded variable types.

    Bar for a lone discrete variable, strip for a lone continuous variable
    or a continuous/discrete pair, scatter for two continuous, heatmap for
    two discrete.
    """
    if x_type is None and y_type is None:
        raise DomainError("chart needs at least one of x or y")
    if x_type is None or y_type is None:
        t = x_type or y_type
        assert t is not None
        return "bar" if t.is_discrete else "strip"
    if x_type.is_discrete and y_type.is_discrete:
        return "heatmap"
    if not x_type.is_discrete and not y_type.is_discrete:
        return "scatter"
    return "strip"


@dataclass(frozen=True)
class FacetCell:
    row_level: object | None
    column_level: object | None
    indices: tuple[int, ...]


@dataclass(frozen=True)
class FacetGrid:
    row_variable: str | None
    row_levels: tuple
    column_variable: str | None
    column_levels: tuple
    cells: tuple[FacetCell, ...]  # row-major

    @property
    def shape(self) -> tuple[int, int]:
        return (max(len(self.row_levels), 1), max(len(self.column_levels), 1))


def _facet_levels(d: Dataset, var: str | None) -> tuple:
    if var is None:
        return ()
    col = d.column(var)
    if not col.ctype.is_discrete:
        raise UnsupportedError(f"cannot facet on continuous column '{var}'",
                               {"column": var})
    return col.ctype.levels


def facet_grid(spec: ChartSpec, d: Dataset) -> FacetGrid:
    """Trellis cells: the cross product of row and column facet levels."""
    row_levels = _facet_levels(d, spec.row)
    col_levels = _facet_levels(d, spec.column)
    row_vals = d.column(spec.row).values if spec.row else None
    col_vals = d.column(spec.column).values if spec.column else None

    cells = []
    for rl in (row_levels or (None,)):
        for cl in (col_levels or (None,)):
            idx = tuple(
                i for i in range(d.n_rows)
                if (row_vals is None or row_vals[i] == rl)
                and (col_vals is None or col_vals[i] == cl))
            cells.append(FacetCell(rl, cl, idx))
    return FacetGrid(spec.row, row_levels, spec.column, col_levels,
                     tuple(cells))


@dataclass(frozen=True)
class Scale:
    kind: str  # continuous | discrete
    domain: tuple[float, float] | None = None
    levels: tuple = ()

    def to_payload(self) -> dict:
        if self.kind == "continuous":
            assert self.domain is not None
            return {"kind": "continuous",
                    "domain": [float(self.domain[0]), float(self.domain[1])]}
        return {"kind": "discrete", "levels": list(self.levels)}


@dataclass
class Panel:
    source: str
    converged: bool | None
    diagnostic: str | None
    n_draws: int
    animation_field: str | None
    scales: dict[str, Scale]

    def to_payload(self) -> dict:
        return {
            "source": self.source,
            "converged": self.converged,
            "diagnostic": self.diagnostic,
            "n_draws": self.n_draws,
            "animation_field": self.animation_field,
            "scales": {axis: s.to_payload() for axis, s in self.scales.items()},
        }


@dataclass
class CheckLayout:
    kind: str
    encodings: dict[str, dict | None]
    facet: dict
    outcome_axis: str | None
    residual_view: bool
    zero_reference: bool
    scales: dict[str, Scale]
    panels: list[Panel]
    table: PredictiveTable
    residual: list[float] | None = None

    def to_payload(self) -> dict:
        table_payload = self.table.to_payload()
        if self.residual is not None:
            table_payload["columns"] = table_payload["columns"] + ["residual"]
            for rec, r in zip(table_payload["records"], self.residual):
                rec["residual"] = float(r)
        return {
            "kind": self.kind,
            "encodings": self.encodings,
            "facet": self.facet,
            "outcome_axis": self.outcome_axis,
            "residual_view": self.residual_view,
            "zero_reference": self.zero_reference,
            "scales": {axis: s.to_payload() for axis, s in self.scales.items()},
            "panels": [p.to_payload() for p in self.panels],
            "table": table_payload,
        }


def _numeric_domain(values) -> tuple[float, float]:
    arr = np.asarray([float(v) for v in values], dtype=float)
    arr = arr[np.isfinite(arr)]
    if arr.size == 0:
        return (0.0, 1.0)
    lo, hi = float(arr.min()), float(arr.max())
    span = hi - lo
    pad = PAD_FRACTION * (span if span > 0 else max(abs(hi), 1.0))
    return (lo - pad, hi + pad)


def _level_union(base_levels: tuple, values) -> tuple:
    extra = set(values) - set(base_levels)
    if not extra:
        return tuple(base_levels)
    merged = list(base_levels) + sorted(extra, key=lambda v: (str(type(v)), v))
    numeric = all(isinstance(v, (int, float)) for v in merged)
    return tuple(sorted(merged)) if numeric else tuple(sorted(merged, key=str))


def _field_scale(table: PredictiveTable, field_name: str,
                 residual: list[float] | None) -> Scale:
    if field_name == "residual":
        assert residual is not None
        return Scale("continuous", domain=_numeric_domain(residual))
    ctype = table.column_types.get(field_name)
    values = table.data[field_name]
    if ctype is not None and ctype.is_discrete:
        return Scale("discrete", levels=_level_union(ctype.levels, values))
    return Scale("continuous", domain=_numeric_domain(values))


def _resolve_type(table: PredictiveTable, field_name: str) -> ColumnType:
    if field_name == "residual":
        return ColumnType("continuous")
    ctype = table.column_types.get(field_name)
    if ctype is None:
        raise UnknownVariableError(
            f"chart variable '{field_name}' is not in the check table",
            {"variable": field_name})
    return ctype


def _residual_column(table: PredictiveTable) -> list[float]:
    """Residuals aligned with table rows: observed rows against the first
    converged model, predicted rows against their own model's fitted mean."""
    converged = [m for m in table.models if m.converged and m.means is not None]
    if not converged:
        raise DomainError("residual view requires at least one converged model")
    by_label = {m.label: m for m in table.models}
    first = converged[0]
    assert table.outcome_numeric is not None
    out = []
    for src, row, y in zip(table.source, table.row, table.outcome_numeric):
        block = first if src == OBSERVED else by_label[src]
        means = block.means if block.means is not None else first.means
        assert means is not None
        out.append(float(y - means[row]))
    return out


def compose_check(spec: ChartSpec, table: PredictiveTable) -> CheckLayout:
    """Lay out the observed panel plus one predictions panel per model.

    All panels share the chart kind, facet grid, and axis scales; scale
    domains cover observed and predicted values jointly (with 5% padding on
    quantitative axes) so extreme draws are never clipped. With
    show_residuals the outcome encoding is replaced by residuals around a
    zero reference line.
    """
    if spec.x is None and spec.y is None:
        raise DomainError("chart needs at least one of x or y")

    for var in (spec.x, spec.y, spec.row, spec.column):
        if var is not None:
            _resolve_type(table, var)
    for var in (spec.row, spec.column):
        if var is not None and not _resolve_type(table, var).is_discrete:
            raise UnsupportedError(
                f"cannot facet on continuous column '{var}'", {"column": var})

    residual: list[float] | None = None
    x_field, y_field = spec.x, spec.y
    if spec.show_residuals:
        residual = _residual_column(table)
        outcome = table.outcome
        if x_field == outcome:
            x_field = "residual"
        elif y_field == outcome:
            y_field = "residual"
        else:
            raise DomainError(
                "residual view requires the modeled outcome on an axis",
                {"outcome": outcome})

    x_type = _resolve_type(table, x_field) if x_field else None
    y_type = _resolve_type(table, y_field) if y_field else None
    kind = default_chart(x_type, y_type)

    scales: dict[str, Scale] = {}
    encodings: dict[str, dict | None] = {"x": None, "y": None}
    if x_field:
        assert x_type is not None
        scales["x"] = _field_scale(table, x_field, residual)
        encodings["x"] = {"field": x_field, "type": x_type.kind}
    if y_field:
        assert y_type is not None
        scales["y"] = _field_scale(table, y_field, residual)
        encodings["y"] = {"field": y_field, "type": y_type.kind}

    outcome_axis = None
    if table.outcome is not None:
        if spec.x == table.outcome:
            outcome_axis = "x"
        elif spec.y == table.outcome:
            outcome_axis = "y"

    facet = {
        "row": None if spec.row is None else {
            "field": spec.row,
            "levels": list(table.column_types[spec.row].levels)},
        "column": None if spec.column is None else {
            "field": spec.column,
            "levels": list(table.column_types[spec.column].levels)},
    }

    panels = [Panel(source=OBSERVED, converged=None, diagnostic=None,
                    n_draws=0, animation_field=None, scales=dict(scales))]
    for m in table.models:
        panels.append(Panel(
            source=m.label,
            converged=m.converged,
            diagnostic=m.diagnostic,
            n_draws=m.n_draws,
            animation_field="draw" if m.n_draws > 0 else None,
            scales=dict(scales),
        ))

    return CheckLayout(
        kind=kind,
        encodings=encodings,
        facet=facet,
        outcome_axis=outcome_axis,
        residual_view=spec.show_residuals,
        zero_reference=spec.show_residuals,
        scales=scales,
        panels=panels,
        table=table,
        residual=residual,
    )
