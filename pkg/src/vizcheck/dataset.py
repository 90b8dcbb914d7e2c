"""Typed columnar tables: CSV ingestion, filters, and transforms.

A Dataset is an immutable value. Filters and transforms return new datasets
and append themselves to the pipeline history, so downstream consumers
(fits, charts) can verify they are looking at the same table state.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError, UnknownVariableError, UnsupportedError

DEFAULT_DISCRETE_THRESHOLD = 10

FILTER_OPS = ("lt", "le", "gt", "ge", "eq", "ne")
ORDERING_OPS = ("lt", "le", "gt", "ge")

_OP_FUNCS = {
    "lt": lambda v, c: v < c,
    "le": lambda v, c: v <= c,
    "gt": lambda v, c: v > c,
    "ge": lambda v, c: v >= c,
    "eq": lambda v, c: v == c,
    "ne": lambda v, c: v != c,
}


@dataclass(frozen=True)
class ColumnType:
    """Column kind plus, for discrete columns, the ordered level set."""

    kind: str  # "continuous" | "discrete"
    levels: tuple = ()

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"


@dataclass(frozen=True)
class Column:
    name: str
    ctype: ColumnType
    values: tuple

    @property
    def is_numeric(self) -> bool:
        return all(isinstance(v, (int, float)) for v in self.ctype.levels) \
            if self.ctype.is_discrete else True

    def numeric(self) -> np.ndarray:
        """Values as a float array; errors if the column holds strings."""
        if not self.is_numeric:
            raise DomainError(f"column '{self.name}' is not numeric")
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class Filter:
    column: str
    op: str  # lt | le | gt | ge | eq | ne
    mode: str  # include | exclude
    criterion: object

    def describe(self) -> str:
        return f"{self.mode} {self.column} {self.op} {self.criterion!r}"


@dataclass(frozen=True)
class Transform:
    column: str
    kind: str  # log | logit

    def describe(self) -> str:
        return f"{self.kind} {self.column}"


PipelineStep = object  # Filter | Transform


@dataclass(frozen=True)
class Dataset:
    name: str
    columns: tuple[Column, ...]
    pipeline: tuple = ()
    dropped_rows: int = 0

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownVariableError(f"unknown column '{name}' in dataset '{self.name}'",
                                   {"column": name})

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def signature(self) -> tuple:
        """Identity of this table state; fits and checks must agree on it."""
        return (self.name, self.pipeline, self.n_rows)

    def schema(self) -> list[dict]:
        out = []
        for c in self.columns:
            entry: dict = {"name": c.name, "type": c.ctype.kind}
            if c.ctype.is_discrete:
                entry["levels"] = list(c.ctype.levels)
            elif c.values:
                vals = c.numeric()
                entry["range"] = [float(vals.min()), float(vals.max())]
            else:
                entry["range"] = None
            out.append(entry)
        return out

    def row_subset(self, keep: Sequence[int], step: PipelineStep) -> "Dataset":
        cols = tuple(
            replace(c, values=tuple(c.values[i] for i in keep)) for c in self.columns
        )
        return Dataset(self.name, cols, self.pipeline + (step,), self.dropped_rows)


def _parse_number(text: str) -> float | None:
    try:
        v = float(text)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _as_level(v: float):
    """Numeric levels print as ints when integral (4 not 4.0)."""
    return int(v) if float(v).is_integer() else float(v)


def _infer_column(name: str, raw: list[str], threshold: int) -> Column:
    numbers = [_parse_number(v) for v in raw]
    if all(n is not None for n in numbers):
        distinct = sorted(set(numbers))
        if len(distinct) <= threshold:
            levels = tuple(_as_level(v) for v in distinct)
            return Column(name, ColumnType("discrete", levels),
                          tuple(_as_level(v) for v in numbers))
        return Column(name, ColumnType("continuous"), tuple(float(v) for v in numbers))
    levels = tuple(sorted(set(raw)))
    return Column(name, ColumnType("discrete", levels), tuple(raw))


def load_csv(source, name: str = "dataset",
             discrete_threshold: int = DEFAULT_DISCRETE_THRESHOLD) -> Dataset:
    """Parse a CSV byte/text stream into a typed Dataset.

    The first row is the header. `NA` or empty cells mark missing values;
    rows containing any missing value are dropped and counted in
    Dataset.dropped_rows. Numeric columns with at most `discrete_threshold`
    distinct values are classified discrete, all other numeric columns
    continuous, and non-numeric columns discrete.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    if text.startswith("﻿"):
        text = text[1:]

    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise ParseError("empty dataset: no header row")
    header = [h.strip() for h in rows[0]]
    if any(not h for h in header):
        raise ParseError("blank column name in header")
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise ParseError(f"duplicate column names: {', '.join(dupes)}")

    body: list[list[str]] = []
    dropped = 0
    for idx, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise ParseError(
                f"ragged row {idx}: expected {len(header)} fields, got {len(row)}",
                detail={"row": idx})
        cells = [c.strip() for c in row]
        if any(c == "" or c == "NA" for c in cells):
            dropped += 1
            continue
        body.append(cells)
    if not body:
        raise ParseError("empty dataset: no data rows")

    columns = tuple(
        _infer_column(h, [r[j] for r in body], discrete_threshold)
        for j, h in enumerate(header)
    )
    return Dataset(name, columns, pipeline=(), dropped_rows=dropped)


def _check_filter(d: Dataset, f: Filter) -> Column:
    if f.op not in FILTER_OPS:
        raise UnsupportedError(f"unknown filter op '{f.op}'")
    if f.mode not in ("include", "exclude"):
        raise UnsupportedError(f"unknown filter mode '{f.mode}'")
    col = d.column(f.column)
    if f.op in ORDERING_OPS:
        if col.ctype.is_discrete and not col.is_numeric:
            raise UnsupportedError(
                f"ordering filter '{f.op}' not supported on unordered discrete "
                f"column '{f.column}'")
        if not isinstance(f.criterion, (int, float)) or isinstance(f.criterion, bool):
            raise DomainError(
                f"filter on '{f.column}' needs a numeric criterion, "
                f"got {f.criterion!r}")
    elif col.is_numeric and not isinstance(f.criterion, (int, float)):
        raise DomainError(
            f"filter on numeric column '{f.column}' needs a numeric criterion, "
            f"got {f.criterion!r}")
    return col


def apply_filter(d: Dataset, f: Filter) -> Dataset:
    """Keep the rows matching (include) or not matching (exclude) a predicate."""
    col = _check_filter(d, f)
    pred = _OP_FUNCS[f.op]
    matches = [bool(pred(v, f.criterion)) for v in col.values]
    if f.mode == "exclude":
        keep = [i for i, m in enumerate(matches) if not m]
    else:
        keep = [i for i, m in enumerate(matches) if m]
    return d.row_subset(keep, f)


def apply_transform(d: Dataset, t: Transform) -> Dataset:
    """Replace a column with its log or logit (log-odds); same column name."""
    if t.kind not in ("log", "logit"):
        raise UnsupportedError(f"unknown transform '{t.kind}'")
    col = d.column(t.column)
    if not col.is_numeric:
        raise DomainError(f"cannot {t.kind}-transform non-numeric column '{t.column}'")
    vals = col.numeric()
    if t.kind == "log":
        bad = np.flatnonzero(~(vals > 0))
        if bad.size:
            raise DomainError(
                f"log of non-positive values in '{t.column}'",
                {"rows": bad.tolist()[:20]})
        new = np.log(vals)
    else:
        bad = np.flatnonzero(~((vals > 0) & (vals < 1)))
        if bad.size:
            raise DomainError(
                f"logit of values outside (0,1) in '{t.column}'",
                {"rows": bad.tolist()[:20]})
        new = np.log(vals / (1.0 - vals))

    if col.ctype.is_discrete:
        levels = tuple(sorted({float(v) for v in new}))
        ctype = ColumnType("discrete", levels)
        values = tuple(float(v) for v in new)
    else:
        ctype = col.ctype
        values = tuple(float(v) for v in new)
    cols = tuple(Column(c.name, ctype, values) if c.name == t.column else c
                 for c in d.columns)
    return Dataset(d.name, cols, d.pipeline + (t,), d.dropped_rows)


def apply_pipeline(d: Dataset, filters: Iterable[Filter],
                   transforms: Iterable[Transform]) -> Dataset:
    """Apply all filters (in order) and then all transforms (in order)."""
    out = d
    for i, f in enumerate(filters):
        try:
            out = apply_filter(out, f)
        except Exception as err:
            _annotate_step(err, "filter", i)
            raise
    for i, t in enumerate(transforms):
        try:
            out = apply_transform(out, t)
        except Exception as err:
            _annotate_step(err, "transform", i)
            raise
    return out


def apply_steps(d: Dataset, steps: Iterable[PipelineStep]) -> Dataset:
    """Apply a user-entered mix of filters and transforms.

    Filters always run before transforms; within each group the user's
    entry order is preserved.
    """
    filters = [s for s in steps if isinstance(s, Filter)]
    transforms = [s for s in steps if isinstance(s, Transform)]
    for s in steps:
        if not isinstance(s, (Filter, Transform)):
            raise UnsupportedError(f"unknown pipeline step {s!r}")
    return apply_pipeline(d, filters, transforms)


def _annotate_step(err: Exception, kind: str, index: int) -> None:
    if hasattr(err, "detail") and isinstance(err.detail, dict):
        err.detail.setdefault("step", {"kind": kind, "index": index})
