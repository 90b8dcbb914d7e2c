"""Predictive distributions and model-check tables.

Parameter vectors are drawn from the asymptotic normal around the MLE, then
pushed through the family sampler to produce hypothetical outcomes on the
data scale. assemble_check merges the observed table with one block per
(model, draw) under a unique (source, draw, row) key, deriving per-model
seeds from the model label so adding or removing one model never perturbs
another model's draws.
"""

from __future__ import annotations

import io
import csv
import zlib
from dataclasses import dataclass

import numpy as np

from . import families
from .dataset import ColumnType, Dataset
from .errors import DomainError, NotConvergedError
from .fit import FittedModel, linear_predictors, response_values

MAX_DRAWS = 500
OBSERVED = "observed"

ResidualColumn = np.ndarray


@dataclass(frozen=True)
class ParamDraw:
    draw_index: int
    beta: np.ndarray


@dataclass
class ModelBlock:
    """Per-model metadata carried by a PredictiveTable."""

    label: str
    family: str
    response: str
    converged: bool
    diagnostic: str | None
    n_draws: int
    means: np.ndarray | None  # E[y|x] at the MLE, for residual views

    def to_payload(self) -> dict:
        return {
            "label": self.label,
            "family": self.family,
            "response": self.response,
            "converged": self.converged,
            "diagnostic": self.diagnostic,
            "n_draws": self.n_draws,
        }


@dataclass
class PredictiveTable:
    """Long-format merge of observed rows and sampled predictive rows."""

    dataset: str
    signature: tuple
    carried: list[str]
    outcome: str | None
    column_types: dict[str, ColumnType]
    source: list[str]
    draw: list[int | None]
    row: list[int]
    data: dict[str, list]
    outcome_numeric: list[float] | None
    models: list[ModelBlock]

    @property
    def n_rows(self) -> int:
        return len(self.source)

    @property
    def columns(self) -> list[str]:
        cols = ["source", "draw", "row"] + list(self.carried)
        if self.outcome is not None:
            cols.append(self.outcome)
        return cols

    def records(self):
        value_cols = list(self.carried) + ([self.outcome] if self.outcome else [])
        for i in range(self.n_rows):
            rec = {"source": self.source[i], "draw": self.draw[i],
                   "row": self.row[i]}
            for c in value_cols:
                rec[c] = self.data[c][i]
            yield rec

    def to_payload(self) -> dict:
        return {
            "dataset": self.dataset,
            "outcome": self.outcome,
            "columns": self.columns,
            "models": [m.to_payload() for m in self.models],
            "records": [_jsonable(r) for r in self.records()],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for rec in self.records():
            writer.writerow(["" if rec[c] is None else _cell(rec[c])
                             for c in self.columns])
        return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(rec: dict) -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, (np.integer,)):
            out[k] = int(v)
        elif isinstance(v, (np.floating,)):
            out[k] = float(v)
        else:
            out[k] = v
    return out


def label_seed(seed: int, label: str) -> int:
    """Stable per-model seed: base seed plus a CRC of the model label."""
    return int(seed) + zlib.crc32(label.encode("utf-8"))


def draw_parameters(m: FittedModel, n_draws: int, seed: int) -> list[ParamDraw]:
    """Sample coefficient vectors from N(beta_hat, covariance).

    Uses the spectral square root with eigenvalues clamped at zero so a
    near-singular covariance still yields draws. Deterministic given seed.
    """
    if not m.converged:
        raise NotConvergedError("cannot sample parameters: model did not "
                                "converge", {"label": m.spec.label})
    if n_draws < 1:
        raise DomainError(f"n_draws must be >= 1, got {n_draws}")
    w, v = np.linalg.eigh(m.covariance)
    root = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.T
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n_draws, m.beta.size))
    draws = m.beta + z @ root
    return [ParamDraw(i, draws[i]) for i in range(n_draws)]


def _sampled_outcomes(m: FittedModel, d: Dataset, beta: np.ndarray,
                      rng: np.random.Generator) -> np.ndarray:
    eta, sigma = linear_predictors(m, d, beta)
    return np.atleast_1d(
        families.sample_outcome(m.spec.family, eta, sigma, rng))


def _format_outcome(m: FittedModel, values: np.ndarray) -> list:
    if m.outcome_levels is not None:
        lo, hi = m.outcome_levels
        return [hi if v else lo for v in values]
    if np.issubdtype(values.dtype, np.integer):
        return [int(v) for v in values]
    return [float(v) for v in values]


def predictive_dataset(m: FittedModel, d: Dataset, draw: ParamDraw,
                       seed: int) -> dict[str, list]:
    """One hypothetical outcome per row of d at a sampled coefficient vector.

    Predictor columns pass through unchanged (so checks can facet by
    variables the model ignores); the outcome column holds draws mapped back
    to the data scale through the family's inverse link / sampler.
    """
    response = m.spec.location.response
    rng = np.random.default_rng(seed)
    y_star = _sampled_outcomes(m, d, draw.beta, rng)
    out: dict[str, list] = {"row": list(range(d.n_rows))}
    for col in d.columns:
        if col.name != response:
            out[col.name] = list(col.values)
    out[response] = _format_outcome(m, y_star)
    return out


def residuals(m: FittedModel, d: Dataset) -> ResidualColumn:
    """Response-scale residuals y - E[y | x] at the fitted coefficients."""
    if not m.converged:
        raise NotConvergedError("cannot compute residuals: model did not "
                                "converge", {"label": m.spec.label})
    assert m.spec.location.response is not None
    y, _ = response_values(d, m.spec.location.response, m.spec.family)
    eta, sigma = linear_predictors(m, d)
    mean = np.atleast_1d(families.family_mean(m.spec.family, eta, sigma))
    return y - mean


def assemble_check(d: Dataset, models: list[FittedModel], n_draws: int,
                   seed: int) -> PredictiveTable:
    """Merge the observed table with predictive blocks for each model.

    Keys (source, draw, row) are unique: the observed block appears once and
    each converged model contributes n_draws blocks of n_rows rows.
    Non-converged models are carried as zero-draw blocks so layouts can
    still show them flagged.
    """
    if not 1 <= n_draws <= MAX_DRAWS:
        raise DomainError(f"n_draws must be in 1..{MAX_DRAWS}, got {n_draws}")
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    labels = [m.spec.label for m in models]
    if len(set(labels)) != len(labels):
        dupes = sorted({lb for lb in labels if labels.count(lb) > 1})
        raise DomainError(f"duplicate model labels: {', '.join(dupes)}",
                          {"labels": dupes})
    if OBSERVED in labels:
        raise DomainError(f"model label '{OBSERVED}' is reserved")

    responses = {m.spec.location.response for m in models}
    if len(responses) > 1:
        raise DomainError(
            f"models in one check must share an outcome, got {sorted(responses)}")
    for m in models:
        if m.data_signature != d.signature():
            raise DomainError(
                f"model '{m.spec.label}' was fit on a different dataset state",
                {"label": m.spec.label})

    outcome = models[0].spec.location.response if models else None
    carried = [c.name for c in d.columns if c.name != outcome]

    source: list[str] = []
    draw_idx: list[int | None] = []
    row_idx: list[int] = []
    data: dict[str, list] = {c: [] for c in carried}
    if outcome is not None:
        data[outcome] = []
    outcome_numeric: list[float] | None = [] if outcome is not None else None

    def extend(src: str, dr: int | None, cols: dict[str, list],
               numeric: np.ndarray | None) -> None:
        n = d.n_rows
        source.extend([src] * n)
        draw_idx.extend([dr] * n)
        row_idx.extend(range(n))
        for c in carried:
            data[c].extend(cols[c])
        if outcome is not None:
            data[outcome].extend(cols[outcome])
            assert outcome_numeric is not None and numeric is not None
            outcome_numeric.extend(float(v) for v in numeric)

    observed_cols = {c.name: list(c.values) for c in d.columns}
    if outcome is not None:
        y_num, _ = response_values(d, outcome, models[0].spec.family)
    else:
        y_num = None
    extend(OBSERVED, None, observed_cols, y_num)

    blocks: list[ModelBlock] = []
    for m in models:
        assert outcome is not None
        if not m.converged:
            blocks.append(ModelBlock(m.spec.label, m.spec.family, outcome,
                                     False, m.diagnostic, 0, None))
            continue
        model_seed = label_seed(seed, m.spec.label)
        draws = draw_parameters(m, n_draws, model_seed)
        eta, sigma = linear_predictors(m, d)
        means = np.atleast_1d(families.family_mean(m.spec.family, eta, sigma))
        for k, draw in enumerate(draws):
            rng = np.random.default_rng(model_seed + 1 + k)
            y_star = _sampled_outcomes(m, d, draw.beta, rng)
            cols = dict(observed_cols)
            cols[outcome] = _format_outcome(m, y_star)
            extend(m.spec.label, k, cols, y_star)
        blocks.append(ModelBlock(m.spec.label, m.spec.family, outcome,
                                 True, None, n_draws, means))

    return PredictiveTable(
        dataset=d.name,
        signature=d.signature(),
        carried=carried,
        outcome=outcome,
        column_types={c.name: c.ctype for c in d.columns},
        source=source,
        draw=draw_idx,
        row=row_idx,
        data=data,
        outcome_numeric=outcome_numeric,
        models=blocks,
    )
