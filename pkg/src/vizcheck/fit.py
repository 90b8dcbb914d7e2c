"""Design-matrix construction and maximum-likelihood fitting.

Location coefficients enter linearly on the family's link scale; scale
coefficients enter through a log link so sigma stays positive without
constraints. The joint coefficient vector is optimized by BFGS with
analytic gradients, then polished with Newton steps using the numerically
evaluated observed information (which also provides the covariance).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import families
from .dataset import Dataset
from .errors import DomainError, NotConvergedError
from .formula import FormulaAST, ModelSpec, validate_spec

GRAD_TOL = 1e-6
RELATIVE_LL_TOL = 1e-10
MAX_ITER = 500
HESS_STEP = 1e-5
RIDGE = 1e-8
SIGMA_FLOOR, SIGMA_CEIL = 1e-8, 1e8
ETA_SATURATION = 25.0  # log-odds beyond this round to probability 0/1


@dataclass
class DesignMatrix:
    labels: list[str]
    values: np.ndarray  # (n_rows, n_cols) float
    term_columns: dict[str, list[int]]
    reference_levels: dict[str, object]
    level_maps: dict[str, tuple]
    intercept: bool

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


def _variable_encoding(d: Dataset, var: str, level_maps: dict | None):
    """Per-variable encoding: [(label, column values)]."""
    col = d.column(var)
    if not col.ctype.is_discrete:
        return [(var, col.numeric())]
    levels = tuple(level_maps[var]) if level_maps and var in level_maps \
        else col.ctype.levels
    if len(levels) < 2:
        raise DomainError(
            f"no contrast possible: discrete column '{var}' has a single "
            f"level {levels}", {"column": var})
    known = set(levels)
    unseen = sorted({v for v in col.values if v not in known}, key=str)
    if unseen:
        raise DomainError(
            f"column '{var}' has levels {unseen} not seen at fit time",
            {"column": var, "levels": [str(u) for u in unseen]})
    cols = []
    for lv in levels[1:]:
        ind = np.asarray([1.0 if v == lv else 0.0 for v in col.values])
        cols.append((f"{var}={lv}", ind))
    return cols


def build_design_matrix(d: Dataset, f: FormulaAST,
                        level_maps: dict | None = None) -> DesignMatrix:
    """Treatment-coded design matrix for a formula on a dataset.

    Column order is deterministic: intercept, then terms in canonical order,
    with a discrete variable's first level held out as the reference.
    Passing `level_maps` reuses level sets recorded at fit time so
    prediction matrices line up with the fitted coefficients.
    """
    if d.n_rows == 0:
        raise DomainError("empty dataset: no rows to encode")
    labels: list[str] = []
    columns: list[np.ndarray] = []
    term_columns: dict[str, list[int]] = {}
    references: dict[str, object] = {}
    used_levels: dict[str, tuple] = {}

    if f.intercept:
        labels.append("(Intercept)")
        columns.append(np.ones(d.n_rows))

    encodings: dict[str, list] = {}
    for var in f.variables():
        encodings[var] = _variable_encoding(d, var, level_maps)
        col = d.column(var)
        if col.ctype.is_discrete:
            levels = tuple(level_maps[var]) if level_maps and var in level_maps \
                else col.ctype.levels
            references[var] = levels[0]
            used_levels[var] = levels

    for term in f.terms:
        idx = []
        parts = [encodings[v] for v in term.variables]
        for combo in itertools.product(*parts):
            label = ":".join(p[0] for p in combo)
            vals = combo[0][1].copy()
            for _, v in combo[1:]:
                vals = vals * v
            idx.append(len(columns))
            labels.append(label)
            columns.append(vals)
        term_columns[term.label] = idx

    values = np.column_stack(columns) if columns else np.empty((d.n_rows, 0))
    return DesignMatrix(labels=labels, values=values, term_columns=term_columns,
                        reference_levels=references, level_maps=used_levels,
                        intercept=f.intercept)


@dataclass
class FittedModel:
    spec: ModelSpec
    beta: np.ndarray
    labels: list[str]
    n_loc: int
    covariance: np.ndarray
    log_lik: float
    converged: bool
    iterations: int
    n_obs: int
    data_signature: tuple
    level_maps: dict[str, tuple] = field(default_factory=dict)
    outcome_levels: tuple | None = None
    diagnostic: str | None = None

    @property
    def beta_loc(self) -> np.ndarray:
        return self.beta[:self.n_loc]

    @property
    def beta_scale(self) -> np.ndarray:
        return self.beta[self.n_loc:]

    @property
    def label(self) -> str:
        return self.spec.label

    def to_payload(self) -> dict:
        return {
            "label": self.spec.label,
            "family": self.spec.family,
            "coefficients": {lb: float(b) for lb, b in zip(self.labels, self.beta)},
            "covariance": [[float(v) for v in row] for row in self.covariance],
            "log_lik": float(self.log_lik),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "n_obs": int(self.n_obs),
            "diagnostic": self.diagnostic,
        }


def response_values(d: Dataset, name: str, family_kind: str):
    """Outcome column as floats, plus the binary level mapping if one applies."""
    fam = families.get_family(family_kind)
    col = d.column(name)
    if col.is_numeric:
        return col.numeric(), None
    if family_kind == "logistic":
        levels = col.ctype.levels
        if len(levels) != 2:
            raise DomainError(
                f"undefined likelihood: logistic expects a two-level outcome; "
                f"'{name}' has {len(levels)} levels", {"column": name})
        y = np.asarray([0.0 if v == levels[0] else 1.0 for v in col.values])
        return y, tuple(levels)
    raise DomainError(
        f"undefined likelihood: {family_kind} expects {fam.support}; "
        f"outcome '{name}' is not numeric", {"column": name})


def _check_support(family_kind: str, y: np.ndarray) -> None:
    fam = families.get_family(family_kind)
    bad = fam.support_violations(y)
    if bad.size:
        vals = y[bad[:5]].tolist()
        raise DomainError(
            f"undefined likelihood: {family_kind} expects {fam.support}, "
            f"got {vals} (rows {bad.tolist()[:20]})",
            {"family": family_kind, "rows": bad.tolist()[:20]})


class _Objective:
    """Negative log-likelihood of the joint coefficient vector."""

    def __init__(self, fam, y, x_loc, x_scale):
        self.fam = fam
        self.y = y
        self.x_loc = x_loc
        self.x_scale = x_scale
        self.n_loc = x_loc.shape[1]

    def split(self, beta):
        eta = self.x_loc @ beta[:self.n_loc]
        if self.x_scale is None:
            return eta, None
        s = np.clip(self.x_scale @ beta[self.n_loc:], -300.0, 300.0)
        return eta, np.exp(s)

    def __call__(self, beta):
        eta, sigma = self.split(beta)
        with np.errstate(all="ignore"):
            if sigma is None:
                ll = self.fam.loglik(self.y, eta)
            else:
                ll = self.fam.loglik(self.y, eta, sigma)
            f = -np.sum(ll)
            if not np.isfinite(f):
                return np.inf, np.zeros_like(beta)
            g_loc = self.x_loc.T @ self.fam.dl_dmu(self.y, eta, sigma)
            if sigma is None:
                grad = g_loc
            else:
                g_scale = self.x_scale.T @ self.fam.dl_dlogsigma(self.y, eta, sigma)
                grad = np.concatenate([g_loc, g_scale])
        if not np.all(np.isfinite(grad)):
            return np.inf, np.zeros_like(beta)
        return f, -grad

    def value(self, beta) -> float:
        return self(beta)[0]

    def grad(self, beta) -> np.ndarray:
        return self(beta)[1]


def _numeric_hessian(obj: _Objective, beta: np.ndarray) -> np.ndarray:
    """Observed information at beta: central differences of the gradient."""
    k = beta.size
    hess = np.empty((k, k))
    for j in range(k):
        h = HESS_STEP * (1.0 + abs(beta[j]))
        up = beta.copy()
        up[j] += h
        dn = beta.copy()
        dn[j] -= h
        hess[:, j] = (obj.grad(up) - obj.grad(dn)) / (2.0 * h)
    return 0.5 * (hess + hess.T)


def _newton_polish(obj: _Objective, beta: np.ndarray, f: float):
    """Newton refinement near the optimum; returns (beta, f, iterations).

    Near machine precision the objective can no longer resolve progress, so
    steps that leave f unchanged (to rounding) are accepted when they reduce
    the gradient norm.
    """
    iters = 0
    gnorm = float(np.max(np.abs(obj.grad(beta))))
    for _ in range(12):
        g = obj.grad(beta)
        if not np.all(np.isfinite(g)) or gnorm < 1e-12:
            break
        hess = _numeric_hessian(obj, beta)
        try:
            step = np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        improved = False
        scale = 1.0
        f_slack = 1e-9 * (1.0 + abs(f))
        for _ in range(8):
            cand = beta - scale * step
            fc = obj.value(cand)
            gc = float(np.max(np.abs(obj.grad(cand))))
            if fc < f or (fc <= f + f_slack and gc < gnorm):
                beta, f, gnorm = cand, min(fc, f), gc
                improved = True
                break
            scale *= 0.5
        iters += 1
        if not improved:
            break
    return beta, f, iters


def _covariance(obj: _Objective, beta: np.ndarray) -> np.ndarray:
    info = _numeric_hessian(obj, beta)
    cov = None
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        cov = None
    if cov is None or not np.all(np.isfinite(cov)):
        try:
            cov = np.linalg.inv(info + RIDGE * np.eye(beta.size))
        except np.linalg.LinAlgError:
            cov = np.linalg.pinv(info + RIDGE * np.eye(beta.size))
    if not np.all(np.isfinite(cov)):
        cov = np.zeros((beta.size, beta.size))
    return 0.5 * (cov + cov.T)


def fit_model(d: Dataset, spec: ModelSpec) -> FittedModel:
    """Maximum-likelihood fit of a location/scale model.

    Non-convergence (including degenerate scale and separation) is reported
    on the returned model rather than raised, so a check built on a bad
    model still renders and signals the problem visually.
    """
    validate_spec(spec, d)
    if d.n_rows == 0:
        raise DomainError("empty dataset: nothing to fit")
    fam = families.get_family(spec.family)
    assert spec.location.response is not None
    y, outcome_levels = response_values(d, spec.location.response, spec.family)
    _check_support(spec.family, y)

    dm_loc = build_design_matrix(d, spec.location)
    dm_scale = build_design_matrix(d, spec.scale) if spec.scale is not None else None
    if dm_loc.n_cols == 0 or (dm_scale is not None and dm_scale.n_cols == 0):
        raise DomainError("design matrix has no columns; formula is empty")

    obj = _Objective(fam, y, dm_loc.values,
                     dm_scale.values if dm_scale is not None else None)

    mu0, logsigma0 = fam.initial_values(y)
    beta0 = np.zeros(dm_loc.n_cols + (dm_scale.n_cols if dm_scale else 0))
    if dm_loc.intercept:
        beta0[0] = mu0
    if dm_scale is not None and dm_scale.intercept and logsigma0 is not None:
        beta0[dm_loc.n_cols] = logsigma0

    res = minimize(obj, beta0, jac=True, method="BFGS",
                   options={"gtol": GRAD_TOL * 1e-2, "maxiter": MAX_ITER})
    beta, f_val = res.x, res.fun
    beta, f_val, polish_iters = _newton_polish(obj, beta, f_val)
    iterations = int(res.nit) + polish_iters

    grad = obj.grad(beta)
    gnorm = float(np.max(np.abs(grad))) if np.all(np.isfinite(grad)) else np.inf
    converged = bool(np.isfinite(f_val) and gnorm <= GRAD_TOL)
    diagnostic = None
    if not converged:
        diagnostic = (f"gradient max-norm {gnorm:.3g} above tolerance "
                      f"{GRAD_TOL:g} after {iterations} iterations")

    if dm_scale is not None:
        _, sigma = obj.split(beta)
        if sigma is not None and (np.min(sigma) < SIGMA_FLOOR
                                  or np.max(sigma) > SIGMA_CEIL):
            converged = False
            diagnostic = "degenerate scale"

    if spec.family == "logistic" and converged:
        eta, _ = obj.split(beta)
        if np.max(np.abs(eta)) > ETA_SATURATION:
            # separation: the likelihood keeps improving as beta diverges,
            # so the gradient test alone would wrongly report convergence
            converged = False
            diagnostic = ("separation suspected: fitted probabilities are "
                          "numerically 0 or 1")

    labels = list(dm_loc.labels)
    if dm_scale is not None:
        labels += [f"scale:{lb}" for lb in dm_scale.labels]

    level_maps = dict(dm_loc.level_maps)
    if dm_scale is not None:
        level_maps.update(dm_scale.level_maps)

    return FittedModel(
        spec=spec,
        beta=beta,
        labels=labels,
        n_loc=dm_loc.n_cols,
        covariance=_covariance(obj, beta),
        log_lik=float(-f_val),
        converged=converged,
        iterations=iterations,
        n_obs=d.n_rows,
        data_signature=d.signature(),
        level_maps=level_maps,
        outcome_levels=outcome_levels,
        diagnostic=diagnostic,
    )


def linear_predictors(m: FittedModel, d: Dataset, beta: np.ndarray | None = None):
    """(eta, sigma) for every row of d at the fitted (or a supplied) beta."""
    if beta is None:
        beta = m.beta
    dm_loc = build_design_matrix(d, m.spec.location, level_maps=m.level_maps)
    eta = dm_loc.values @ beta[:m.n_loc]
    if m.spec.scale is None:
        return eta, None
    dm_scale = build_design_matrix(d, m.spec.scale, level_maps=m.level_maps)
    sigma = np.exp(np.clip(dm_scale.values @ beta[m.n_loc:], -300.0, 300.0))
    return eta, sigma


def coefficient_table(m: FittedModel) -> list[tuple[str, float, float]]:
    """(label, estimate, std error) rows; CLI/testing surface only."""
    if not m.converged:
        raise NotConvergedError("model did not converge",
                                {"diagnostic": m.diagnostic})
    se = np.sqrt(np.clip(np.diag(m.covariance), 0.0, None))
    return [(lb, float(b), float(s))
            for lb, b, s in zip(m.labels, m.beta, se)]
