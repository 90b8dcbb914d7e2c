"""HTTP JSON API for the workbench UI and scripted clients.

Datasets and fitted models are cached server-side by id; every sampling
endpoint takes (or defaults) an explicit seed so checks are reproducible.
Engine errors map onto one ApiError payload: {code, message, detail}.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import families
from .chart import ChartSpec, compose_check
from .dataset import Dataset, Filter, Transform, apply_pipeline, load_csv
from .errors import EngineError, NotConvergedError, ParseError
from .fit import FittedModel, fit_model
from .formula import describe_model, model_spec
from .predict import assemble_check, residuals

DEFAULT_DRAWS = 50

_STATUS = {
    "parse_error": 400,
    "unknown_variable": 422,
    "domain_error": 422,
    "fit_not_converged": 422,
    "unsupported": 422,
    "internal": 500,
}


class Catalog:
    """Synchronized id -> value maps of immutable datasets and models."""

    def __init__(self, base_seed: int = 0):
        self.base_seed = base_seed
        self._lock = threading.Lock()
        self._datasets: dict[str, Dataset] = {}
        self._models: dict[str, tuple[FittedModel, str]] = {}
        self._counts = {"ds": 0, "m": 0}

    def _next_id(self, prefix: str) -> str:
        self._counts[prefix] += 1
        return f"{prefix}_{self._counts[prefix]}"

    def add_dataset(self, d: Dataset) -> str:
        with self._lock:
            ds_id = self._next_id("ds")
            self._datasets[ds_id] = d
            return ds_id

    def dataset(self, ds_id: str) -> Dataset:
        with self._lock:
            if ds_id not in self._datasets:
                raise LookupError(f"unknown dataset id '{ds_id}'")
            return self._datasets[ds_id]

    def dataset_entries(self) -> list[tuple[str, Dataset]]:
        with self._lock:
            return list(self._datasets.items())

    def add_model(self, m: FittedModel, ds_id: str) -> str:
        with self._lock:
            m_id = self._next_id("m")
            self._models[m_id] = (m, ds_id)
            return m_id

    def model(self, m_id: str) -> tuple[FittedModel, str]:
        with self._lock:
            if m_id not in self._models:
                raise LookupError(f"unknown model id '{m_id}'")
            return self._models[m_id]


class PipelineFilter(BaseModel):
    column: str
    op: str
    mode: str = "include"
    criterion: float | int | str


class PipelineTransform(BaseModel):
    column: str
    kind: str


class PipelineBody(BaseModel):
    filters: list[PipelineFilter] = Field(default_factory=list)
    transforms: list[PipelineTransform] = Field(default_factory=list)


class FitBody(BaseModel):
    dataset: str
    family: str
    location: str
    scale: Optional[str] = None
    label: Optional[str] = None


class ChartBody(BaseModel):
    x: Optional[str] = None
    y: Optional[str] = None
    row: Optional[str] = None
    column: Optional[str] = None
    show_residuals: bool = False


class CheckBody(BaseModel):
    dataset: str
    chart: ChartBody
    models: list[str] = Field(default_factory=list)
    n_draws: int = DEFAULT_DRAWS
    seed: Optional[int] = None


def _dataset_payload(ds_id: str, d: Dataset) -> dict:
    return {
        "id": ds_id,
        "name": d.name,
        "n_rows": d.n_rows,
        "dropped_rows": d.dropped_rows,
        "pipeline": [
            {"kind": "filter", "column": s.column, "op": s.op, "mode": s.mode,
             "criterion": s.criterion} if isinstance(s, Filter) else
            {"kind": "transform", "column": s.column, "transform": s.kind}
            for s in d.pipeline
        ],
        "schema": d.schema(),
    }


def create_app(base_seed: int = 0) -> FastAPI:
    app = FastAPI(title="vizcheck", version="0.1.0",
                  description="Model-check engine for exploratory visual "
                              "modeling")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    catalog = Catalog(base_seed)
    app.state.catalog = catalog

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, err: EngineError):
        return JSONResponse(status_code=_STATUS.get(err.code, 500),
                            content=err.to_payload())

    @app.exception_handler(LookupError)
    async def lookup_error_handler(_request: Request, err: LookupError):
        return JSONResponse(
            status_code=404,
            content={"code": "unknown_variable", "message": str(err),
                     "detail": {}})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/families")
    def list_families():
        return [
            {"kind": kind, "has_scale": families.has_scale(kind),
             "support": families.get_family(kind).support}
            for kind in families.FAMILY_KINDS
        ]

    @app.get("/datasets")
    def list_datasets():
        return [_dataset_payload(ds_id, d)
                for ds_id, d in catalog.dataset_entries()]

    @app.get("/datasets/{ds_id}")
    def get_dataset(ds_id: str):
        return _dataset_payload(ds_id, catalog.dataset(ds_id))

    @app.post("/datasets", status_code=201)
    async def upload_dataset(request: Request, name: str = Query("dataset")):
        body = await request.body()
        if not body:
            raise ParseError("empty dataset: request body is empty")
        d = load_csv(body, name=name)
        ds_id = catalog.add_dataset(d)
        return _dataset_payload(ds_id, d)

    @app.post("/datasets/{ds_id}/pipeline", status_code=201)
    def run_pipeline(ds_id: str, body: PipelineBody):
        d = catalog.dataset(ds_id)
        filters = [Filter(f.column, f.op, f.mode, f.criterion)
                   for f in body.filters]
        transforms = [Transform(t.column, t.kind) for t in body.transforms]
        out = apply_pipeline(d, filters, transforms)
        new_id = catalog.add_dataset(out)
        return _dataset_payload(new_id, out)

    @app.post("/fit", status_code=201)
    def fit(body: FitBody):
        d = catalog.dataset(body.dataset)
        spec = model_spec(body.family, body.location, body.scale, body.label)
        fitted = fit_model(d, spec)
        m_id = catalog.add_model(fitted, body.dataset)
        return {
            "model": m_id,
            "label": fitted.spec.label,
            "family": fitted.spec.family,
            "converged": fitted.converged,
            "diagnostic": fitted.diagnostic,
            "n_obs": fitted.n_obs,
            "description": describe_model(fitted.spec),
        }

    @app.get("/models/{m_id}/draws")
    def model_draws(m_id: str, n: int = Query(DEFAULT_DRAWS, ge=1),
                    seed: Optional[int] = Query(None, ge=0)):
        fitted, ds_id = catalog.model(m_id)
        if not fitted.converged:
            raise NotConvergedError(
                "cannot sample from a model that did not converge",
                {"model": m_id, "diagnostic": fitted.diagnostic})
        d = catalog.dataset(ds_id)
        table = assemble_check(d, [fitted], n_draws=n,
                               seed=catalog.base_seed if seed is None else seed)
        return table.to_payload()

    @app.get("/models/{m_id}/residuals")
    def model_residuals(m_id: str):
        fitted, ds_id = catalog.model(m_id)
        d = catalog.dataset(ds_id)
        r = residuals(fitted, d)
        return {"model": m_id, "label": fitted.spec.label,
                "residuals": [float(v) for v in r]}

    @app.post("/check")
    def check(body: CheckBody):
        d = catalog.dataset(body.dataset)
        models = [catalog.model(m_id)[0] for m_id in body.models]
        seed = catalog.base_seed if body.seed is None else body.seed
        table = assemble_check(d, models, n_draws=body.n_draws, seed=seed)
        spec = ChartSpec(x=body.chart.x, y=body.chart.y, row=body.chart.row,
                         column=body.chart.column,
                         show_residuals=body.chart.show_residuals)
        layout = compose_check(spec, table)
        return layout.to_payload()

    return app


__all__ = ["Catalog", "create_app", "DEFAULT_DRAWS"]
