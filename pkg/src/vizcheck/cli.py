"""Headless command line: serve the API, fit models, and write check layouts.

Engine failures exit with status 2 and an ApiError JSON object on stderr;
success exits 0. `check` output is deterministic given --seed.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .chart import ChartSpec, compose_check
from .data import bundled_datasets
from .dataset import load_csv
from .errors import EngineError
from .fit import fit_model
from .formula import describe_model, model_spec
from .predict import assemble_check
from .service import DEFAULT_DRAWS, create_app

DEFAULT_PORT = 8765


def engine_guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except EngineError as err:
            click.echo(json.dumps(err.to_payload()), err=True)
            sys.exit(2)
        except OSError as err:
            payload = {"code": "internal", "message": str(err), "detail": {}}
            click.echo(json.dumps(payload), err=True)
            sys.exit(2)
    return wrapper


def _load_dataset(path: str):
    p = Path(path)
    return load_csv(p.read_bytes(), name=p.stem)


def _json_arg(value: str):
    """Accept inline JSON or a path to a JSON file."""
    text = value.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    return json.loads(Path(value).read_text())


@click.group()
@click.version_option(package_name="vizcheck")
def main():
    """Exploratory visual modeling workbench."""


@main.command()
@click.option("--port", type=int, envvar="VIZCHECK_PORT", default=DEFAULT_PORT,
              show_default=True, help="listen port (env: VIZCHECK_PORT)")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="directory of CSVs to preload")
@click.option("--seed", type=int, default=0, show_default=True,
              help="base seed for sampling endpoints without an explicit seed")
@click.option("--bundled/--no-bundled", default=True, show_default=True,
              help="preload the bundled synthetic datasets")
def serve(port, host, data_dir, seed, bundled):
    """Run the HTTP API for the workbench UI."""
    import uvicorn

    app = create_app(base_seed=seed)
    catalog = app.state.catalog
    if bundled:
        for name, path in bundled_datasets().items():
            catalog.add_dataset(load_csv(path.read_bytes(), name=name))
    if data_dir:
        for path in sorted(Path(data_dir).glob("*.csv")):
            catalog.add_dataset(load_csv(path.read_bytes(), name=path.stem))
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--data", required=True, help="CSV file to fit against")
@click.option("--family", required=True)
@click.option("--location", required=True, help="location formula, e.g. 'y ~ x'")
@click.option("--scale", default=None, help="scale formula, e.g. '~ x'")
@click.option("--label", default=None)
@click.option("--out", required=True, help="where to write the fit JSON")
@engine_guard
def fit(data, family, location, scale, label, out):
    """Fit one model and write its full description to a JSON file."""
    d = _load_dataset(data)
    spec = model_spec(family, location, scale, label)
    m = fit_model(d, spec)
    payload = m.to_payload()
    payload["description"] = describe_model(spec)
    payload["dataset"] = d.name
    Path(out).write_text(json.dumps(payload, indent=2) + "\n")
    status = "converged" if m.converged else f"did not converge ({m.diagnostic})"
    click.echo(f"{spec.label}: {status}, log-likelihood {m.log_lik:.6f}")


@main.command()
@click.option("--data", required=True, help="CSV file to check against")
@click.option("--chart", required=True,
              help="chart spec as JSON or a JSON file: "
                   '{"x": ..., "y": ..., "row": ..., "column": ..., '
                   '"show_residuals": false}')
@click.option("--models", required=True,
              help="JSON list of model specs: "
                   '[{"family", "location", "scale", "label"}, ...]')
@click.option("--draws", type=int, default=DEFAULT_DRAWS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True,
              help="output directory for layout.json and table.csv")
@engine_guard
def check(data, chart, models, draws, seed, out):
    """Compose a model-check layout and write layout JSON plus table CSV."""
    d = _load_dataset(data)
    chart_obj = _json_arg(chart)
    spec = ChartSpec(x=chart_obj.get("x"), y=chart_obj.get("y"),
                     row=chart_obj.get("row"), column=chart_obj.get("column"),
                     show_residuals=bool(chart_obj.get("show_residuals", False)))
    fitted = []
    for entry in _json_arg(models):
        mspec = model_spec(entry["family"], entry["location"],
                           entry.get("scale"), entry.get("label"))
        fitted.append(fit_model(d, mspec))
    table = assemble_check(d, fitted, n_draws=draws, seed=seed)
    layout = compose_check(spec, table)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "layout.json").write_text(
        json.dumps(layout.to_payload(), indent=2) + "\n")
    (out_dir / "table.csv").write_text(table.to_csv())
    for m in fitted:
        status = "converged" if m.converged else \
            f"did not converge ({m.diagnostic})"
        click.echo(f"{m.spec.label}: {status}")
    click.echo(f"wrote {out_dir / 'layout.json'} and {out_dir / 'table.csv'}")


if __name__ == "__main__":
    main()
