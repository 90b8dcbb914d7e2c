"""vizcheck: an exploratory visual modeling workbench engine.

Load tabular data, specify location/scale regression models in formula
notation, and compose model-check layouts that juxtapose observed data with
sampled predictive distributions on a shared scale.
"""

from .chart import ChartSpec, CheckLayout, compose_check, default_chart, facet_grid
from .dataset import (Dataset, Filter, Transform, apply_filter, apply_pipeline,
                      apply_steps, apply_transform, load_csv)
from .errors import (DomainError, EngineError, NotConvergedError, ParseError,
                     UnknownVariableError, UnsupportedError)
from .families import (FAMILY_KINDS, family_mean, get_family, has_scale,
                       location_inverse_link, location_link, log_likelihood,
                       sample_outcome)
from .fit import (DesignMatrix, FittedModel, build_design_matrix,
                  coefficient_table, fit_model)
from .formula import (FormulaAST, ModelSpec, Term, describe_model, model_spec,
                      parse_formula, unparse, validate_spec)
from .predict import (ParamDraw, PredictiveTable, assemble_check,
                      draw_parameters, predictive_dataset, residuals)

__version__ = "0.1.0"

__all__ = [
    "ChartSpec", "CheckLayout", "compose_check", "default_chart", "facet_grid",
    "Dataset", "Filter", "Transform", "apply_filter", "apply_pipeline",
    "apply_steps", "apply_transform", "load_csv",
    "DomainError", "EngineError", "NotConvergedError", "ParseError",
    "UnknownVariableError", "UnsupportedError",
    "FAMILY_KINDS", "family_mean", "get_family", "has_scale",
    "location_inverse_link", "location_link", "log_likelihood",
    "sample_outcome",
    "DesignMatrix", "FittedModel", "build_design_matrix", "coefficient_table",
    "fit_model",
    "FormulaAST", "ModelSpec", "Term", "describe_model", "model_spec",
    "parse_formula", "unparse", "validate_spec",
    "ParamDraw", "PredictiveTable", "assemble_check", "draw_parameters",
    "predictive_dataset", "residuals",
    "__version__",
]
