import json

import numpy as np
import pytest

from vizcheck import (ChartSpec, DomainError, UnknownVariableError,
                      UnsupportedError, assemble_check, compose_check,
                      default_chart, facet_grid, fit_model, model_spec)
from vizcheck.dataset import ColumnType

from conftest import make_dataset

CONT = ColumnType("continuous")
DISC = ColumnType("discrete", ("a", "b"))


class TestDefaultChart:
    def test_two_continuous_is_scatter(self):
        assert default_chart(CONT, CONT) == "scatter"

    def test_lone_discrete_is_bar(self):
        assert default_chart(DISC, None) == "bar"
        assert default_chart(None, DISC) == "bar"

    def test_lone_continuous_is_strip(self):
        assert default_chart(CONT, None) == "strip"

    def test_two_discrete_is_heatmap(self):
        assert default_chart(DISC, DISC) == "heatmap"

    def test_mixed_pair_is_strip_either_way(self):
        assert default_chart(CONT, DISC) == "strip"
        assert default_chart(DISC, CONT) == "strip"

    def test_no_encodings_errors(self):
        with pytest.raises(DomainError):
            default_chart(None, None)


class TestFacetGrid:
    def test_four_level_row_facet(self):
        d = make_dataset(g_edu=["none", "primary", "secondary", "higher"] * 3,
                         y=list(np.arange(12.0)))
        grid = facet_grid(ChartSpec(x="y", row="g_edu"), d)
        assert grid.shape == (4, 1)
        assert grid.row_levels == ("higher", "none", "primary", "secondary")

    def test_no_facets_is_single_cell(self, simple_xy):
        grid = facet_grid(ChartSpec(x="x", y="y"), simple_xy)
        assert grid.shape == (1, 1)
        assert grid.cells[0].indices == tuple(range(simple_xy.n_rows))

    def test_row_by_column_cross_product_row_major(self):
        d = make_dataset(r=["u", "v"] * 6, c=["p", "q", "s"] * 4,
                         y=list(np.arange(12.0)))
        grid = facet_grid(ChartSpec(x="y", row="r", column="c"), d)
        assert grid.shape == (2, 3)
        assert [(cell.row_level, cell.column_level) for cell in grid.cells] == [
            ("u", "p"), ("u", "q"), ("u", "s"),
            ("v", "p"), ("v", "q"), ("v", "s")]

    def test_cell_rows_sum_to_dataset_rows(self):
        d = make_dataset(r=["u", "v", "u"], c=["p", "p", "q"],
                         y=[1.0, 2.0, 3.5])
        grid = facet_grid(ChartSpec(x="y", row="r", column="c"), d)
        assert sum(len(cell.indices) for cell in grid.cells) == d.n_rows

    def test_facet_on_continuous_errors(self, simple_xy):
        with pytest.raises(UnsupportedError):
            facet_grid(ChartSpec(x="x", row="y"), simple_xy)


def layout_for(d, specs, chart, n_draws=5, seed=0):
    models = [fit_model(d, s) for s in specs]
    table = assemble_check(d, models, n_draws=n_draws, seed=seed)
    return compose_check(chart, table)


class TestComposeCheck:
    def test_three_panels_share_outcome_domain(self, simple_xy):
        layout = layout_for(
            simple_xy,
            [model_spec("normal", "y ~ 1", label="m1"),
             model_spec("normal", "y ~ x", label="m2")],
            ChartSpec(x="x", y="y"))
        payload = layout.to_payload()
        assert [p["source"] for p in payload["panels"]] == \
            ["observed", "m1", "m2"]
        domains = [json.dumps(p["scales"]["y"]) for p in payload["panels"]]
        assert len(set(domains)) == 1
        assert payload["outcome_axis"] == "y"

    def test_zero_models_is_the_plain_chart(self, simple_xy):
        layout = layout_for(simple_xy, [], ChartSpec(x="x", y="y"))
        payload = layout.to_payload()
        assert len(payload["panels"]) == 1
        assert payload["panels"][0]["source"] == "observed"
        assert payload["kind"] == "scatter"
        x = simple_xy.column("x").numeric()
        pad = 0.05 * (x.max() - x.min())
        lo, hi = payload["scales"]["x"]["domain"]
        assert lo == pytest.approx(x.min() - pad)
        assert hi == pytest.approx(x.max() + pad)

    def test_shared_domain_covers_predicted_extremes(self, simple_xy):
        layout = layout_for(
            simple_xy, [model_spec("normal", "y ~ x", label="m")],
            ChartSpec(x="x", y="y"), n_draws=30)
        table = layout.table
        all_y = [float(v) for v in table.data["y"]]
        lo, hi = layout.scales["y"].domain
        assert lo <= min(all_y) and hi >= max(all_y)

    def test_predicted_panels_carry_animation_field(self, simple_xy):
        layout = layout_for(simple_xy,
                            [model_spec("normal", "y ~ x", label="m")],
                            ChartSpec(x="x", y="y"), n_draws=4)
        panel = layout.panels[1]
        assert panel.animation_field == "draw"
        assert panel.n_draws == 4
        assert layout.panels[0].animation_field is None

    def test_count_predictions_on_discrete_outcome_extend_levels(self):
        rng = np.random.default_rng(3)
        counts = rng.poisson(2, size=50)  # few distinct values: discrete
        d = make_dataset(y=list(counts), x=list(rng.normal(size=50)))
        assert d.column("y").ctype.is_discrete
        layout = layout_for(d, [model_spec("poisson", "y ~ x", label="m")],
                            ChartSpec(x="x", y="y"), n_draws=20)
        levels = layout.scales["y"].levels
        observed_levels = d.column("y").ctype.levels
        assert set(observed_levels) <= set(levels)
        assert levels == tuple(sorted(levels))

    def test_residual_view_replaces_outcome_axis(self, simple_xy):
        layout = layout_for(
            simple_xy, [model_spec("normal", "y ~ x", label="m")],
            ChartSpec(x="x", y="y", show_residuals=True))
        payload = layout.to_payload()
        assert payload["encodings"]["y"]["field"] == "residual"
        assert payload["zero_reference"] is True
        assert "residual" in payload["table"]["columns"]
        rec = payload["table"]["records"][0]
        assert rec["residual"] == pytest.approx(
            rec["y"] - (layout.table.models[0].means[rec["row"]]))

    def test_residual_view_needs_a_converged_model(self, simple_xy):
        table = assemble_check(simple_xy, [], n_draws=5, seed=0)
        with pytest.raises(DomainError, match="residual view"):
            compose_check(ChartSpec(x="x", y="y", show_residuals=True), table)

    def test_chart_variable_missing_from_table_errors(self, simple_xy):
        table = assemble_check(simple_xy, [], n_draws=5, seed=0)
        with pytest.raises(UnknownVariableError):
            compose_check(ChartSpec(x="nope", y="y"), table)

    def test_facet_metadata_lists_levels(self, simple_xy):
        layout = layout_for(simple_xy, [], ChartSpec(x="x", y="y", row="g"))
        assert layout.facet["row"] == {"field": "g", "levels": ["a", "b"]}
        assert layout.facet["column"] is None

    def test_nonconverged_model_panel_is_flagged(self, simple_xy):
        import dataclasses
        good = fit_model(simple_xy, model_spec("normal", "y ~ x", label="ok"))
        bad_data = make_dataset(y=[5.0] * simple_xy.n_rows,
                                x=list(simple_xy.column("x").values))
        bad = fit_model(bad_data, model_spec("normal", "y ~ 1", label="bad"))
        bad = dataclasses.replace(bad, data_signature=simple_xy.signature())
        table = assemble_check(simple_xy, [good, bad], n_draws=3, seed=0)
        layout = compose_check(ChartSpec(x="x", y="y"), table)
        flagged = next(p for p in layout.panels if p.source == "bad")
        assert flagged.converged is False
        assert flagged.n_draws == 0

    def test_discrete_outcome_heatmap_layout(self):
        d = make_dataset(a=["u", "v"] * 10, b=["p", "q", "p", "s"] * 5)
        layout = layout_for(d, [], ChartSpec(x="a", y="b"))
        assert layout.kind == "heatmap"
        assert layout.scales["x"].levels == ("u", "v")
