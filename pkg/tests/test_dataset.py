import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vizcheck import (DomainError, Filter, ParseError, Transform,
                      UnknownVariableError, UnsupportedError, apply_filter,
                      apply_pipeline, apply_steps, apply_transform, load_csv)

from conftest import make_dataset


class TestLoadCsv:
    def test_small_numeric_column_is_discrete(self):
        d = make_dataset(cyl=[4, 6, 8, 4, 6, 8, 4])
        col = d.column("cyl")
        assert col.ctype.kind == "discrete"
        assert col.ctype.levels == (4, 6, 8)

    def test_many_distinct_reals_are_continuous(self):
        rng = np.random.default_rng(0)
        d = make_dataset(v=list(rng.normal(size=517)))
        assert d.column("v").ctype.kind == "continuous"
        assert d.n_rows == 517

    def test_string_column_is_discrete_with_sorted_levels(self):
        d = make_dataset(g=["b", "a", "c", "a"])
        assert d.column("g").ctype.levels == ("a", "b", "c")

    def test_header_only_file_errors(self):
        with pytest.raises(ParseError, match="empty dataset"):
            load_csv("a,b\n")

    def test_empty_file_errors(self):
        with pytest.raises(ParseError, match="empty dataset"):
            load_csv("")

    def test_ragged_row_reports_index(self):
        with pytest.raises(ParseError, match="row 1") as exc:
            load_csv("a,b\n1,2\n3\n")
        assert exc.value.detail["row"] == 1

    def test_duplicate_header_errors(self):
        with pytest.raises(ParseError, match="duplicate"):
            load_csv("a,a\n1,2\n")

    def test_missing_values_dropped_and_counted(self):
        d = load_csv("a,b\n1,2\n,3\n4,NA\n5,6\n")
        assert d.n_rows == 2
        assert d.dropped_rows == 2

    def test_threshold_is_configurable(self):
        d = load_csv("v\n1\n2\n3\n", discrete_threshold=2)
        assert d.column("v").ctype.kind == "continuous"

    def test_schema_reports_levels_and_ranges(self):
        d = make_dataset(x=[1.5, 2.5] * 10, g=["u", "v"] * 10)
        schema = {e["name"]: e for e in d.schema()}
        assert schema["g"] == {"name": "g", "type": "discrete", "levels": ["u", "v"]}
        assert schema["x"]["type"] == "discrete"  # two distinct values


class TestFilters:
    def test_include_gt(self):
        d = make_dataset(absences=[0, 3, 0, 7])
        out = apply_filter(d, Filter("absences", "gt", "include", 0))
        assert out.column("absences").values == (3, 7)

    def test_exclude_eq_keeps_complement(self):
        d = make_dataset(g_edu=["none", "primary", "none", "higher"])
        out = apply_filter(d, Filter("g_edu", "eq", "exclude", "none"))
        assert out.column("g_edu").values == ("primary", "higher")

    def test_empty_result_is_legal(self):
        d = make_dataset(x=[1.0, 2.0, 3.5])
        out = apply_filter(d, Filter("x", "gt", "include", 10))
        assert out.n_rows == 0
        assert len(out.pipeline) == 1

    def test_unknown_column_errors(self):
        d = make_dataset(x=[1.0, 2.0, 3.3])
        with pytest.raises(UnknownVariableError):
            apply_filter(d, Filter("ghost", "gt", "include", 0))

    def test_ordering_op_on_string_column_errors(self):
        d = make_dataset(g=["a", "b", "a"])
        with pytest.raises(UnsupportedError):
            apply_filter(d, Filter("g", "lt", "include", "b"))

    def test_ordering_op_on_numeric_discrete_is_fine(self):
        d = make_dataset(cyl=[4, 6, 8, 6])
        out = apply_filter(d, Filter("cyl", "ge", "include", 6))
        assert out.column("cyl").values == (6, 8, 6)


class TestTransforms:
    def test_log_of_one_is_zero(self):
        d = make_dataset(x=[1.0, math.e, math.e**2])
        out = apply_transform(d, Transform("x", "log"))
        assert out.column("x").values[0] == pytest.approx(0.0)
        assert out.column("x").values[1] == pytest.approx(1.0)

    def test_logit_midpoint_is_zero(self):
        d = make_dataset(p=[0.5, 0.25, 0.75])
        out = apply_transform(d, Transform("p", "logit"))
        vals = out.column("p").values
        assert vals[0] == pytest.approx(0.0)
        assert vals[1] == pytest.approx(-vals[2])

    def test_log_of_zero_reports_rows(self):
        d = make_dataset(x=[1.0, 0.0, 2.0, 0.0])
        with pytest.raises(DomainError) as exc:
            apply_transform(d, Transform("x", "log"))
        assert exc.value.detail["rows"] == [1, 3]

    def test_logit_outside_unit_interval_errors(self):
        d = make_dataset(p=[0.5, 1.0])
        with pytest.raises(DomainError):
            apply_transform(d, Transform("p", "logit"))

    def test_transform_on_string_column_errors(self):
        d = make_dataset(g=["a", "b"])
        with pytest.raises(DomainError):
            apply_transform(d, Transform("g", "log"))


class TestPipeline:
    def test_filters_run_before_transforms(self):
        d = make_dataset(x=[-1.0, 1.0, math.e])
        out = apply_pipeline(d, [Filter("x", "gt", "include", 0)],
                             [Transform("x", "log")])
        assert out.column("x").values == (0.0, 1.0)

    def test_interleaved_entry_order_still_filters_first(self):
        d = make_dataset(x=[-1.0, 1.0, math.e])
        steps = [Transform("x", "log"), Filter("x", "gt", "include", 0)]
        out = apply_steps(d, steps)
        assert out.column("x").values == (0.0, 1.0)

    def test_empty_pipeline_is_identity(self, simple_xy):
        out = apply_pipeline(simple_xy, [], [])
        assert out.column("x").values == simple_xy.column("x").values
        assert out.pipeline == ()

    def test_first_failing_step_is_annotated(self):
        d = make_dataset(x=[1.0, 2.0, 0.5])
        with pytest.raises(UnknownVariableError) as exc:
            apply_pipeline(d, [Filter("x", "gt", "include", 0),
                               Filter("nope", "gt", "include", 0)], [])
        assert exc.value.detail["step"] == {"kind": "filter", "index": 1}

    def test_history_records_each_step(self):
        d = make_dataset(x=[1.0, 2.0, 0.5])
        f = Filter("x", "gt", "include", 0.6)
        t = Transform("x", "log")
        out = apply_pipeline(d, [f], [t])
        assert out.pipeline == (f, t)


class TestProperties:
    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=30),
           st.floats(-50, 50))
    def test_include_exclude_partition_rows(self, values, criterion):
        d = make_dataset(x=[float(v) for v in values])
        inc = apply_filter(d, Filter("x", "lt", "include", criterion))
        exc = apply_filter(d, Filter("x", "lt", "exclude", criterion))
        assert inc.n_rows + exc.n_rows == d.n_rows
        assert inc.n_rows <= d.n_rows

    @given(st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=30))
    def test_log_then_exp_roundtrips(self, values):
        d = make_dataset(x=[float(v) for v in values])
        out = apply_transform(d, Transform("x", "log"))
        back = np.exp(out.column("x").numeric())
        orig = d.column("x").numeric()
        assert np.allclose(back, orig, rtol=1e-12, atol=0)
