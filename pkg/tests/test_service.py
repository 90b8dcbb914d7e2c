import json

import pytest
from fastapi.testclient import TestClient

from vizcheck.data import bundled_dataset_path
from vizcheck.service import create_app

from conftest import make_dataset


@pytest.fixture
def client():
    return TestClient(create_app(base_seed=0))


@pytest.fixture
def absences_csv():
    return bundled_dataset_path("absences").read_bytes()


def upload(client, csv_bytes, name="data"):
    r = client.post(f"/datasets?name={name}", content=csv_bytes)
    assert r.status_code == 201, r.text
    return r.json()


def small_csv():
    return make_dataset(
        x=[0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5, 9.5, 10.5, 11.5],
        y=[1.2, 1.9, 3.4, 3.9, 5.1, 6.2, 6.8, 8.1, 8.9, 10.2, 10.9, 12.3],
        g=["a", "b"] * 6,
    )


def small_csv_bytes():
    d = small_csv()
    lines = [",".join(d.column_names)]
    for i in range(d.n_rows):
        lines.append(",".join(str(c.values[i]) for c in d.columns))
    return ("\n".join(lines) + "\n").encode()


class TestDatasets:
    def test_upload_reports_schema(self, client, absences_csv):
        body = upload(client, absences_csv, name="absences")
        assert body["n_rows"] == 517
        assert len(body["schema"]) == 10
        by_name = {e["name"]: e for e in body["schema"]}
        assert by_name["g_edu"]["type"] == "discrete"
        assert set(by_name["g_edu"]["levels"]) == {
            "none", "primary", "secondary", "higher"}

    def test_empty_body_is_parse_error(self, client):
        r = client.post("/datasets")
        assert r.status_code == 400
        assert r.json()["code"] == "parse_error"

    def test_reupload_gets_fresh_id(self, client, absences_csv):
        a = upload(client, absences_csv)
        b = upload(client, absences_csv)
        assert a["id"] != b["id"]

    def test_unknown_dataset_is_404(self, client):
        r = client.get("/datasets/ds_99")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_variable"

    def test_listing_shows_uploads(self, client, absences_csv):
        upload(client, absences_csv, name="absences")
        r = client.get("/datasets")
        assert [e["name"] for e in r.json()] == ["absences"]

    def test_pipeline_creates_new_dataset(self, client):
        ds = upload(client, small_csv_bytes())
        r = client.post(f"/datasets/{ds['id']}/pipeline", json={
            "filters": [{"column": "x", "op": "gt", "mode": "include",
                         "criterion": 3.0}],
            "transforms": [{"column": "y", "kind": "log"}],
        })
        assert r.status_code == 201
        body = r.json()
        assert body["id"] != ds["id"]
        assert body["n_rows"] == 9
        assert len(body["pipeline"]) == 2

    def test_pipeline_error_maps_to_api_error(self, client):
        ds = upload(client, small_csv_bytes())
        r = client.post(f"/datasets/{ds['id']}/pipeline", json={
            "filters": [],
            "transforms": [{"column": "g", "kind": "log"}],
        })
        assert r.status_code == 422
        assert r.json()["code"] == "domain_error"


class TestFit:
    def test_fit_returns_description_sentences(self, client, absences_csv):
        ds = upload(client, absences_csv)
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal",
            "location": "absences ~ 1", "scale": "~ study_time"})
        assert r.status_code == 201
        body = r.json()
        assert body["converged"] is True
        assert body["description"] == [
            "absences is normally distributed",
            "its mean is constant",
            "its variance depends on study_time",
        ]

    def test_fit_payload_hides_numeric_summaries(self, client, absences_csv):
        ds = upload(client, absences_csv)
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "poisson",
            "location": "absences ~ study_time"})
        body = r.json()
        for hidden in ("coefficients", "covariance", "log_lik", "std_error",
                       "p_value"):
            assert hidden not in body

    def test_formula_syntax_error_is_400_with_position(self, client):
        ds = upload(client, small_csv_bytes())
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal", "location": "y ~~ x"})
        assert r.status_code == 400
        body = r.json()
        assert body["code"] == "parse_error"
        assert body["detail"]["position"] == 3

    def test_unknown_variable_is_422(self, client):
        ds = upload(client, small_csv_bytes())
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal", "location": "y ~ ghost"})
        assert r.status_code == 422
        assert r.json()["code"] == "unknown_variable"

    def test_nonconvergence_is_a_success_response(self, client):
        csv = b"y\n" + b"5.0\n" * 12
        ds = upload(client, csv)
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal", "location": "y ~ 1"})
        assert r.status_code == 201
        body = r.json()
        assert body["converged"] is False
        assert body["diagnostic"] == "degenerate scale"


class TestDrawsAndResiduals:
    def fit_model_id(self, client, ds_id):
        r = client.post("/fit", json={
            "dataset": ds_id, "family": "normal", "location": "y ~ x"})
        return r.json()["model"]

    def test_draws_table_shape_and_reproducibility(self, client):
        ds = upload(client, small_csv_bytes())
        m_id = self.fit_model_id(client, ds["id"])
        a = client.get(f"/models/{m_id}/draws?n=5&seed=3")
        b = client.get(f"/models/{m_id}/draws?n=5&seed=3")
        assert a.status_code == 200
        assert a.content == b.content
        body = a.json()
        assert len(body["records"]) == 12 * (1 + 5)

    def test_draws_on_nonconverged_model_is_422(self, client):
        ds = upload(client, b"y\n" + b"5.0\n" * 12)
        r = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal", "location": "y ~ 1"})
        m_id = r.json()["model"]
        r = client.get(f"/models/{m_id}/draws?n=5&seed=0")
        assert r.status_code == 422
        assert r.json()["code"] == "fit_not_converged"

    def test_residuals_endpoint(self, client):
        ds = upload(client, small_csv_bytes())
        m_id = self.fit_model_id(client, ds["id"])
        r = client.get(f"/models/{m_id}/residuals")
        assert r.status_code == 200
        body = r.json()
        assert len(body["residuals"]) == 12
        assert abs(sum(body["residuals"])) < 1e-6

    def test_unknown_model_is_404(self, client):
        r = client.get("/models/m_42/residuals")
        assert r.status_code == 404


class TestCheck:
    def test_zero_models_is_bare_chart(self, client):
        ds = upload(client, small_csv_bytes())
        r = client.post("/check", json={
            "dataset": ds["id"], "chart": {"x": "x", "y": "y"},
            "models": [], "n_draws": 5, "seed": 1})
        assert r.status_code == 200
        body = r.json()
        assert len(body["panels"]) == 1
        assert body["kind"] == "scatter"
        assert len(body["table"]["records"]) == 12

    def test_two_model_check_layout(self, client):
        ds = upload(client, small_csv_bytes())
        m1 = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal",
            "location": "y ~ 1", "label": "flat"}).json()["model"]
        m2 = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal",
            "location": "y ~ x", "label": "slope"}).json()["model"]
        r = client.post("/check", json={
            "dataset": ds["id"], "chart": {"x": "x", "y": "y"},
            "models": [m1, m2], "n_draws": 4, "seed": 9})
        body = r.json()
        assert [p["source"] for p in body["panels"]] == \
            ["observed", "flat", "slope"]
        domains = {json.dumps(p["scales"]["y"]) for p in body["panels"]}
        assert len(domains) == 1
        assert len(body["table"]["records"]) == 12 * (1 + 2 * 4)

    def test_check_is_reproducible_bytes(self, client):
        ds = upload(client, small_csv_bytes())
        m1 = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal",
            "location": "y ~ x"}).json()["model"]
        req = {"dataset": ds["id"], "chart": {"x": "x", "y": "y"},
               "models": [m1], "n_draws": 6, "seed": 4}
        assert client.post("/check", json=req).content == \
            client.post("/check", json=req).content

    def test_seed_defaults_to_session_base_seed(self, client):
        ds = upload(client, small_csv_bytes())
        m1 = client.post("/fit", json={
            "dataset": ds["id"], "family": "normal",
            "location": "y ~ x"}).json()["model"]
        no_seed = {"dataset": ds["id"], "chart": {"x": "x", "y": "y"},
                   "models": [m1], "n_draws": 3}
        with_base = dict(no_seed, seed=0)
        assert client.post("/check", json=no_seed).content == \
            client.post("/check", json=with_base).content


class TestMeta:
    def test_families_listing(self, client):
        r = client.get("/families")
        entries = {e["kind"]: e["has_scale"] for e in r.json()}
        assert entries == {
            "normal": True, "log_normal": True, "logit_normal": True,
            "logistic": False, "poisson": False, "negative_binomial": True}

    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}
