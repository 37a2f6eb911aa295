from __future__ import annotations

import io
import json
import time

import pytest
from fastapi.testclient import TestClient

from ecosim.config import RunConfig
from ecosim.outcomes_io import read_outcomes
from ecosim.service import RunManager, RunState, create_app
from ecosim.summary import summarize

RUN_BODY = {
    "city": "demo",
    "config": {"seed": 7, "iterations": 40, "reference_year": 2026},
}


@pytest.fixture
def client(dataset_dir):
    app = create_app(dataset_dir, workers=2)
    with TestClient(app) as c:
        yield c
    app.state.manager.shutdown()


def wait_for(client: TestClient, run_id: str, timeout: float = 15.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        descriptor = client.get(f"/api/runs/{run_id}").json()
        if descriptor["state"] in ("completed", "failed"):
            return descriptor
        time.sleep(0.02)
    raise AssertionError("run did not finish in time")


def submit(client: TestClient, body=None) -> str:
    response = client.post("/api/runs", json=body or RUN_BODY)
    assert response.status_code == 202
    payload = response.json()
    assert payload["status_url"] == f"/api/runs/{payload['run_id']}"
    return payload["run_id"]


class TestLifecycle:
    def test_submit_poll_fetch(self, client):
        run_id = submit(client)
        descriptor = wait_for(client, run_id)
        assert descriptor["state"] == "completed"
        assert descriptor["progress"] == 1.0
        assert descriptor["reason"] is None
        assert set(descriptor["result_files"]) == {
            "config.json", "outcomes.csv", "summary.json", "model.json",
        }

        summary = client.get(f"/api/runs/{run_id}/summary").json()
        assert summary["iterations"] == 40

        model = client.get(f"/api/runs/{run_id}/model").json()
        assert model["target"] == "total_emissions"

        csv_response = client.get(f"/api/runs/{run_id}/outcomes.csv")
        assert csv_response.status_code == 200
        assert csv_response.headers["content-type"].startswith("text/csv")
        outcomes = read_outcomes(io.StringIO(csv_response.text))
        assert len(outcomes) == 40

    def test_served_summary_matches_served_outcomes(self, client):
        """The summary endpoint is a pure function of the outcome CSV."""
        run_id = submit(client)
        wait_for(client, run_id)
        served = client.get(f"/api/runs/{run_id}/summary").json()
        csv_text = client.get(f"/api/runs/{run_id}/outcomes.csv").text
        outcomes = read_outcomes(io.StringIO(csv_text))
        recomputed = json.loads(json.dumps(summarize(outcomes)))
        assert served == recomputed

    def test_descriptor_durable_on_disk(self, client, dataset_dir):
        run_id = submit(client)
        wait_for(client, run_id)
        descriptor_path = dataset_dir / "runs" / run_id / "descriptor.json"
        stored = json.loads(descriptor_path.read_text(encoding="utf-8"))
        assert stored["state"] == "completed"
        assert stored["config"]["seed"] == 7

    def test_delete_completed_run(self, client, dataset_dir):
        run_id = submit(client)
        wait_for(client, run_id)
        response = client.delete(f"/api/runs/{run_id}")
        assert response.status_code == 200
        assert response.json() == {"deleted": run_id}
        assert client.get(f"/api/runs/{run_id}").status_code == 404
        assert not (dataset_dir / "runs" / run_id).exists()

    def test_failed_run_reports_reason(self, client, dataset_dir):
        # Sampling beyond the stock size fails at execution time.
        body = {
            "city": "demo",
            "config": {"seed": 1, "iterations": 10, "sample_size": 9999, "reference_year": 2026},
        }
        run_id = submit(client, body)
        descriptor = wait_for(client, run_id)
        assert descriptor["state"] == "failed"
        assert descriptor["reason"]
        assert descriptor["result_files"] is None
        # Artifacts of a failed run are not served.
        assert client.get(f"/api/runs/{run_id}/summary").status_code == 409


class TestValidation:
    def test_unknown_run(self, client):
        assert client.get("/api/runs/nope").status_code == 404
        assert client.get("/api/runs/nope/summary").status_code == 404
        assert client.delete("/api/runs/nope").status_code == 404

    def test_missing_city(self, client):
        response = client.post("/api/runs", json={"config": {"seed": 1, "iterations": 2}})
        assert response.status_code == 400
        assert response.json()["detail"]["field_errors"] == {"city": "required"}

    def test_unknown_city(self, client):
        response = client.post(
            "/api/runs",
            json={"city": "atlantis", "config": {"seed": 1, "iterations": 2}},
        )
        assert response.status_code == 400
        assert "city" in response.json()["detail"]["field_errors"]

    def test_config_field_errors_reported(self, client):
        response = client.post(
            "/api/runs", json={"city": "demo", "config": {"iterations": 0}}
        )
        assert response.status_code == 400
        errors = response.json()["detail"]["field_errors"]
        assert "iterations" in errors
        assert "seed" in errors  # required but absent

    def test_config_must_be_object(self, client):
        response = client.post("/api/runs", json={"city": "demo", "config": [1]})
        assert response.status_code == 400
        assert "config" in response.json()["detail"]["field_errors"]

    def test_artifacts_unavailable_before_completion(self, client, dataset_dir):
        # A manager with no worker threads executing yet: submit against a
        # saturated single-worker pool so the second run stays queued.
        slow_body = {
            "city": "demo",
            "config": {"seed": 3, "iterations": 8000, "reference_year": 2026},
        }
        app = create_app(dataset_dir / "solo", workers=1)
        (dataset_dir / "solo" / "datasets").mkdir(parents=True, exist_ok=True)
        import shutil

        shutil.copytree(
            dataset_dir / "datasets" / "demo",
            dataset_dir / "solo" / "datasets" / "demo",
            dirs_exist_ok=True,
        )
        with TestClient(app) as solo:
            first = submit(solo, slow_body)
            second = submit(solo, slow_body)
            response = solo.get(f"/api/runs/{second}/summary")
            assert response.status_code == 409
            assert "run is" in response.json()["detail"]
            wait_for(solo, first, timeout=60.0)
            wait_for(solo, second, timeout=60.0)
        app.state.manager.shutdown()


class TestCities:
    def test_listing(self, client):
        assert client.get("/api/cities").json() == {"cities": ["demo"]}

    def test_requires_both_files(self, dataset_dir):
        partial = dataset_dir / "datasets" / "partial"
        partial.mkdir()
        (partial / "stock.csv").write_text("id\n", encoding="utf-8")
        app = create_app(dataset_dir, workers=1)
        with TestClient(app) as client:
            assert client.get("/api/cities").json() == {"cities": ["demo"]}
        app.state.manager.shutdown()


class TestDefaults:
    def test_cost_override_echoed_and_applied(self, client):
        response = client.put(
            "/api/defaults/costs", json={"commercial_renovation": 480.0}
        )
        assert response.status_code == 200
        merged = response.json()["costs"]
        assert merged["commercial_renovation"] == 480.0
        assert merged["residential_demolition"] == 15.0  # untouched default

        # New runs absorb the stored default.
        run_id = submit(client)
        descriptor = wait_for(client, run_id)
        assert descriptor["config"]["costs"]["commercial_renovation"] == 480.0

    def test_explicit_config_wins_over_defaults(self, client):
        client.put("/api/defaults/costs", json={"commercial_renovation": 480.0})
        body = {
            "city": "demo",
            "config": {
                "seed": 1,
                "iterations": 2,
                "reference_year": 2026,
                "costs": {"commercial_renovation": 475.0},
            },
        }
        run_id = submit(client, body)
        descriptor = wait_for(client, run_id)
        assert descriptor["config"]["costs"]["commercial_renovation"] == 475.0

    def test_unknown_cost_key_rejected(self, client):
        response = client.put("/api/defaults/costs", json={"penthouse_gilding": 1.0})
        assert response.status_code == 400

    def test_dac_price(self, client):
        response = client.put("/api/defaults/dac", json={"price_per_tonne": 250.0})
        assert response.json() == {"price_per_tonne": 250.0}
        run_id = submit(client)
        descriptor = wait_for(client, run_id)
        assert descriptor["config"]["dac_price_per_tonne"] == 250.0
        summary = client.get(f"/api/runs/{run_id}/summary").json()
        assert summary["dac_price_per_tonne"] == 250.0

    def test_bad_dac_price(self, client):
        for bad in ({"price_per_tonne": 0}, {"price_per_tonne": "high"}, {}):
            assert client.put("/api/defaults/dac", json=bad).status_code == 400

    def test_defaults_survive_restart(self, client, dataset_dir):
        client.put("/api/defaults/dac", json={"price_per_tonne": 123.0})
        manager = RunManager(dataset_dir, workers=1)
        try:
            assert manager.current_defaults()["dac_price_per_tonne"] == 123.0
        finally:
            manager.shutdown()


class TestRecovery:
    def test_interrupted_runs_marked_failed(self, dataset_dir):
        # Simulate a crashed process: a descriptor frozen in the running state.
        run_dir = dataset_dir / "runs" / "deadbeef0001"
        run_dir.mkdir(parents=True)
        descriptor = {
            "run_id": "deadbeef0001",
            "state": "running",
            "progress": 0.4,
            "reason": None,
            "city": "demo",
            "created_at": "2026-01-01T00:00:00+00:00",
            "config": RunConfig(seed=1, iterations=10).to_dict(),
            "result_files": None,
        }
        run_dir.joinpath("descriptor.json").write_text(
            json.dumps(descriptor), encoding="utf-8"
        )
        manager = RunManager(dataset_dir, workers=1)
        try:
            record = manager.get("deadbeef0001")
            assert record is not None
            assert record.state is RunState.FAILED
            assert record.reason == "interrupted"
            stored = json.loads(
                run_dir.joinpath("descriptor.json").read_text(encoding="utf-8")
            )
            assert stored["state"] == "failed"
        finally:
            manager.shutdown()

    def test_completed_runs_survive_restart(self, dataset_dir):
        app = create_app(dataset_dir, workers=2)
        with TestClient(app) as client:
            run_id = submit(client)
            wait_for(client, run_id)
        app.state.manager.shutdown()

        revived = create_app(dataset_dir, workers=1)
        with TestClient(revived) as client:
            descriptor = client.get(f"/api/runs/{run_id}").json()
            assert descriptor["state"] == "completed"
            summary = client.get(f"/api/runs/{run_id}/summary")
            assert summary.status_code == 200
        revived.state.manager.shutdown()
