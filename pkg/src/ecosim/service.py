"""HTTP service: run management over a plain-directory data store.

Layout under the data directory:

    datasets/<city>/stock.csv            required per city
    datasets/<city>/emissions.csv        required per city
    datasets/<city>/intensities.csv      optional
    runs/<run_id>/descriptor.json        run state, durable
    runs/<run_id>/{config.json,outcomes.csv,summary.json,model.json}
    defaults.json                        cost/DAC overrides

Runs execute on a bounded worker pool off the request path; descriptors
are updated atomically so polling never blocks on a running simulation.
A restart keeps completed runs and fails anything that was in flight.
"""

from __future__ import annotations

import json
import logging
import os
import shutil
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict
from uuid import uuid4

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse

from .config import RunConfig
from .cost_model import CostTable, DacPricing
from .errors import ConfigError
from .runner import (
    CONFIG_FILE,
    MODEL_FILE,
    OUTCOMES_FILE,
    SUMMARY_FILE,
    execute_run,
    load_inputs,
    write_artifacts,
)

logger = logging.getLogger(__name__)

DESCRIPTOR_FILE = "descriptor.json"
DEFAULTS_FILE = "defaults.json"
STOCK_FILE = "stock.csv"
EMISSIONS_FILE = "emissions.csv"
INTENSITIES_FILE = "intensities.csv"

RESULT_FILES = (CONFIG_FILE, OUTCOMES_FILE, SUMMARY_FILE, MODEL_FILE)


class RunState(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class RunRecord:
    run_id: str
    city: str
    config: RunConfig
    created_at: str
    state: RunState = RunState.QUEUED
    progress: float = 0.0
    reason: str | None = None
    future: Future | None = field(default=None, repr=False)

    def descriptor(self) -> dict:
        return {
            "run_id": self.run_id,
            "state": self.state.value,
            "progress": self.progress,
            "reason": self.reason,
            "city": self.city,
            "created_at": self.created_at,
            "config": self.config.to_dict(),
            "result_files": list(RESULT_FILES) if self.state is RunState.COMPLETED else None,
        }


def _write_atomic(path: Path, content: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


class RunManager:
    """Owns run records, their worker pool, and the on-disk layout."""

    def __init__(self, data_dir: str | Path, *, workers: int | None = None):
        self.data_dir = Path(data_dir)
        self.runs_dir = self.data_dir / "runs"
        self.datasets_dir = self.data_dir / "datasets"
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self.datasets_dir.mkdir(parents=True, exist_ok=True)
        self._pool = ThreadPoolExecutor(
            max_workers=workers or os.cpu_count() or 2, thread_name_prefix="ecosim-run"
        )
        self._lock = threading.Lock()
        self._runs: Dict[str, RunRecord] = {}
        self._defaults = self._load_defaults()
        self._recover()

    # -- defaults ---------------------------------------------------------

    def _load_defaults(self) -> dict:
        path = self.data_dir / DEFAULTS_FILE
        defaults = {"costs": CostTable().to_dict(), "dac_price_per_tonne": DacPricing().price_per_tonne}
        if path.exists():
            stored = json.loads(path.read_text(encoding="utf-8"))
            defaults["costs"].update(stored.get("costs", {}))
            defaults["dac_price_per_tonne"] = stored.get(
                "dac_price_per_tonne", defaults["dac_price_per_tonne"]
            )
        return defaults

    def _store_defaults(self) -> None:
        _write_atomic(
            self.data_dir / DEFAULTS_FILE, json.dumps(self._defaults, indent=2) + "\n"
        )

    def merge_cost_defaults(self, overrides: dict) -> dict:
        with self._lock:
            merged = CostTable.from_dict(
                overrides, base=CostTable.from_dict(self._defaults["costs"])
            )
            self._defaults["costs"] = merged.to_dict()
            self._store_defaults()
            return dict(self._defaults["costs"])

    def set_dac_default(self, price_per_tonne: float) -> float:
        pricing = DacPricing(price_per_tonne=price_per_tonne)
        with self._lock:
            self._defaults["dac_price_per_tonne"] = pricing.price_per_tonne
            self._store_defaults()
            return pricing.price_per_tonne

    def current_defaults(self) -> dict:
        with self._lock:
            return {
                "costs": dict(self._defaults["costs"]),
                "dac_price_per_tonne": self._defaults["dac_price_per_tonne"],
            }

    # -- datasets ---------------------------------------------------------

    def cities(self) -> list[str]:
        found = []
        for entry in sorted(self.datasets_dir.iterdir()) if self.datasets_dir.exists() else []:
            if (entry / STOCK_FILE).exists() and (entry / EMISSIONS_FILE).exists():
                found.append(entry.name)
        return found

    def dataset_paths(self, city: str) -> tuple[Path, Path, Path | None]:
        base = self.datasets_dir / city
        stock = base / STOCK_FILE
        emissions = base / EMISSIONS_FILE
        if not stock.exists() or not emissions.exists():
            raise KeyError(city)
        intensities = base / INTENSITIES_FILE
        return stock, emissions, intensities if intensities.exists() else None

    # -- run lifecycle ----------------------------------------------------

    def _recover(self) -> None:
        """Adopt descriptors left by a previous process."""
        for run_dir in sorted(self.runs_dir.iterdir()):
            descriptor_path = run_dir / DESCRIPTOR_FILE
            if not descriptor_path.exists():
                continue
            try:
                raw = json.loads(descriptor_path.read_text(encoding="utf-8"))
                config = RunConfig.from_dict(raw.get("config", {}))
            except (ValueError, ConfigError) as exc:
                logger.warning("ignoring unreadable descriptor %s: %s", descriptor_path, exc)
                continue
            record = RunRecord(
                run_id=raw["run_id"],
                city=raw.get("city", ""),
                config=config,
                created_at=raw.get("created_at", ""),
                state=RunState(raw["state"]),
                progress=float(raw.get("progress", 0.0)),
                reason=raw.get("reason"),
            )
            if record.state in (RunState.QUEUED, RunState.RUNNING):
                record.state = RunState.FAILED
                record.reason = "interrupted"
                self._persist(record)
            self._runs[record.run_id] = record

    def _persist(self, record: RunRecord) -> None:
        run_dir = self.runs_dir / record.run_id
        run_dir.mkdir(parents=True, exist_ok=True)
        _write_atomic(
            run_dir / DESCRIPTOR_FILE, json.dumps(record.descriptor(), indent=2) + "\n"
        )

    def submit(self, city: str, config: RunConfig) -> RunRecord:
        config.require_run_fields()
        self.dataset_paths(city)  # validated before the run is created
        record = RunRecord(
            run_id=uuid4().hex[:12],
            city=city,
            config=config,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self._runs[record.run_id] = record
            self._persist(record)
        record.future = self._pool.submit(self._execute, record.run_id)
        return record

    def _set_state(
        self,
        run_id: str,
        state: RunState,
        *,
        progress: float | None = None,
        reason: str | None = None,
    ) -> None:
        with self._lock:
            record = self._runs.get(run_id)
            if record is None:
                return
            record.state = state
            if progress is not None:
                record.progress = max(record.progress, progress)
            if reason is not None:
                record.reason = reason
            self._persist(record)

    def _execute(self, run_id: str) -> None:
        record = self.get(run_id)
        if record is None:
            return
        self._set_state(run_id, RunState.RUNNING, progress=0.0)

        def on_progress(done: int, total: int) -> None:
            self._set_state(run_id, RunState.RUNNING, progress=done / total)

        try:
            stock, emissions, intensities = self.dataset_paths(record.city)
            inputs = load_inputs(stock, emissions, intensities)
            result = execute_run(inputs, record.config, progress=on_progress)
            write_artifacts(result, self.runs_dir / run_id)
            self._set_state(run_id, RunState.COMPLETED, progress=1.0)
        except Exception as exc:  # a stranded Running descriptor helps nobody
            logger.exception("run %s failed", run_id)
            self._set_state(run_id, RunState.FAILED, reason=str(exc))

    def get(self, run_id: str) -> RunRecord | None:
        with self._lock:
            return self._runs.get(run_id)

    def delete(self, run_id: str) -> None:
        """Remove a finished run; raises if unknown or still in flight."""
        with self._lock:
            record = self._runs.get(run_id)
            if record is None:
                raise KeyError(run_id)
            if record.state is RunState.RUNNING:
                raise RuntimeError("run is executing")
            if record.state is RunState.QUEUED:
                if record.future is None or not record.future.cancel():
                    raise RuntimeError("run is executing")
                record.state = RunState.FAILED
                record.reason = "cancelled"
            del self._runs[run_id]
        shutil.rmtree(self.runs_dir / run_id, ignore_errors=True)

    def shutdown(self) -> None:
        self._pool.shutdown(wait=False, cancel_futures=True)


def _apply_service_defaults(manager: RunManager, config_body: dict) -> dict:
    """Fill cost and DAC settings from service defaults when absent."""
    merged = dict(config_body)
    defaults = manager.current_defaults()
    merged.setdefault("costs", defaults["costs"])
    merged.setdefault("dac_price_per_tonne", defaults["dac_price_per_tonne"])
    return merged


def create_app(
    data_dir: str | Path,
    *,
    workers: int | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    manager = RunManager(data_dir, workers=workers)
    app = FastAPI(title="ecosim")
    app.state.manager = manager

    def _known_run(run_id: str) -> RunRecord:
        record = manager.get(run_id)
        if record is None:
            raise HTTPException(status_code=404, detail="run not found")
        return record

    def _completed_file(run_id: str, name: str) -> Path:
        record = _known_run(run_id)
        if record.state is not RunState.COMPLETED:
            raise HTTPException(status_code=409, detail=f"run is {record.state.value}")
        path = manager.runs_dir / run_id / name
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"{name} missing")
        return path

    @app.post("/api/runs", status_code=202)
    def post_run(body: Dict[str, Any] = Body(...)):
        city = body.get("city")
        if not isinstance(city, str) or not city:
            raise HTTPException(
                status_code=400,
                detail={"message": "invalid run request", "field_errors": {"city": "required"}},
            )
        config_body = body.get("config", {})
        if not isinstance(config_body, dict):
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "invalid run request",
                    "field_errors": {"config": "expected an object"},
                },
            )
        merged = _apply_service_defaults(manager, config_body)
        try:
            config = RunConfig.from_dict(merged)
            config.require_run_fields()
        except ConfigError as exc:
            errors = dict(exc.field_errors)
            # One response should carry every problem, the absent run
            # fields included, even when parsing bailed before the check.
            for key in ("seed", "iterations"):
                if merged.get(key) is None and key not in errors:
                    errors[key] = "required"
            raise HTTPException(
                status_code=400,
                detail={"message": str(exc), "field_errors": errors},
            ) from exc
        try:
            record = manager.submit(city, config)
        except KeyError:
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "invalid run request",
                    "field_errors": {"city": f"unknown city {city!r}"},
                },
            ) from None
        return JSONResponse(
            status_code=202,
            content={"run_id": record.run_id, "status_url": f"/api/runs/{record.run_id}"},
        )

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        return _known_run(run_id).descriptor()

    @app.get("/api/runs/{run_id}/summary")
    def get_summary(run_id: str):
        path = _completed_file(run_id, SUMMARY_FILE)
        return json.loads(path.read_text(encoding="utf-8"))

    @app.get("/api/runs/{run_id}/model")
    def get_model(run_id: str):
        path = _completed_file(run_id, MODEL_FILE)
        return json.loads(path.read_text(encoding="utf-8"))

    @app.get("/api/runs/{run_id}/outcomes.csv")
    def get_outcomes(run_id: str):
        path = _completed_file(run_id, OUTCOMES_FILE)
        return FileResponse(path, media_type="text/csv", filename=f"outcomes_{run_id}.csv")

    @app.get("/api/cities")
    def get_cities():
        return {"cities": manager.cities()}

    @app.put("/api/defaults/costs")
    def put_cost_defaults(body: Dict[str, Any] = Body(...)):
        try:
            merged = manager.merge_cost_defaults(body)
        except (TypeError, ValueError) as exc:
            raise HTTPException(
                status_code=400,
                detail={"message": str(exc), "field_errors": {}},
            ) from exc
        return {"costs": merged}

    @app.put("/api/defaults/dac")
    def put_dac_default(body: Dict[str, Any] = Body(...)):
        price = body.get("price_per_tonne")
        if not isinstance(price, (int, float)) or isinstance(price, bool) or not price > 0:
            raise HTTPException(
                status_code=400,
                detail={
                    "message": "invalid DAC pricing",
                    "field_errors": {"price_per_tonne": "expected a number > 0"},
                },
            )
        return {"price_per_tonne": manager.set_dac_default(float(price))}

    @app.delete("/api/runs/{run_id}")
    def delete_run(run_id: str):
        try:
            manager.delete(run_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="run not found") from None
        except RuntimeError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        return {"deleted": run_id}

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="ecosim-serve", description="Serve the simulation API.")
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("ECOSIM_DATA_DIR", "ecosim-data"),
        help="data directory (env ECOSIM_DATA_DIR)",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument(
        "--port", type=int, default=int(os.environ.get("ECOSIM_PORT", "8000")),
        help="listen port (env ECOSIM_PORT)",
    )
    parser.add_argument("--workers", type=int, default=None, help="simulation worker threads")
    parser.add_argument(
        "--frontend-dir",
        default=os.environ.get("ECOSIM_FRONTEND_DIR"),
        help="directory with built dashboard assets to serve at /",
    )
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO)
    app = create_app(args.data_dir, workers=args.workers, frontend_dir=args.frontend_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
