"""End-to-end run execution shared by the CLI and the HTTP service.

A run loads its tables, compiles the stock, simulates, summarizes, fits
the surrogate model, and only then writes artifacts. All output content is
produced in memory first and moved into place with atomic renames, so a
failed run leaves no partial files behind.
"""

from __future__ import annotations

import datetime
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from .archetype_model import (
    EmissionTable,
    OperationalIntensityTable,
    load_emission_table,
)
from .building_stock import Building, CodeRegistry, load_stock, sample_stock
from .config import RunConfig
from .engine import CompiledStock, IterationOutcome, ProgressCallback, compile_stock, run_simulation
from .errors import RankDeficient
from .outcomes_io import write_outcomes
from .prediction import LinearModel, fit_outcome_model
from .summary import summarize

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
OUTCOMES_FILE = "outcomes.csv"
SUMMARY_FILE = "summary.json"
MODEL_FILE = "model.json"


@dataclass(frozen=True)
class RunInputs:
    """The three tables a run consumes."""

    stock: list[Building]
    emission_table: EmissionTable
    intensity_table: OperationalIntensityTable


def load_inputs(
    stock_path: str | Path,
    emission_path: str | Path,
    intensity_path: str | Path | None = None,
    *,
    registry: CodeRegistry | None = None,
    on_error: str = "abort",
) -> RunInputs:
    """Load stock and tables; the bundled synthetic intensities by default."""
    stock = load_stock(stock_path, registry=registry, on_error=on_error)
    emission_table = load_emission_table(emission_path)
    intensity_table = (
        OperationalIntensityTable.from_csv(intensity_path)
        if intensity_path is not None
        else OperationalIntensityTable.synthetic_default()
    )
    return RunInputs(stock=stock, emission_table=emission_table, intensity_table=intensity_table)


@dataclass(frozen=True)
class RunResult:
    config: RunConfig
    outcomes: list[IterationOutcome]
    summary: dict
    model: LinearModel | None
    model_error: str | None


def execute_run(
    inputs: RunInputs,
    config: RunConfig,
    *,
    workers: int | None = None,
    progress: ProgressCallback | None = None,
) -> RunResult:
    """Run the full pipeline in memory. ``config`` must carry seed and iterations."""
    config.require_run_fields()
    reference_year = (
        config.reference_year
        if config.reference_year is not None
        else datetime.date.today().year
    )
    # Pin the year in the stored config so a rerun of it is reproducible.
    config = config.with_overrides(reference_year=reference_year)

    stock = inputs.stock
    if config.sample_size is not None:
        stock = sample_stock(stock, config.sample_size, seed=config.seed)

    compiled: CompiledStock = compile_stock(
        stock,
        inputs.emission_table,
        inputs.intensity_table,
        config.costs,
        reference_year=reference_year,
        selector=config.selector,
        fallback=config.fallback_policy,
    )
    outcomes = run_simulation(
        compiled,
        config.ranges,
        config.mitigation,
        seed=config.seed,
        iterations=config.iterations,
        horizon_years=config.horizon_years,
        renovation_basis_fraction=config.renovation_basis_fraction,
        workers=workers,
        progress=progress,
    )
    summary = summarize(outcomes, config.dac_pricing)

    # The surrogate is best-effort: tiny runs can be unfittable (fewer
    # rows than columns) without invalidating the simulation itself.
    model: LinearModel | None = None
    model_error: str | None = None
    try:
        model = fit_outcome_model(outcomes)
    except (RankDeficient, ValueError) as exc:
        model_error = str(exc)
        logger.warning("surrogate model not fitted: %s", model_error)

    return RunResult(
        config=config,
        outcomes=outcomes,
        summary=summary,
        model=model,
        model_error=model_error,
    )


def _write_atomic(path: Path, content: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def write_artifacts(result: RunResult, out_dir: str | Path) -> dict[str, Path]:
    """Write config, outcomes, summary, and model files into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model_doc = (
        result.model.to_dict()
        if result.model is not None
        else {"error": result.model_error or "model not fitted"}
    )
    artifacts = {
        CONFIG_FILE: result.config.to_json(),
        OUTCOMES_FILE: write_outcomes(result.outcomes),
        SUMMARY_FILE: json.dumps(result.summary, indent=2) + "\n",
        MODEL_FILE: json.dumps(model_doc, indent=2) + "\n",
    }
    paths = {}
    for name, content in artifacts.items():
        path = out / name
        _write_atomic(path, content)
        paths[name] = path
    return paths
