"""Monte Carlo engine over a compiled building stock.

The stock is compiled once into flat numpy arrays (per-building emissions,
costs, ages); each iteration then draws one scenario and evaluates it with
vectorized masks. Every iteration owns a child generator spawned from the
run seed, so results are identical regardless of worker count, and the
per-iteration draw order is fixed so parameter changes reuse the same
underlying randomness (common random numbers).
"""

from __future__ import annotations

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .archetype_model import (
    STANDARD_UNIT_SQFT,
    EmissionSelector,
    EmissionTable,
    FallbackPolicy,
    OperationalIntensityTable,
    Stage,
    resolve_record,
)
from .building_stock import Building, CodeRegistry, derive_archetype
from .cost_model import CostTable, construction_cost
from .scenario import (
    Action,
    MitigationConfig,
    ParameterRanges,
    ScenarioParameters,
    sample_parameters,
)

logger = logging.getLogger(__name__)

WOOD_STRUCTURE = "W"

ProgressCallback = Callable[[int, int], None]


@dataclass(frozen=True)
class CompiledStock:
    """Per-building arrays precomputed for fast iteration evaluation.

    Emission arrays are already scaled to each building's floor area;
    ``unit_*`` arrays are per standardized unit and get rescaled to the
    sampled new-construction area. Demolition always emits the end-of-life
    stage regardless of the configured stage selection.
    """

    n: int
    age: np.ndarray  # years at the reference year
    area: np.ndarray  # total floor area, ft^2
    sel_scaled: np.ndarray  # selected-stage embodied, kgCO2e
    selwood_scaled: np.ndarray  # same, structure re-specified as wood
    eol_scaled: np.ndarray  # end-of-life stage embodied, kgCO2e
    unit_sel: np.ndarray  # selected-stage embodied per standardized unit
    unit_selwood: np.ndarray
    op_rate: np.ndarray  # kgCO2e per year
    op_per_sqft: np.ndarray  # kgCO2e per ft^2 per year
    renovate_cost: np.ndarray  # USD
    replace_cost: np.ndarray
    demolish_cost: np.ndarray
    new_cost_per_sqft: np.ndarray  # USD per ft^2
    nonwood: np.ndarray  # bool, structure is not wood
    baseline_embodied: float  # sum of sel_scaled
    mean_area: float

    def __post_init__(self):
        if self.n != len(self.age):
            raise ValueError("array lengths inconsistent with n")


def compile_stock(
    buildings: Sequence[Building],
    emission_table: EmissionTable,
    intensity_table: OperationalIntensityTable,
    costs: CostTable,
    *,
    reference_year: int,
    selector: EmissionSelector = EmissionSelector(),
    fallback: FallbackPolicy = FallbackPolicy.NEAREST_BY_STRUCTURE,
    registry: CodeRegistry | None = None,
) -> CompiledStock:
    """Resolve every building's emissions, intensity, and unit costs."""
    n = len(buildings)
    age = np.empty(n, dtype=np.float64)
    area = np.empty(n, dtype=np.float64)
    sel_scaled = np.empty(n, dtype=np.float64)
    selwood_scaled = np.empty(n, dtype=np.float64)
    eol_scaled = np.empty(n, dtype=np.float64)
    unit_sel = np.empty(n, dtype=np.float64)
    unit_selwood = np.empty(n, dtype=np.float64)
    op_rate = np.empty(n, dtype=np.float64)
    op_per_sqft = np.empty(n, dtype=np.float64)
    renovate_cost = np.empty(n, dtype=np.float64)
    replace_cost = np.empty(n, dtype=np.float64)
    demolish_cost = np.empty(n, dtype=np.float64)
    new_cost_per_sqft = np.empty(n, dtype=np.float64)
    nonwood = np.empty(n, dtype=bool)

    for i, b in enumerate(buildings):
        code = derive_archetype(b, registry)
        record = resolve_record(code, emission_table, fallback)
        wood_record = (
            record
            if code.structure == WOOD_STRUCTURE
            else resolve_record(code.with_structure(WOOD_STRUCTURE), emission_table, fallback)
        )
        scale = b.total_floor_area / STANDARD_UNIT_SQFT
        age[i] = reference_year - b.year_built
        area[i] = b.total_floor_area
        unit_sel[i] = record.selected(selector)
        unit_selwood[i] = wood_record.selected(selector)
        sel_scaled[i] = unit_sel[i] * scale
        selwood_scaled[i] = unit_selwood[i] * scale
        eol_scaled[i] = record.stage(Stage.C) * scale
        op_per_sqft[i] = intensity_table.intensity(b.activity_type)
        op_rate[i] = op_per_sqft[i] * b.total_floor_area
        renovate_cost[i] = construction_cost(Action.RENOVATE, b, costs)
        replace_cost[i] = construction_cost(Action.REPLACE, b, costs)
        demolish_cost[i] = construction_cost(Action.DEMOLISH, b, costs)
        new_cost_per_sqft[i] = costs.unit_cost(b.occupancy, Action.NEW_CONSTRUCTION)
        nonwood[i] = b.structure_type != WOOD_STRUCTURE

    return CompiledStock(
        n=n,
        age=age,
        area=area,
        sel_scaled=sel_scaled,
        selwood_scaled=selwood_scaled,
        eol_scaled=eol_scaled,
        unit_sel=unit_sel,
        unit_selwood=unit_selwood,
        op_rate=op_rate,
        op_per_sqft=op_per_sqft,
        renovate_cost=renovate_cost,
        replace_cost=replace_cost,
        demolish_cost=demolish_cost,
        new_cost_per_sqft=new_cost_per_sqft,
        nonwood=nonwood,
        baseline_embodied=float(sel_scaled.sum()),
        mean_area=float(area.mean()) if n else 0.0,
    )


@dataclass(frozen=True, slots=True)
class IterationOutcome:
    """Aggregated result of one simulated scenario."""

    iteration: int
    params: ScenarioParameters
    count_keep: int
    count_renovate: int
    count_replace: int
    count_demolish: int
    count_new_construction: int
    emissions_renovate: float
    emissions_replace: float
    emissions_demolish: float
    emissions_new_construction: float
    operational_emissions: float
    total_emissions: float
    cost_renovate: float
    cost_replace: float
    cost_demolish: float
    cost_new_construction: float
    total_cost: float
    turnover_ratio: float

    @property
    def emissions_by_action(self) -> dict[Action, float]:
        return {
            Action.KEEP: 0.0,
            Action.RENOVATE: self.emissions_renovate,
            Action.REPLACE: self.emissions_replace,
            Action.DEMOLISH: self.emissions_demolish,
            Action.NEW_CONSTRUCTION: self.emissions_new_construction,
        }

    @property
    def cost_by_action(self) -> dict[Action, float]:
        return {
            Action.KEEP: 0.0,
            Action.RENOVATE: self.cost_renovate,
            Action.REPLACE: self.cost_replace,
            Action.DEMOLISH: self.cost_demolish,
            Action.NEW_CONSTRUCTION: self.cost_new_construction,
        }

    @property
    def counts_by_action(self) -> dict[Action, int]:
        return {
            Action.KEEP: self.count_keep,
            Action.RENOVATE: self.count_renovate,
            Action.REPLACE: self.count_replace,
            Action.DEMOLISH: self.count_demolish,
            Action.NEW_CONSTRUCTION: self.count_new_construction,
        }


def simulate_iteration(
    compiled: CompiledStock,
    params: ScenarioParameters,
    rng: np.random.Generator,
    *,
    iteration: int = 0,
    horizon_years: float = 0.0,
    renovation_basis_fraction: float = 1.0,
) -> IterationOutcome:
    """Evaluate one already-sampled scenario against the compiled stock.

    Consumes, in order: one uniform vector for demolition, one for the
    renovation/replacement branch, one for wood substitution (drawn even
    when the lever is off), then the new-construction template indices and
    their wood-substitution uniforms.
    """
    n = compiled.n
    u_demolish = rng.random(n)
    u_branch = rng.random(n)
    u_wood = rng.random(n)
    n_new = math.ceil(params.new_buildings_proportion * n)
    if n_new:
        template = rng.integers(0, n, size=n_new)
    else:
        template = np.empty(0, dtype=np.int64)
    u_wood_new = rng.random(n_new)

    old = compiled.age > params.effective_old_threshold
    demolish = old & (u_demolish < params.demolition_proportion)
    survivors = old & ~demolish
    renovate = survivors & (u_branch < params.renovation_vs_replacement)
    replace = survivors & ~renovate

    recycling = params.recycling_factor
    prefab = params.prefabrication_factor

    e_demolish = float(compiled.eol_scaled[demolish].sum())
    e_renovate = (
        params.renovation_emission_rate
        * renovation_basis_fraction
        * recycling
        * float(compiled.sel_scaled[renovate].sum())
    )
    swap = replace & compiled.nonwood & (u_wood < params.wood_substitution_fraction)
    replace_basis = np.where(swap, compiled.selwood_scaled, compiled.sel_scaled)
    e_replace = (
        params.replacement_emission_rate * recycling * prefab * float(replace_basis[replace].sum())
    )

    new_area = params.effective_area_factor * compiled.mean_area
    if n_new:
        unit = np.where(
            compiled.nonwood[template] & (u_wood_new < params.wood_substitution_fraction),
            compiled.unit_selwood[template],
            compiled.unit_sel[template],
        )
        e_new = recycling * prefab * float(unit.sum()) * new_area / STANDARD_UNIT_SQFT
        op_new = float(compiled.op_per_sqft[template].sum()) * new_area
        c_new = float(compiled.new_cost_per_sqft[template].sum()) * new_area
    else:
        e_new = 0.0
        op_new = 0.0
        c_new = 0.0

    # Demolished lots stop operating; replaced ones keep their use and size.
    op_rate = float(compiled.op_rate.sum()) - float(compiled.op_rate[demolish].sum()) + op_new
    e_operational = op_rate * horizon_years * params.operational_efficiency_factor

    total = e_demolish + e_renovate + e_replace + e_new + e_operational

    c_renovate = float(compiled.renovate_cost[renovate].sum())
    c_replace = float(compiled.replace_cost[replace].sum())
    c_demolish = float(compiled.demolish_cost[demolish].sum())
    total_cost = c_renovate + c_replace + c_demolish + c_new

    count_demolish = int(demolish.sum())
    count_renovate = int(renovate.sum())
    count_replace = int(replace.sum())

    return IterationOutcome(
        iteration=iteration,
        params=params,
        count_keep=n - count_demolish - count_renovate - count_replace,
        count_renovate=count_renovate,
        count_replace=count_replace,
        count_demolish=count_demolish,
        count_new_construction=n_new,
        emissions_renovate=e_renovate,
        emissions_replace=e_replace,
        emissions_demolish=e_demolish,
        emissions_new_construction=e_new,
        operational_emissions=e_operational,
        total_emissions=total,
        cost_renovate=c_renovate,
        cost_replace=c_replace,
        cost_demolish=c_demolish,
        cost_new_construction=c_new,
        total_cost=total_cost,
        turnover_ratio=total / compiled.baseline_embodied if compiled.baseline_embodied else 0.0,
    )


def run_simulation(
    compiled: CompiledStock,
    ranges: ParameterRanges,
    mitigation: MitigationConfig,
    *,
    seed: int,
    iterations: int,
    horizon_years: float = 0.0,
    renovation_basis_fraction: float = 1.0,
    workers: int | None = None,
    progress: ProgressCallback | None = None,
) -> list[IterationOutcome]:
    """Run ``iterations`` independent scenario draws, ordered by index.

    Each iteration gets its own spawned child of ``seed``, so the result is
    byte-for-byte identical for any worker count. ``progress`` is invoked
    with (completed, total) roughly every percent, monotonically.
    """
    if iterations <= 0:
        raise ValueError(f"iterations must be positive, got {iterations}")
    children = np.random.SeedSequence(seed).spawn(iterations)
    outcomes: list[IterationOutcome | None] = [None] * iterations

    step = max(1, iterations // 100)
    done = 0
    lock = threading.Lock()

    def report_done() -> None:
        nonlocal done
        # Reporting under the lock keeps the event stream monotone.
        with lock:
            done += 1
            if progress is not None and (done % step == 0 or done == iterations):
                progress(done, iterations)

    def run_one(i: int) -> None:
        rng = np.random.default_rng(children[i])
        params = sample_parameters(ranges, mitigation, rng)
        outcomes[i] = simulate_iteration(
            compiled,
            params,
            rng,
            iteration=i,
            horizon_years=horizon_years,
            renovation_basis_fraction=renovation_basis_fraction,
        )
        report_done()

    if workers is None or workers <= 1:
        for i in range(iterations):
            run_one(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_one, range(iterations)))

    logger.debug("simulated %d iterations over %d buildings", iterations, compiled.n)
    return outcomes  # type: ignore[return-value]
