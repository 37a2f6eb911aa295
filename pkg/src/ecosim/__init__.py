"""Bottom-up building-stock emission scenario simulator.

Estimates city-scale embodied and operational carbon alongside
construction and abatement costs by classifying buildings into
archetypes, sampling policy scenarios Monte Carlo style, and fitting a
linear surrogate over the outcomes.
"""

from __future__ import annotations

from .archetype_model import (
    EmissionSelector,
    FallbackPolicy,
    OperationalIntensityTable,
    Stage,
    embodied_emission,
    load_emission_table,
    operational_emission,
)
from .building_stock import (
    AgeCategory,
    ArchetypeCode,
    Building,
    CodeRegistry,
    Occupancy,
    classify_age,
    derive_archetype,
    export_stock,
    load_stock,
    sample_stock,
)
from .config import RunConfig
from .cost_model import CostTable, DacPricing, construction_cost, dac_cost
from .engine import (
    CompiledStock,
    IterationOutcome,
    compile_stock,
    run_simulation,
    simulate_iteration,
)
from .errors import ConfigError, DataError, EcosimError, RankDeficient
from .outcomes_io import OUTCOME_COLUMNS, read_outcomes, write_outcomes
from .prediction import (
    DesignMatrix,
    LinearModel,
    build_design_matrix,
    fit_ols,
    fit_outcome_model,
)
from .runner import RunInputs, RunResult, execute_run, load_inputs, write_artifacts
from .scenario import (
    Action,
    MitigationConfig,
    MitigationStrategy,
    ParameterRanges,
    ScenarioParameters,
    assign_action,
    sample_parameters,
)
from .summary import summarize

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AgeCategory",
    "ArchetypeCode",
    "Building",
    "CodeRegistry",
    "CompiledStock",
    "ConfigError",
    "CostTable",
    "DacPricing",
    "DataError",
    "DesignMatrix",
    "EcosimError",
    "EmissionSelector",
    "FallbackPolicy",
    "IterationOutcome",
    "LinearModel",
    "MitigationConfig",
    "MitigationStrategy",
    "OUTCOME_COLUMNS",
    "Occupancy",
    "OperationalIntensityTable",
    "ParameterRanges",
    "RankDeficient",
    "RunConfig",
    "RunInputs",
    "RunResult",
    "ScenarioParameters",
    "Stage",
    "assign_action",
    "build_design_matrix",
    "classify_age",
    "compile_stock",
    "construction_cost",
    "dac_cost",
    "derive_archetype",
    "embodied_emission",
    "execute_run",
    "export_stock",
    "fit_ols",
    "fit_outcome_model",
    "load_emission_table",
    "load_inputs",
    "load_stock",
    "operational_emission",
    "read_outcomes",
    "run_simulation",
    "sample_parameters",
    "sample_stock",
    "simulate_iteration",
    "summarize",
    "write_artifacts",
    "write_outcomes",
]
