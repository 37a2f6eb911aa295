"""Policy scenario parameters: sampling ranges, mitigation levers, actions.

Each simulation iteration draws one :class:`ScenarioParameters` from a
:class:`ParameterRanges` (discrete grids for rates and proportions, uniform
intervals for city growth) and applies a fixed :class:`MitigationConfig`.
The draw order in :func:`sample_parameters` is part of the reproducibility
contract and must not be reordered.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .building_stock import AgeCategory


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    """Inclusive arithmetic grid with values rounded to cents.

    Rounding keeps grid values bit-exact across JSON round-trips.
    """
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 2) for i in range(count))


class Action(str, enum.Enum):
    """What happens to a building (or lot) during one simulated cycle."""

    KEEP = "keep"
    RENOVATE = "renovate"
    REPLACE = "replace"
    DEMOLISH = "demolish"
    NEW_CONSTRUCTION = "new_construction"


# Fixed order used by outcome records and per-action aggregates.
STOCK_ACTIONS: tuple[Action, ...] = (
    Action.KEEP,
    Action.RENOVATE,
    Action.REPLACE,
    Action.DEMOLISH,
)


@dataclass(frozen=True)
class ParameterRanges:
    """Sampling space for the seven scenario parameters.

    Grid fields hold the discrete values drawn uniformly; interval fields
    hold ``(low, high)`` bounds for continuous uniform draws. The new-age
    threshold is a constant, not a sampled quantity.
    """

    lifespan_threshold: tuple[float, ...] = field(default_factory=lambda: _grid(50.0, 80.0, 10.0))
    new_age_threshold: float = 20.0
    demolition_proportion: tuple[float, ...] = field(default_factory=lambda: _grid(0.20, 0.50, 0.10))
    renovation_emission_rate: tuple[float, ...] = field(default_factory=lambda: _grid(1.00, 1.50, 0.05))
    replacement_emission_rate: tuple[float, ...] = field(default_factory=lambda: _grid(1.00, 3.00, 0.10))
    renovation_vs_replacement: tuple[float, ...] = field(default_factory=lambda: _grid(0.10, 0.95, 0.05))
    new_buildings_proportion: tuple[float, float] = (0.01, 0.05)
    new_buildings_area_factor: tuple[float, float] = (0.80, 1.20)

    GRID_FIELDS = (
        "lifespan_threshold",
        "demolition_proportion",
        "renovation_emission_rate",
        "replacement_emission_rate",
        "renovation_vs_replacement",
    )
    INTERVAL_FIELDS = ("new_buildings_proportion", "new_buildings_area_factor")

    def __post_init__(self):
        for name in self.GRID_FIELDS:
            grid = getattr(self, name)
            if len(grid) == 0:
                raise ValueError(f"{name} grid must not be empty")
        for name in ("demolition_proportion", "renovation_vs_replacement"):
            for v in getattr(self, name):
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"{name} values must lie in [0, 1], got {v}")
        for v in self.lifespan_threshold:
            if v <= self.new_age_threshold:
                raise ValueError(
                    f"lifespan_threshold {v} must exceed new_age_threshold {self.new_age_threshold}"
                )
        for name in self.INTERVAL_FIELDS:
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"{name} bounds must satisfy low <= high, got ({lo}, {hi})")
        if self.new_buildings_proportion[0] < 0.0:
            raise ValueError("new_buildings_proportion must be >= 0")
        if self.new_buildings_area_factor[0] <= 0.0:
            raise ValueError("new_buildings_area_factor must be > 0")

    def to_dict(self) -> dict:
        out: dict = {"new_age_threshold": self.new_age_threshold}
        for name in self.GRID_FIELDS:
            out[name] = list(getattr(self, name))
        for name in self.INTERVAL_FIELDS:
            out[name] = list(getattr(self, name))
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ParameterRanges":
        known = set(cls.GRID_FIELDS) | set(cls.INTERVAL_FIELDS) | {"new_age_threshold"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown range keys: {', '.join(sorted(unknown))}")
        kwargs: dict = {}
        for name in cls.GRID_FIELDS:
            if name in data:
                kwargs[name] = tuple(float(v) for v in data[name])
        for name in cls.INTERVAL_FIELDS:
            if name in data:
                bounds = data[name]
                if len(bounds) != 2:
                    raise ValueError(f"{name} must be a [low, high] pair")
                kwargs[name] = (float(bounds[0]), float(bounds[1]))
        if "new_age_threshold" in data:
            kwargs["new_age_threshold"] = float(data["new_age_threshold"])
        return cls(**kwargs)


@dataclass(frozen=True)
class MitigationStrategy:
    """One on/off lever with a single strength setting."""

    enabled: bool = False
    factor: float = 1.0


_STRATEGY_DEFAULTS = {
    "lifespan_extension": 10.0,
    "space_optimization": 0.9,
    "wood_substitution": 0.5,
    "recycling_enhancement": 0.8,
    "prefabrication": 0.9,
    "operational_efficiency": 0.8,
}


@dataclass(frozen=True)
class MitigationConfig:
    """The six mitigation levers applied uniformly across iterations.

    * lifespan_extension: years added to the old-age boundary.
    * space_optimization: multiplier on new construction floor area.
    * wood_substitution: fraction of non-wood replacements and new builds
      re-specified with a wood structure.
    * recycling_enhancement: multiplier on renovation, replacement and new
      construction embodied emissions.
    * prefabrication: multiplier on replacement and new construction
      embodied emissions.
    * operational_efficiency: multiplier on operational intensities.
    """

    lifespan_extension: MitigationStrategy = MitigationStrategy(factor=10.0)
    space_optimization: MitigationStrategy = MitigationStrategy(factor=0.9)
    wood_substitution: MitigationStrategy = MitigationStrategy(factor=0.5)
    recycling_enhancement: MitigationStrategy = MitigationStrategy(factor=0.8)
    prefabrication: MitigationStrategy = MitigationStrategy(factor=0.9)
    operational_efficiency: MitigationStrategy = MitigationStrategy(factor=0.8)

    STRATEGY_FIELDS = tuple(_STRATEGY_DEFAULTS)

    def __post_init__(self):
        if self.lifespan_extension.factor < 0:
            raise ValueError("lifespan_extension factor must be >= 0 years")
        if not 0.0 <= self.wood_substitution.factor <= 1.0:
            raise ValueError("wood_substitution factor must lie in [0, 1]")
        for name in ("space_optimization", "recycling_enhancement", "prefabrication", "operational_efficiency"):
            if getattr(self, name).factor <= 0:
                raise ValueError(f"{name} factor must be > 0")

    # Effective values: the lever's factor when enabled, an inert value
    # (0 additive, 1 multiplicative) when disabled.

    @property
    def lifespan_extension_years(self) -> float:
        return self.lifespan_extension.factor if self.lifespan_extension.enabled else 0.0

    @property
    def space_optimization_factor(self) -> float:
        return self.space_optimization.factor if self.space_optimization.enabled else 1.0

    @property
    def wood_substitution_fraction(self) -> float:
        return self.wood_substitution.factor if self.wood_substitution.enabled else 0.0

    @property
    def recycling_factor(self) -> float:
        return self.recycling_enhancement.factor if self.recycling_enhancement.enabled else 1.0

    @property
    def prefabrication_factor(self) -> float:
        return self.prefabrication.factor if self.prefabrication.enabled else 1.0

    @property
    def operational_efficiency_factor(self) -> float:
        return self.operational_efficiency.factor if self.operational_efficiency.enabled else 1.0

    def to_dict(self) -> dict:
        return {
            name: {"enabled": getattr(self, name).enabled, "factor": getattr(self, name).factor}
            for name in self.STRATEGY_FIELDS
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MitigationConfig":
        unknown = set(data) - set(cls.STRATEGY_FIELDS)
        if unknown:
            raise ValueError(f"unknown mitigation keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        for name, entry in data.items():
            extra = set(entry) - {"enabled", "factor"}
            if extra:
                raise ValueError(f"{name}: unknown keys {', '.join(sorted(extra))}")
            kwargs[name] = MitigationStrategy(
                enabled=bool(entry.get("enabled", False)),
                factor=float(entry.get("factor", _STRATEGY_DEFAULTS[name])),
            )
        return cls(**kwargs)


@dataclass(frozen=True)
class ScenarioParameters:
    """One sampled point in the scenario space, mitigation already resolved."""

    lifespan_threshold: float
    new_age_threshold: float
    demolition_proportion: float
    renovation_emission_rate: float
    replacement_emission_rate: float
    renovation_vs_replacement: float
    new_buildings_proportion: float
    new_buildings_area_factor: float
    lifespan_extension_years: float = 0.0
    space_optimization_factor: float = 1.0
    wood_substitution_fraction: float = 0.0
    recycling_factor: float = 1.0
    prefabrication_factor: float = 1.0
    operational_efficiency_factor: float = 1.0

    SAMPLED_FIELDS = (
        "lifespan_threshold",
        "new_age_threshold",
        "demolition_proportion",
        "renovation_emission_rate",
        "replacement_emission_rate",
        "renovation_vs_replacement",
        "new_buildings_proportion",
        "new_buildings_area_factor",
    )
    MITIGATION_FIELDS = (
        "lifespan_extension_years",
        "space_optimization_factor",
        "wood_substitution_fraction",
        "recycling_factor",
        "prefabrication_factor",
        "operational_efficiency_factor",
    )
    FEATURE_FIELDS = SAMPLED_FIELDS + MITIGATION_FIELDS

    @property
    def effective_old_threshold(self) -> float:
        """Old-age boundary after lifespan extension."""
        return self.lifespan_threshold + self.lifespan_extension_years

    @property
    def effective_area_factor(self) -> float:
        """New construction area factor after space optimization."""
        return self.new_buildings_area_factor * self.space_optimization_factor

    def feature_values(self) -> dict[str, float]:
        """Ordered name -> value mapping, the regression feature layout."""
        return {name: getattr(self, name) for name in self.FEATURE_FIELDS}


def sample_parameters(
    ranges: ParameterRanges,
    mitigation: MitigationConfig,
    rng: np.random.Generator,
) -> ScenarioParameters:
    """Draw one scenario from ``ranges``.

    Grid draws come first (uniform over grid indices, in declaration
    order), then the two continuous draws. Exactly seven values are
    consumed from ``rng`` so downstream draws stay aligned across runs.
    """
    picks = {}
    for name in ParameterRanges.GRID_FIELDS:
        grid = getattr(ranges, name)
        picks[name] = grid[int(rng.integers(0, len(grid)))]
    for name in ParameterRanges.INTERVAL_FIELDS:
        lo, hi = getattr(ranges, name)
        picks[name] = float(rng.uniform(lo, hi))
    return ScenarioParameters(
        new_age_threshold=ranges.new_age_threshold,
        lifespan_extension_years=mitigation.lifespan_extension_years,
        space_optimization_factor=mitigation.space_optimization_factor,
        wood_substitution_fraction=mitigation.wood_substitution_fraction,
        recycling_factor=mitigation.recycling_factor,
        prefabrication_factor=mitigation.prefabrication_factor,
        operational_efficiency_factor=mitigation.operational_efficiency_factor,
        **picks,
    )


def assign_action(
    category: AgeCategory,
    u_demolish: float,
    u_branch: float,
    params: ScenarioParameters,
) -> Action:
    """Decide one building's fate from its age category and two uniforms.

    Only old buildings change: demolition with probability
    ``demolition_proportion``, otherwise renovation versus replacement
    split by ``renovation_vs_replacement``. Both uniforms are always
    consumed by the caller, so decisions stay coupled across parameter
    settings (common random numbers).
    """
    if category is not AgeCategory.OLD:
        return Action.KEEP
    if u_demolish < params.demolition_proportion:
        return Action.DEMOLISH
    if u_branch < params.renovation_vs_replacement:
        return Action.RENOVATE
    return Action.REPLACE
