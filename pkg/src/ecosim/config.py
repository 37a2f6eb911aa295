"""Run configuration: a single JSON document validated field by field.

Validation collects every problem into :class:`ConfigError.field_errors`
rather than stopping at the first, so callers (CLI, HTTP) can report all
of them at once. ``seed`` and ``iterations`` have no defaults; a run
cannot start without them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .archetype_model import EmissionSelector, FallbackPolicy
from .cost_model import CostTable, DacPricing
from .errors import ConfigError
from .scenario import MitigationConfig, ParameterRanges

_KNOWN_KEYS = {
    "seed",
    "iterations",
    "horizon_years",
    "sample_size",
    "reference_year",
    "emission_stages",
    "fallback_policy",
    "renovation_basis_fraction",
    "dac_price_per_tonne",
    "ranges",
    "mitigation",
    "costs",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run besides the input tables."""

    seed: int | None = None
    iterations: int | None = None
    horizon_years: float = 10.0
    sample_size: int | None = None
    reference_year: int | None = None
    emission_stages: tuple[str, ...] = ("A", "B", "C")
    fallback_policy: FallbackPolicy = FallbackPolicy.NEAREST_BY_STRUCTURE
    renovation_basis_fraction: float = 1.0
    dac_price_per_tonne: float = 500.0
    ranges: ParameterRanges = field(default_factory=ParameterRanges)
    mitigation: MitigationConfig = field(default_factory=MitigationConfig)
    costs: CostTable = field(default_factory=CostTable)

    @property
    def selector(self) -> EmissionSelector:
        return EmissionSelector.parse(self.emission_stages)

    @property
    def dac_pricing(self) -> DacPricing:
        return DacPricing(price_per_tonne=self.dac_price_per_tonne)

    def require_run_fields(self) -> None:
        """Reject a configuration that cannot start a run."""
        errors = {}
        if self.seed is None:
            errors["seed"] = "required"
        if self.iterations is None:
            errors["iterations"] = "required"
        if errors:
            raise ConfigError("configuration incomplete", errors)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "iterations": self.iterations,
            "horizon_years": self.horizon_years,
            "sample_size": self.sample_size,
            "reference_year": self.reference_year,
            "emission_stages": list(self.emission_stages),
            "fallback_policy": self.fallback_policy.value,
            "renovation_basis_fraction": self.renovation_basis_fraction,
            "dac_price_per_tonne": self.dac_price_per_tonne,
            "ranges": self.ranges.to_dict(),
            "mitigation": self.mitigation.to_dict(),
            "costs": self.costs.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "RunConfig":
        errors: dict[str, str] = {}
        for key in set(data) - _KNOWN_KEYS:
            errors[key] = "unknown key"

        def _int(key: str, *, minimum: int | None = None) -> int | None:
            value = data.get(key)
            if value is None:
                return None
            if isinstance(value, bool) or not isinstance(value, int):
                errors[key] = f"expected an integer, got {value!r}"
                return None
            if minimum is not None and value < minimum:
                errors[key] = f"must be >= {minimum}, got {value}"
                return None
            return value

        def _number(key: str, default: float, *, minimum: float | None = None) -> float:
            value = data.get(key, default)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                errors[key] = f"expected a number, got {value!r}"
                return default
            if minimum is not None and not value >= minimum:
                errors[key] = f"must be >= {minimum}, got {value}"
                return default
            return float(value)

        seed = _int("seed", minimum=0)
        iterations = _int("iterations", minimum=1)
        sample_size = _int("sample_size", minimum=1)
        reference_year = _int("reference_year")
        horizon_years = _number("horizon_years", 10.0, minimum=0.0)
        renovation_basis_fraction = _number("renovation_basis_fraction", 1.0, minimum=0.0)
        dac_price = _number("dac_price_per_tonne", 500.0)
        if "dac_price_per_tonne" not in errors and not dac_price > 0:
            errors["dac_price_per_tonne"] = f"must be > 0, got {dac_price}"
            dac_price = 500.0

        stages: tuple[str, ...] = ("A", "B", "C")
        if "emission_stages" in data:
            try:
                selector = EmissionSelector.parse(data["emission_stages"])
                stages = tuple(selector.to_list())
            except (TypeError, ValueError) as exc:
                errors["emission_stages"] = str(exc)

        fallback = FallbackPolicy.NEAREST_BY_STRUCTURE
        if "fallback_policy" in data:
            try:
                fallback = FallbackPolicy(data["fallback_policy"])
            except ValueError:
                valid = ", ".join(p.value for p in FallbackPolicy)
                errors["fallback_policy"] = f"expected one of {valid}, got {data['fallback_policy']!r}"

        ranges = ParameterRanges()
        if "ranges" in data:
            try:
                ranges = ParameterRanges.from_dict(data["ranges"])
            except (TypeError, ValueError, KeyError) as exc:
                errors["ranges"] = str(exc)

        mitigation = MitigationConfig()
        if "mitigation" in data:
            try:
                mitigation = MitigationConfig.from_dict(data["mitigation"])
            except (TypeError, ValueError, KeyError, AttributeError) as exc:
                errors["mitigation"] = str(exc)

        costs = CostTable()
        if "costs" in data:
            try:
                costs = CostTable.from_dict(data["costs"])
            except (TypeError, ValueError) as exc:
                errors["costs"] = str(exc)

        if errors:
            raise ConfigError("invalid configuration", errors)
        return cls(
            seed=seed,
            iterations=iterations,
            horizon_years=horizon_years,
            sample_size=sample_size,
            reference_year=reference_year,
            emission_stages=stages,
            fallback_policy=fallback,
            renovation_basis_fraction=renovation_basis_fraction,
            dac_price_per_tonne=dac_price,
            ranges=ranges,
            mitigation=mitigation,
            costs=costs,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read configuration: {exc}", {}) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}", {}) from exc
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object", {})
        return cls.from_dict(data)

    def with_overrides(self, **kwargs) -> "RunConfig":
        """A copy with the given fields replaced (CLI flags over file values)."""
        return replace(self, **kwargs)
