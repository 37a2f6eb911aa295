"""Construction costs per action and carbon abatement (DAC) pricing.

Unit costs are USD per ft^2 of total floor area, matching the emission
scaling basis. Replacement is billed as demolition plus new construction.
All functions are pure and exactly linear in area and emissions.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict, replace
from typing import Mapping

from .building_stock import Building, Occupancy
from .errors import MissingCostEntry
from .scenario import Action

KG_PER_TONNE = 1000.0


@dataclass(frozen=True)
class CostTable:
    """Default USD/ft^2 unit costs, all user-overridable."""

    commercial_renovation: float = 450.0
    commercial_new_construction: float = 562.0
    commercial_demolition: float = 10.0
    residential_apartment_new_construction: float = 508.0
    residential_single_family_new_construction: float = 200.0
    residential_apartment_renovation: float = 400.0
    residential_single_family_renovation: float = 100.0
    residential_demolition: float = 15.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"unit cost {name} must be >= 0, got {value}")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, overrides: Mapping[str, float], base: "CostTable | None" = None) -> "CostTable":
        """Merge overrides onto ``base`` (or the defaults); unknown keys raise."""
        table = base or cls()
        known = set(asdict(table))
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown cost keys: {', '.join(sorted(unknown))}")
        return replace(table, **{k: float(v) for k, v in overrides.items()})

    def unit_cost(self, occupancy: Occupancy, action: Action) -> float:
        """USD/ft^2 for a single-component action (renovation, demolition, new)."""
        commercial = occupancy is Occupancy.COMMERCIAL
        apartment = occupancy is Occupancy.RESIDENTIAL_APARTMENT
        if action is Action.RENOVATE:
            if commercial:
                return self.commercial_renovation
            return self.residential_apartment_renovation if apartment else self.residential_single_family_renovation
        if action is Action.DEMOLISH:
            return self.commercial_demolition if commercial else self.residential_demolition
        if action is Action.NEW_CONSTRUCTION:
            if commercial:
                return self.commercial_new_construction
            return (
                self.residential_apartment_new_construction
                if apartment
                else self.residential_single_family_new_construction
            )
        raise MissingCostEntry(occupancy.value, action.value)


@dataclass(frozen=True)
class DacPricing:
    """Direct air capture price in USD per tonne CO2e.

    The default is an adjustable fixture, not a literature claim.
    """

    price_per_tonne: float = 500.0

    def __post_init__(self):
        if not self.price_per_tonne > 0:
            raise ValueError(f"DAC price must be > 0, got {self.price_per_tonne}")


def construction_cost(action: Action, b: Building, table: CostTable) -> float:
    """USD cost of applying ``action`` to building ``b``.

    Keep costs nothing; Replace is demolition plus new construction.
    """
    if action is Action.KEEP:
        return 0.0
    area = b.total_floor_area
    if action is Action.REPLACE:
        return (
            table.unit_cost(b.occupancy, Action.DEMOLISH)
            + table.unit_cost(b.occupancy, Action.NEW_CONSTRUCTION)
        ) * area
    return table.unit_cost(b.occupancy, action) * area


def dac_cost(emissions_kg: float, pricing: DacPricing) -> float:
    """USD to capture ``emissions_kg`` kgCO2e at the configured price."""
    if emissions_kg < 0:
        raise ValueError(f"emissions must be >= 0, got {emissions_kg}")
    return emissions_kg / KG_PER_TONNE * pricing.price_per_tonne
