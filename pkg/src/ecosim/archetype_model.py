"""Per-archetype embodied emission baselines and operational intensities.

Each archetype carries embodied carbon per standardized unit (1,000 ft^2,
single story) split into life-cycle stages A (product + construction),
B (embodied use stage: maintenance and replacement materials), and
C (end of life). Stage B here is *embodied*; operational energy carbon comes
solely from the activity-type intensity table, so the two never double count.

Scaling to a real building is linear in total floor area relative to the
standardized unit. Tables are immutable after load and safe to share across
threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Mapping

from .building_stock import ArchetypeCode, Building, derive_archetype
from .errors import (
    DuplicateArchetype,
    MalformedRow,
    MissingArchetype,
    NegativeEmission,
)

STANDARD_UNIT_SQFT = 1000.0

DEFAULT_ACTIVITY = "__default__"


class Stage(str, Enum):
    A = "A"  # product + construction
    B = "B"  # embodied use stage
    C = "C"  # end of life


ALL_STAGES = frozenset((Stage.A, Stage.B, Stage.C))


@dataclass(frozen=True)
class EmissionSelector:
    """Nonempty subset of life-cycle stages to include in embodied totals."""

    stages: frozenset[Stage] = ALL_STAGES

    def __post_init__(self):
        if not self.stages:
            raise ValueError("emission selector must include at least one stage")

    @classmethod
    def parse(cls, names: Iterable[str]) -> "EmissionSelector":
        return cls(frozenset(Stage(n.upper()) for n in names))

    def to_list(self) -> list[str]:
        return sorted(s.value for s in self.stages)


@dataclass(frozen=True)
class ArchetypeEmissionRecord:
    """Embodied kgCO2e per standardized unit, by life-cycle stage."""

    code: ArchetypeCode
    stage_emissions: Mapping[Stage, float]

    def stage(self, stage: Stage) -> float:
        return self.stage_emissions.get(stage, 0.0)

    def selected(self, selector: EmissionSelector) -> float:
        return sum(self.stage(s) for s in selector.stages)

    def total(self) -> float:
        return sum(self.stage_emissions.values())


class FallbackPolicy(str, Enum):
    """What to do when a building's archetype has no emission record."""

    STRICT = "strict"
    NEAREST_BY_STRUCTURE = "nearest_by_structure"
    GLOBAL_MEAN = "global_mean"


EmissionTable = dict[str, ArchetypeEmissionRecord]


def load_emission_table(source: IO[str] | str | Path) -> EmissionTable:
    """Load an archetype emission CSV (columns code, stage_A, stage_B, stage_C).

    One record per distinct code; duplicates, negative values, and malformed
    rows are errors.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_emission_table(fh)

    reader = csv.DictReader(source)
    header = reader.fieldnames or []
    for column in ("code", "stage_A", "stage_B", "stage_C"):
        if column not in header:
            raise MalformedRow(0, f"missing required column {column!r}")

    table: EmissionTable = {}
    for index, row in enumerate(reader, start=1):
        raw_code = (row.get("code") or "").strip()
        try:
            code = ArchetypeCode.parse(raw_code)
        except ValueError as exc:
            raise MalformedRow(index, str(exc)) from exc
        if raw_code in table:
            raise DuplicateArchetype(raw_code, index)
        stages: dict[Stage, float] = {}
        for stage in Stage:
            cell = (row.get(f"stage_{stage.value}") or "").strip()
            try:
                value = float(cell)
            except ValueError as exc:
                raise MalformedRow(index, f"stage_{stage.value}: {cell!r} is not a number") from exc
            if not value == value:  # NaN
                raise MalformedRow(index, f"stage_{stage.value}: NaN")
            if value < 0:
                raise NegativeEmission(raw_code, stage.value, value)
            stages[stage] = value
        table[raw_code] = ArchetypeEmissionRecord(code=code, stage_emissions=stages)
    return table


def resolve_record(
    code: ArchetypeCode,
    table: EmissionTable,
    fallback: FallbackPolicy = FallbackPolicy.NEAREST_BY_STRUCTURE,
) -> ArchetypeEmissionRecord:
    """Look up a code, applying the fallback policy when it is absent.

    NEAREST_BY_STRUCTURE averages records sharing the structure character,
    falling through to the global mean when none share it. An empty table
    always raises :class:`MissingArchetype`.
    """
    record = table.get(code.canonical)
    if record is not None:
        return record
    if fallback is FallbackPolicy.STRICT or not table:
        raise MissingArchetype(code.canonical)

    if fallback is FallbackPolicy.NEAREST_BY_STRUCTURE:
        peers = [r for r in table.values() if r.code.structure == code.structure]
        if not peers:
            peers = list(table.values())
    else:
        peers = list(table.values())

    stages = {
        stage: sum(r.stage(stage) for r in peers) / len(peers) for stage in Stage
    }
    return ArchetypeEmissionRecord(code=code, stage_emissions=stages)


def embodied_emission(
    b: Building,
    table: EmissionTable,
    selector: EmissionSelector = EmissionSelector(),
    fallback: FallbackPolicy = FallbackPolicy.NEAREST_BY_STRUCTURE,
) -> float:
    """Embodied kgCO2e for a building over the selected stages.

    Linear in total floor area against the 1,000 ft^2 single-story unit.
    """
    record = resolve_record(derive_archetype(b), table, fallback)
    return record.selected(selector) * b.total_floor_area / STANDARD_UNIT_SQFT


@dataclass(frozen=True)
class OperationalIntensityTable:
    """kgCO2e per ft^2 per year by activity type, with a default fallback."""

    intensities: Mapping[str, float]
    default: float

    def __post_init__(self):
        if self.default < 0:
            raise ValueError("default intensity must be >= 0")
        for activity, value in self.intensities.items():
            if value < 0:
                raise ValueError(f"intensity for {activity!r} must be >= 0")

    def intensity(self, activity_type: str) -> float:
        return self.intensities.get(activity_type, self.default)

    def scaled(self, factor: float) -> "OperationalIntensityTable":
        return OperationalIntensityTable(
            intensities={k: v * factor for k, v in self.intensities.items()},
            default=self.default * factor,
        )

    @classmethod
    def from_csv(cls, source: IO[str] | str | Path) -> "OperationalIntensityTable":
        """Load from CSV with columns activity, kgco2e_per_sqft_year.

        A row with activity ``__default__`` is required.
        """
        if isinstance(source, (str, Path)):
            with open(source, newline="", encoding="utf-8") as fh:
                return cls.from_csv(fh)
        reader = csv.DictReader(source)
        header = reader.fieldnames or []
        for column in ("activity", "kgco2e_per_sqft_year"):
            if column not in header:
                raise MalformedRow(0, f"missing required column {column!r}")
        intensities: dict[str, float] = {}
        default: float | None = None
        for index, row in enumerate(reader, start=1):
            activity = (row.get("activity") or "").strip()
            cell = (row.get("kgco2e_per_sqft_year") or "").strip()
            try:
                value = float(cell)
            except ValueError as exc:
                raise MalformedRow(index, f"{cell!r} is not a number") from exc
            if value < 0:
                raise MalformedRow(index, f"negative intensity {value}")
            if activity == DEFAULT_ACTIVITY:
                default = value
            else:
                intensities[activity] = value
        if default is None:
            raise MalformedRow(0, f"no {DEFAULT_ACTIVITY!r} row in intensity table")
        return cls(intensities=intensities, default=default)

    @classmethod
    def synthetic_default(cls) -> "OperationalIntensityTable":
        """The bundled synthetic table. Fixture values, not measured claims."""
        text = (
            resources.files("ecosim.data")
            .joinpath("operational_intensity_synthetic.csv")
            .read_text("utf-8")
        )
        return cls.from_csv(io.StringIO(text))


def operational_emission(
    b: Building,
    table: OperationalIntensityTable,
    horizon_years: float,
) -> float:
    """Operational kgCO2e over the horizon: intensity x floor area x years."""
    if horizon_years < 0:
        raise ValueError(f"horizon_years must be >= 0, got {horizon_years}")
    return table.intensity(b.activity_type) * b.total_floor_area * horizon_years
