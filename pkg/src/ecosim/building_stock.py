"""Building stock ingestion, archetype coding, age classification, sampling.

The stock CSV is the contract boundary: one row per building with geometry,
vintage, occupancy, and the four material/structure attribute codes. After
``load_stock`` the stock is an immutable list of :class:`Building` that can be
shared freely across threads.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np

from .errors import (
    InvalidThresholds,
    MissingColumn,
    RowError,
    SampleTooLarge,
    UnknownCode,
)

logger = logging.getLogger(__name__)

# Logical column -> default CSV header name. "floors" may be substituted by
# "height" (feet); see load_stock.
DEFAULT_SCHEMA: dict[str, str] = {
    "id": "id",
    "lat": "lat",
    "lon": "lon",
    "area_sqft": "area_sqft",
    "floors": "floors",
    "year_built": "year_built",
    "occupancy": "occupancy",
    "activity": "activity",
    "structure": "structure",
    "foundation": "foundation",
    "wall": "wall",
    "roof": "roof",
}

FEET_PER_FLOOR = 10.0


class Occupancy(str, Enum):
    RESIDENTIAL_SINGLE_FAMILY = "residential_single_family"
    RESIDENTIAL_APARTMENT = "residential_apartment"
    COMMERCIAL = "commercial"

    @classmethod
    def parse(cls, token: str) -> "Occupancy":
        t = token.strip().lower()
        for member in cls:
            if member.value == t:
                return member
        raise ValueError(f"unknown occupancy {token!r}")


class AgeCategory(Enum):
    NEW = "new"
    MID_RANGE = "mid_range"
    OLD = "old"


@dataclass(frozen=True, slots=True)
class ArchetypeCode:
    """Four-attribute archetype code with a six-character canonical form."""

    structure: str
    foundation: str
    wall: str
    roof: str

    def __post_init__(self):
        if len(self.structure) != 1 or len(self.foundation) != 1:
            raise ValueError("structure and foundation codes are single characters")
        if len(self.wall) != 2 or len(self.roof) != 2:
            raise ValueError("wall and roof codes are two characters")

    @property
    def canonical(self) -> str:
        return self.structure + self.foundation + self.wall + self.roof

    @classmethod
    def parse(cls, text: str) -> "ArchetypeCode":
        if len(text) != 6:
            raise ValueError(f"archetype code must be 6 characters, got {text!r}")
        return cls(structure=text[0], foundation=text[1], wall=text[2:4], roof=text[4:6])

    def with_structure(self, structure: str) -> "ArchetypeCode":
        """The same code with a different structure attribute."""
        return ArchetypeCode(structure, self.foundation, self.wall, self.roof)

    def __str__(self) -> str:
        return self.canonical


@dataclass(frozen=True, slots=True)
class Building:
    id: str
    latitude: float
    longitude: float
    footprint_area: float  # ft^2
    floors: int
    year_built: int
    occupancy: Occupancy
    activity_type: str
    structure_type: str
    foundation_type: str
    wall_material: str
    roof_material: str

    @property
    def total_floor_area(self) -> float:
        """Total floor area in ft^2 (footprint times floors)."""
        return self.footprint_area * self.floors


@dataclass(frozen=True)
class CodeRegistry:
    """Registered alphabets for the four archetype attributes.

    Maps each code to a human-readable label. The default registry shipped
    with the package is a placeholder set that projects are expected to
    extend with their own registry file.
    """

    structure: Mapping[str, str]
    foundation: Mapping[str, str]
    wall: Mapping[str, str]
    roof: Mapping[str, str]

    def validate(self, attribute: str, value: str) -> str:
        alphabet: Mapping[str, str] = getattr(self, attribute)
        if value not in alphabet:
            raise UnknownCode(attribute, value)
        return value

    @classmethod
    def from_file(cls, path: str | Path) -> "CodeRegistry":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(
            structure=dict(raw["structure"]),
            foundation=dict(raw["foundation"]),
            wall=dict(raw["wall"]),
            roof=dict(raw["roof"]),
        )

    @classmethod
    def default(cls) -> "CodeRegistry":
        raw = json.loads(
            resources.files("ecosim.data").joinpath("archetype_codes.json").read_text("utf-8")
        )
        return cls(
            structure=dict(raw["structure"]),
            foundation=dict(raw["foundation"]),
            wall=dict(raw["wall"]),
            roof=dict(raw["roof"]),
        )


_DEFAULT_REGISTRY: CodeRegistry | None = None


def default_registry() -> CodeRegistry:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = CodeRegistry.default()
    return _DEFAULT_REGISTRY


def derive_archetype(b: Building, registry: CodeRegistry | None = None) -> ArchetypeCode:
    """Return the building's archetype code, validating against the registry."""
    reg = registry or default_registry()
    return ArchetypeCode(
        structure=reg.validate("structure", b.structure_type),
        foundation=reg.validate("foundation", b.foundation_type),
        wall=reg.validate("wall", b.wall_material),
        roof=reg.validate("roof", b.roof_material),
    )


def classify_age(
    b: Building,
    reference_year: int,
    new_threshold: float = 20,
    old_threshold: float = 50,
) -> AgeCategory:
    """Classify a building's age band.

    Age strictly below ``new_threshold`` is NEW, strictly above
    ``old_threshold`` is OLD, both boundaries inclusive fall to MID_RANGE.
    """
    if not 0 < new_threshold < old_threshold:
        raise InvalidThresholds(
            f"need 0 < new_threshold < old_threshold, got ({new_threshold}, {old_threshold})"
        )
    age = reference_year - b.year_built
    if age < new_threshold:
        return AgeCategory.NEW
    if age > old_threshold:
        return AgeCategory.OLD
    return AgeCategory.MID_RANGE


def _parse_row(
    row: Mapping[str, str],
    columns: Mapping[str, str],
    registry: CodeRegistry,
    reference_year: int,
    has_floors: bool,
) -> Building:
    def get(logical: str) -> str:
        value = row.get(columns[logical])
        if value is None or value.strip() == "":
            raise ValueError(f"empty value for column {columns[logical]!r}")
        return value.strip()

    footprint_area = float(get("area_sqft"))
    if not footprint_area > 0:
        raise ValueError(f"footprint_area must be > 0, got {footprint_area}")

    if has_floors:
        floors = int(get("floors"))
    else:
        height = float(get("height"))
        floors = max(1, round(height / FEET_PER_FLOOR))
    if floors < 1:
        raise ValueError(f"floors must be >= 1, got {floors}")

    year_built = int(get("year_built"))
    if year_built > reference_year:
        raise ValueError(f"year_built {year_built} is after reference year {reference_year}")

    latitude = float(get("lat"))
    longitude = float(get("lon"))
    if not -90 <= latitude <= 90:
        raise ValueError(f"latitude {latitude} outside [-90, 90]")
    if not -180 <= longitude <= 180:
        raise ValueError(f"longitude {longitude} outside [-180, 180]")

    return Building(
        id=get("id"),
        latitude=latitude,
        longitude=longitude,
        footprint_area=footprint_area,
        floors=floors,
        year_built=year_built,
        occupancy=Occupancy.parse(get("occupancy")),
        activity_type=get("activity"),
        structure_type=registry.validate("structure", get("structure")),
        foundation_type=registry.validate("foundation", get("foundation")),
        wall_material=registry.validate("wall", get("wall")),
        roof_material=registry.validate("roof", get("roof")),
    )


def load_stock(
    source: IO[str] | str | Path,
    schema: Mapping[str, str] | None = None,
    *,
    registry: CodeRegistry | None = None,
    reference_year: int = 9999,
    on_error: str = "abort",
) -> list[Building]:
    """Load a building stock CSV into a list of :class:`Building`.

    ``schema`` overrides the default logical-to-header column mapping; it may
    map ``"height"`` instead of ``"floors"``, in which case floor count is
    derived as round(height / 10 ft), floored at 1. Row order is preserved.

    ``on_error`` selects the policy for unparseable or invariant-violating
    rows: ``"abort"`` raises :class:`RowError` with the 1-based data row
    index, ``"skip"`` drops the row and logs a diagnostic.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', got {on_error!r}")
    reg = registry or default_registry()

    columns = dict(DEFAULT_SCHEMA)
    if schema:
        columns.update(schema)
    # A mapped "height" column substitutes for "floors" unless floors is mapped too.
    has_floors = True
    if schema and "height" in schema and "floors" not in schema:
        columns.pop("floors")
        has_floors = False

    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_stock(
                fh, schema, registry=reg, reference_year=reference_year, on_error=on_error
            )

    reader = csv.DictReader(source)
    header = reader.fieldnames or []
    for logical, actual in columns.items():
        if actual not in header:
            raise MissingColumn(actual)

    buildings: list[Building] = []
    for index, row in enumerate(reader, start=1):
        try:
            buildings.append(_parse_row(row, columns, reg, reference_year, has_floors))
        except (ValueError, UnknownCode) as exc:
            if on_error == "abort":
                raise RowError(index, str(exc)) from exc
            logger.warning("skipping stock row %d: %s", index, exc)
    return buildings


def export_stock(buildings: Iterable[Building], sink: IO[str] | None = None) -> str:
    """Write buildings back out in the canonical column order and formatting.

    Re-exporting a canonically formatted file reproduces it byte for byte;
    ingestion is lossless for valid rows.
    """
    out = sink or io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(DEFAULT_SCHEMA.values()))
    for b in buildings:
        writer.writerow(
            [
                b.id,
                repr(b.latitude),
                repr(b.longitude),
                repr(b.footprint_area),
                b.floors,
                b.year_built,
                b.occupancy.value,
                b.activity_type,
                b.structure_type,
                b.foundation_type,
                b.wall_material,
                b.roof_material,
            ]
        )
    return out.getvalue() if sink is None else ""


def sample_stock(stock: list[Building], n: int, seed: int) -> list[Building]:
    """Uniform sample of ``n`` buildings without replacement.

    Deterministic for a fixed (seed, stock order); ``n == len(stock)`` yields
    a full permutation.
    """
    if n <= 0:
        raise ValueError(f"sample size must be positive, got {n}")
    if n > len(stock):
        raise SampleTooLarge(n, len(stock))
    rng = np.random.default_rng(seed)
    indices = rng.choice(len(stock), size=n, replace=False)
    return [stock[i] for i in indices]
