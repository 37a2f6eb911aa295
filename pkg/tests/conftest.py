from __future__ import annotations

import csv
import io
from pathlib import Path

import pytest

from ecosim.archetype_model import ArchetypeEmissionRecord, OperationalIntensityTable, Stage
from ecosim.building_stock import ArchetypeCode, Building, Occupancy

STOCK_HEADER = [
    "id",
    "lat",
    "lon",
    "area_sqft",
    "floors",
    "year_built",
    "occupancy",
    "activity",
    "structure",
    "foundation",
    "wall",
    "roof",
]


def make_building(
    id: str = "b1",
    *,
    footprint_area: float = 1000.0,
    floors: int = 1,
    year_built: int = 1950,
    occupancy: Occupancy = Occupancy.COMMERCIAL,
    activity_type: str = "office",
    structure_type: str = "W",
    foundation_type: str = "B",
    wall_material: str = "W2",
    roof_material: str = "R1",
    latitude: float = 39.77,
    longitude: float = -86.16,
) -> Building:
    return Building(
        id=id,
        latitude=latitude,
        longitude=longitude,
        footprint_area=footprint_area,
        floors=floors,
        year_built=year_built,
        occupancy=occupancy,
        activity_type=activity_type,
        structure_type=structure_type,
        foundation_type=foundation_type,
        wall_material=wall_material,
        roof_material=roof_material,
    )


def make_record(code: str, a: float, b: float, c: float) -> ArchetypeEmissionRecord:
    return ArchetypeEmissionRecord(
        code=ArchetypeCode.parse(code),
        stage_emissions={Stage.A: a, Stage.B: b, Stage.C: c},
    )


@pytest.fixture
def emission_table():
    """Wood and steel variants of one wall/roof combination."""
    return {
        "WBW2R1": make_record("WBW2R1", 30000.0, 5000.0, 2000.0),
        "SBW2R1": make_record("SBW2R1", 60000.0, 8000.0, 4000.0),
        "MSW1R2": make_record("MSW1R2", 45000.0, 6000.0, 3000.0),
        "WSW1R2": make_record("WSW1R2", 28000.0, 4500.0, 1800.0),
    }


@pytest.fixture
def intensity_table():
    return OperationalIntensityTable(
        intensities={"office": 9.0, "residential": 6.0}, default=8.0
    )


@pytest.fixture
def mixed_stock():
    """Nine buildings spanning ages, occupancies, and structures."""
    return [
        make_building("old-w", year_built=1950, structure_type="W"),
        make_building(
            "old-s",
            year_built=1940,
            footprint_area=2000.0,
            structure_type="S",
            occupancy=Occupancy.RESIDENTIAL_APARTMENT,
            activity_type="residential",
        ),
        make_building(
            "old-m",
            year_built=1960,
            floors=2,
            structure_type="M",
            foundation_type="S",
            wall_material="W1",
            roof_material="R2",
            occupancy=Occupancy.RESIDENTIAL_SINGLE_FAMILY,
            activity_type="residential",
        ),
        make_building("mid-1", year_built=1990),
        make_building("mid-2", year_built=2000, footprint_area=1500.0),
        make_building(
            "mid-3",
            year_built=1985,
            structure_type="S",
            occupancy=Occupancy.RESIDENTIAL_APARTMENT,
            activity_type="residential",
        ),
        make_building("new-1", year_built=2015),
        make_building("new-2", year_built=2020, footprint_area=800.0),
        make_building(
            "new-3",
            year_built=2018,
            structure_type="M",
            foundation_type="S",
            wall_material="W1",
            roof_material="R2",
        ),
    ]


def building_row(b: Building) -> list:
    return [
        b.id,
        b.latitude,
        b.longitude,
        b.footprint_area,
        b.floors,
        b.year_built,
        b.occupancy.value,
        b.activity_type,
        b.structure_type,
        b.foundation_type,
        b.wall_material,
        b.roof_material,
    ]


def stock_csv_text(buildings) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STOCK_HEADER)
    for b in buildings:
        writer.writerow(building_row(b))
    return out.getvalue()


def emission_csv_text(table) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["code", "stage_A", "stage_B", "stage_C"])
    for code, record in table.items():
        writer.writerow(
            [code, record.stage(Stage.A), record.stage(Stage.B), record.stage(Stage.C)]
        )
    return out.getvalue()


@pytest.fixture
def stock_file(tmp_path: Path, mixed_stock) -> Path:
    path = tmp_path / "stock.csv"
    path.write_text(stock_csv_text(mixed_stock), encoding="utf-8")
    return path


@pytest.fixture
def emission_file(tmp_path: Path, emission_table) -> Path:
    path = tmp_path / "emissions.csv"
    path.write_text(emission_csv_text(emission_table), encoding="utf-8")
    return path


@pytest.fixture
def dataset_dir(tmp_path: Path, mixed_stock, emission_table) -> Path:
    """A service data directory with one city dataset named 'demo'."""
    data_dir = tmp_path / "data"
    city = data_dir / "datasets" / "demo"
    city.mkdir(parents=True)
    (city / "stock.csv").write_text(stock_csv_text(mixed_stock), encoding="utf-8")
    (city / "emissions.csv").write_text(emission_csv_text(emission_table), encoding="utf-8")
    return data_dir
