from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecosim.archetype_model import (
    STANDARD_UNIT_SQFT,
    ArchetypeEmissionRecord,
    EmissionSelector,
    FallbackPolicy,
    OperationalIntensityTable,
    Stage,
    embodied_emission,
    load_emission_table,
    operational_emission,
    resolve_record,
)
from ecosim.building_stock import ArchetypeCode
from ecosim.errors import (
    DuplicateArchetype,
    MalformedRow,
    MissingArchetype,
    NegativeEmission,
)

from conftest import emission_csv_text, make_building, make_record


class TestSelector:
    def test_default_selects_all_stages(self):
        record = make_record("WBW2R1", 10.0, 20.0, 30.0)
        assert record.selected(EmissionSelector()) == 60.0

    def test_parse_subset(self):
        selector = EmissionSelector.parse(["A", "C"])
        record = make_record("WBW2R1", 10.0, 20.0, 30.0)
        assert record.selected(selector) == 40.0
        assert selector.to_list() == ["A", "C"]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            EmissionSelector.parse([])

    def test_unknown_stage_rejected(self):
        with pytest.raises(ValueError):
            EmissionSelector.parse(["A", "D"])

    @given(
        a=st.floats(min_value=0, max_value=1e6),
        b=st.floats(min_value=0, max_value=1e6),
        c=st.floats(min_value=0, max_value=1e6),
    )
    def test_stage_additivity(self, a, b, c):
        # Selected subsets always sum to the full record total.
        record = make_record("WBW2R1", a, b, c)
        parts = sum(
            record.selected(EmissionSelector.parse([s])) for s in ("A", "B", "C")
        )
        assert parts == pytest.approx(record.total(), rel=1e-12, abs=1e-9)


class TestLoadEmissionTable:
    def test_load(self, emission_table):
        text = emission_csv_text(emission_table)
        loaded = load_emission_table(io.StringIO(text))
        assert set(loaded) == set(emission_table)
        assert loaded["WBW2R1"].stage(Stage.A) == 30000.0

    def test_missing_column(self):
        with pytest.raises(MalformedRow):
            load_emission_table(io.StringIO("code,stage_A,stage_B\nWBW2R1,1,2\n"))

    def test_duplicate(self):
        text = "code,stage_A,stage_B,stage_C\nWBW2R1,1,2,3\nWBW2R1,4,5,6\n"
        with pytest.raises(DuplicateArchetype) as excinfo:
            load_emission_table(io.StringIO(text))
        assert excinfo.value.row == 2

    def test_negative(self):
        text = "code,stage_A,stage_B,stage_C\nWBW2R1,1,-2,3\n"
        with pytest.raises(NegativeEmission):
            load_emission_table(io.StringIO(text))

    def test_malformed_number(self):
        text = "code,stage_A,stage_B,stage_C\nWBW2R1,1,x,3\n"
        with pytest.raises(MalformedRow):
            load_emission_table(io.StringIO(text))

    def test_nan_rejected(self):
        text = "code,stage_A,stage_B,stage_C\nWBW2R1,1,nan,3\n"
        with pytest.raises(MalformedRow):
            load_emission_table(io.StringIO(text))

    def test_bad_code(self):
        text = "code,stage_A,stage_B,stage_C\nWBW2,1,2,3\n"
        with pytest.raises(MalformedRow):
            load_emission_table(io.StringIO(text))


class TestFallback:
    def test_exact_hit(self, emission_table):
        record = resolve_record(ArchetypeCode.parse("WBW2R1"), emission_table)
        assert record.stage(Stage.A) == 30000.0

    def test_strict_raises(self, emission_table):
        with pytest.raises(MissingArchetype):
            resolve_record(
                ArchetypeCode.parse("WCW9R9"), emission_table, FallbackPolicy.STRICT
            )

    def test_nearest_by_structure_averages_peers(self, emission_table):
        # Two W records exist: (30000, 5000, 2000) and (28000, 4500, 1800).
        record = resolve_record(
            ArchetypeCode.parse("WCW9R9"), emission_table, FallbackPolicy.NEAREST_BY_STRUCTURE
        )
        assert record.stage(Stage.A) == pytest.approx(29000.0)
        assert record.stage(Stage.C) == pytest.approx(1900.0)

    def test_nearest_falls_through_to_global_mean(self, emission_table):
        no_peers = resolve_record(
            ArchetypeCode.parse("CCW9R9"), emission_table, FallbackPolicy.NEAREST_BY_STRUCTURE
        )
        global_mean = resolve_record(
            ArchetypeCode.parse("CCW9R9"), emission_table, FallbackPolicy.GLOBAL_MEAN
        )
        assert no_peers.stage_emissions == global_mean.stage_emissions
        assert global_mean.stage(Stage.A) == pytest.approx((30000 + 60000 + 45000 + 28000) / 4)

    def test_empty_table_always_raises(self):
        with pytest.raises(MissingArchetype):
            resolve_record(ArchetypeCode.parse("WBW2R1"), {}, FallbackPolicy.GLOBAL_MEAN)


class TestEmbodiedEmission:
    def test_standard_unit(self, emission_table):
        b = make_building(footprint_area=STANDARD_UNIT_SQFT, floors=1)
        assert embodied_emission(b, emission_table) == pytest.approx(37000.0)

    def test_linear_in_area_and_floors(self, emission_table):
        base = embodied_emission(make_building(), emission_table)
        double_area = embodied_emission(
            make_building(footprint_area=2000.0), emission_table
        )
        triple_floors = embodied_emission(make_building(floors=3), emission_table)
        assert double_area == pytest.approx(2 * base, rel=1e-12)
        assert triple_floors == pytest.approx(3 * base, rel=1e-12)

    def test_selector_restricts_stages(self, emission_table):
        b = make_building()
        only_a = embodied_emission(b, emission_table, EmissionSelector.parse(["A"]))
        assert only_a == pytest.approx(30000.0)


class TestOperational:
    def test_known_activity(self, intensity_table):
        b = make_building(activity_type="office")
        assert operational_emission(b, intensity_table, 10.0) == pytest.approx(
            9.0 * 1000.0 * 10.0
        )

    def test_unknown_activity_uses_default(self, intensity_table):
        b = make_building(activity_type="datacenter")
        assert operational_emission(b, intensity_table, 1.0) == pytest.approx(8000.0)

    def test_zero_horizon(self, intensity_table):
        assert operational_emission(make_building(), intensity_table, 0.0) == 0.0

    def test_negative_horizon_rejected(self, intensity_table):
        with pytest.raises(ValueError):
            operational_emission(make_building(), intensity_table, -1.0)

    def test_scaled(self, intensity_table):
        scaled = intensity_table.scaled(0.5)
        assert scaled.intensity("office") == pytest.approx(4.5)
        assert scaled.intensity("unknown") == pytest.approx(4.0)

    def test_from_csv_requires_default_row(self):
        text = "activity,kgco2e_per_sqft_year\noffice,9.0\n"
        with pytest.raises(MalformedRow):
            OperationalIntensityTable.from_csv(io.StringIO(text))

    def test_synthetic_default_loads(self):
        table = OperationalIntensityTable.synthetic_default()
        assert table.default > 0
        assert table.intensity("commercial") > 0


def test_records_are_shareable_views(emission_table):
    # Resolution never mutates the table.
    before = dict(emission_table)
    resolve_record(ArchetypeCode.parse("WCW9R9"), emission_table)
    assert emission_table == before
