from __future__ import annotations

import io

import pytest

from ecosim.cost_model import CostTable
from ecosim.engine import compile_stock, run_simulation
from ecosim.errors import MissingColumn, RowError
from ecosim.outcomes_io import OUTCOME_COLUMNS, read_outcomes, write_outcomes
from ecosim.scenario import MitigationConfig, ParameterRanges


@pytest.fixture
def outcomes(mixed_stock, emission_table, intensity_table):
    compiled = compile_stock(
        mixed_stock, emission_table, intensity_table, CostTable(), reference_year=2026
    )
    return run_simulation(
        compiled, ParameterRanges(), MitigationConfig(), seed=77, iterations=25,
        horizon_years=10.0,
    )


def test_column_order_stable():
    assert OUTCOME_COLUMNS[0] == "iteration"
    assert OUTCOME_COLUMNS[-1] == "turnover_ratio"
    assert len(OUTCOME_COLUMNS) == 32
    assert len(set(OUTCOME_COLUMNS)) == len(OUTCOME_COLUMNS)


def test_round_trip_values(outcomes):
    text = write_outcomes(outcomes)
    parsed = read_outcomes(io.StringIO(text))
    assert parsed == outcomes


def test_round_trip_bytes(outcomes):
    """Serialize, parse, re-serialize: the two texts must be identical."""
    first = write_outcomes(outcomes)
    second = write_outcomes(read_outcomes(io.StringIO(first)))
    assert first == second


def test_round_trip_through_file(tmp_path, outcomes):
    path = tmp_path / "outcomes.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_outcomes(outcomes, fh)
    assert read_outcomes(path) == outcomes


def test_header_matches_columns(outcomes):
    text = write_outcomes(outcomes)
    header = text.splitlines()[0]
    assert header == ",".join(OUTCOME_COLUMNS)


def test_empty_list(tmp_path):
    text = write_outcomes([])
    assert text == ",".join(OUTCOME_COLUMNS) + "\n"
    assert read_outcomes(io.StringIO(text)) == []


def test_missing_column_rejected(outcomes):
    text = write_outcomes(outcomes)
    lines = text.splitlines()
    # Drop the last column from the header and every row.
    broken = "\n".join(line.rsplit(",", 1)[0] for line in lines) + "\n"
    with pytest.raises(MissingColumn) as excinfo:
        read_outcomes(io.StringIO(broken))
    assert "turnover_ratio" in str(excinfo.value)


def test_extra_columns_tolerated(outcomes):
    text = write_outcomes(outcomes)
    lines = text.splitlines()
    widened = "\n".join(
        [lines[0] + ",note"] + [line + ",x" for line in lines[1:]]
    ) + "\n"
    assert read_outcomes(io.StringIO(widened)) == outcomes


def test_malformed_row_reports_position(outcomes):
    text = write_outcomes(outcomes[:3])
    lines = text.splitlines()
    lines[2] = lines[2].replace(lines[2].split(",")[1], "not-a-number", 1)
    with pytest.raises(RowError) as excinfo:
        read_outcomes(io.StringIO("\n".join(lines) + "\n"))
    assert excinfo.value.row == 2
