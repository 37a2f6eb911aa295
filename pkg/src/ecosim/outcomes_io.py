"""Outcome persistence as CSV with exact float round-tripping.

Floats are written with ``repr``, which Python guarantees to parse back to
the identical value, so a file can be read, re-serialized, and compared
byte for byte. Column order is part of the format and must stay stable.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO, Iterable

from .engine import IterationOutcome
from .errors import MissingColumn, RowError
from .scenario import ScenarioParameters

COUNT_COLUMNS = (
    "count_keep",
    "count_renovate",
    "count_replace",
    "count_demolish",
    "count_new_construction",
)
EMISSION_COLUMNS = (
    "emissions_renovate",
    "emissions_replace",
    "emissions_demolish",
    "emissions_new_construction",
    "operational_emissions",
    "total_emissions",
)
COST_COLUMNS = (
    "cost_renovate",
    "cost_replace",
    "cost_demolish",
    "cost_new_construction",
    "total_cost",
)

OUTCOME_COLUMNS: tuple[str, ...] = (
    ("iteration",)
    + ScenarioParameters.FEATURE_FIELDS
    + COUNT_COLUMNS
    + EMISSION_COLUMNS
    + COST_COLUMNS
    + ("turnover_ratio",)
)


def write_outcomes(outcomes: Iterable[IterationOutcome], sink: IO[str] | None = None) -> str:
    """Serialize outcomes to CSV; returns the text, also writing to ``sink``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(OUTCOME_COLUMNS)
    for o in outcomes:
        row: list[str] = [str(o.iteration)]
        features = o.params.feature_values()
        row.extend(repr(float(features[name])) for name in ScenarioParameters.FEATURE_FIELDS)
        row.extend(str(getattr(o, name)) for name in COUNT_COLUMNS)
        row.extend(repr(float(getattr(o, name))) for name in EMISSION_COLUMNS)
        row.extend(repr(float(getattr(o, name))) for name in COST_COLUMNS)
        row.append(repr(float(o.turnover_ratio)))
        writer.writerow(row)
    text = buffer.getvalue()
    if sink is not None:
        sink.write(text)
    return text


def read_outcomes(source: IO[str] | str | Path) -> list[IterationOutcome]:
    """Parse an outcome CSV back into records, values bit-identical."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_outcomes(fh)

    reader = csv.DictReader(source)
    header = reader.fieldnames or []
    for column in OUTCOME_COLUMNS:
        if column not in header:
            raise MissingColumn(column)

    outcomes: list[IterationOutcome] = []
    for index, row in enumerate(reader, start=1):
        try:
            params = ScenarioParameters(
                **{name: float(row[name]) for name in ScenarioParameters.FEATURE_FIELDS}
            )
            outcomes.append(
                IterationOutcome(
                    iteration=int(row["iteration"]),
                    params=params,
                    **{name: int(row[name]) for name in COUNT_COLUMNS},
                    **{name: float(row[name]) for name in EMISSION_COLUMNS},
                    **{name: float(row[name]) for name in COST_COLUMNS},
                    turnover_ratio=float(row["turnover_ratio"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise RowError(index, str(exc)) from exc
    return outcomes
