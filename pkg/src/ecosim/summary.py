"""Outcome distribution summaries and representative scenario selection.

Optimistic and pessimistic scenarios are the 5th and 95th percentile
outcomes by total emissions (nearest-rank, so always actual outcomes); the
probable scenario sits at the most populated histogram bin. All selections
are deterministic given the outcome list.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .cost_model import DacPricing, dac_cost
from .engine import IterationOutcome
from .outcomes_io import COST_COLUMNS, COUNT_COLUMNS, EMISSION_COLUMNS
from .scenario import ScenarioParameters

DRIVING_FIELDS = tuple(
    name for name in ScenarioParameters.SAMPLED_FIELDS if name != "new_age_threshold"
)
DECILES = 10


def nearest_rank(sorted_values: np.ndarray, percentile: float) -> float:
    """The nearest-rank percentile: the ceil(p/100*N)-th smallest value."""
    if len(sorted_values) == 0:
        raise ValueError("no values")
    if not 0 < percentile <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {percentile}")
    rank = max(1, math.ceil(percentile / 100.0 * len(sorted_values)))
    return float(sorted_values[rank - 1])


def mode_estimate(values: np.ndarray) -> float:
    """Midpoint of the fullest Freedman-Diaconis bin, snapped to a value.

    Degenerate spreads (zero IQR or a single point) fall back to the value
    nearest the median.
    """
    if len(values) == 0:
        raise ValueError("no values")
    sorted_values = np.sort(values)
    q25, q75 = np.percentile(sorted_values, [25.0, 75.0])
    width = 2.0 * (q75 - q25) / len(values) ** (1.0 / 3.0)
    low = float(sorted_values[0])
    high = float(sorted_values[-1])
    if width <= 0 or high == low:
        target = nearest_rank(sorted_values, 50.0)
    else:
        bins = max(1, math.ceil((high - low) / width))
        indices = np.clip(((values - low) / width).astype(np.int64), 0, bins - 1)
        counts = np.bincount(indices, minlength=bins)
        best = int(np.argmax(counts))  # ties resolve to the lowest bin
        target = low + (best + 0.5) * width
    return float(sorted_values[int(np.argmin(np.abs(sorted_values - target)))])


def _stats(values: np.ndarray) -> dict[str, float]:
    sorted_values = np.sort(values)
    return {
        "mean": float(values.mean()),
        "std": float(values.std(ddof=1)) if len(values) > 1 else 0.0,
        "min": float(sorted_values[0]),
        "max": float(sorted_values[-1]),
        "p5": nearest_rank(sorted_values, 5.0),
        "p50": nearest_rank(sorted_values, 50.0),
        "p95": nearest_rank(sorted_values, 95.0),
    }


def outcome_to_dict(o: IterationOutcome, pricing: DacPricing) -> dict:
    """One outcome as a JSON-ready mapping, abatement cost included."""
    out: dict = {"iteration": o.iteration}
    out.update(o.params.feature_values())
    for name in COUNT_COLUMNS + EMISSION_COLUMNS + COST_COLUMNS:
        out[name] = getattr(o, name)
    out["turnover_ratio"] = o.turnover_ratio
    out["dac_cost"] = dac_cost(o.total_emissions, pricing)
    return out


def _select(outcomes: Sequence[IterationOutcome], totals: np.ndarray, target: float) -> IterationOutcome:
    # First occurrence in iteration order keeps the choice deterministic.
    return outcomes[int(np.argmin(np.abs(totals - target)))]


def summarize(
    outcomes: Sequence[IterationOutcome],
    pricing: DacPricing = DacPricing(),
) -> dict:
    """Aggregate a run into the summary document.

    The probable scenario is clamped into the optimistic/pessimistic range
    so the three selections are always ordered by total emissions.
    """
    if not outcomes:
        raise ValueError("cannot summarize an empty outcome list")
    totals = np.array([o.total_emissions for o in outcomes], dtype=np.float64)
    turnover = np.array([o.turnover_ratio for o in outcomes], dtype=np.float64)
    costs = np.array([o.total_cost for o in outcomes], dtype=np.float64)
    sorted_totals = np.sort(totals)

    optimistic_total = nearest_rank(sorted_totals, 5.0)
    pessimistic_total = nearest_rank(sorted_totals, 95.0)
    probable_total = min(max(mode_estimate(totals), optimistic_total), pessimistic_total)

    by_lifespan = []
    for threshold in sorted({o.params.lifespan_threshold for o in outcomes}):
        subset = np.sort(
            np.array(
                [o.total_emissions for o in outcomes if o.params.lifespan_threshold == threshold],
                dtype=np.float64,
            )
        )
        by_lifespan.append(
            {
                "lifespan_threshold": threshold,
                "count": int(len(subset)),
                "mean_total_emissions": float(subset.mean()),
                "p5": nearest_rank(subset, 5.0),
                "p95": nearest_rank(subset, 95.0),
            }
        )

    order = np.argsort(totals, kind="stable")
    driving: dict[str, list[float | None]] = {}
    for name in DRIVING_FIELDS:
        series = np.array([getattr(outcomes[i].params, name) for i in order], dtype=np.float64)
        chunks = np.array_split(series, DECILES)
        driving[name] = [float(c.mean()) if len(c) else None for c in chunks]

    return {
        "iterations": len(outcomes),
        "dac_price_per_tonne": pricing.price_per_tonne,
        "total_emissions": _stats(totals),
        "turnover_ratio": _stats(turnover),
        "total_cost": _stats(costs),
        "scenarios": {
            "optimistic": outcome_to_dict(_select(outcomes, totals, optimistic_total), pricing),
            "probable": outcome_to_dict(_select(outcomes, totals, probable_total), pricing),
            "pessimistic": outcome_to_dict(_select(outcomes, totals, pessimistic_total), pricing),
        },
        "by_lifespan": by_lifespan,
        "driving_variables": driving,
    }
