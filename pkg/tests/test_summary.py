from __future__ import annotations

import numpy as np
import pytest

from ecosim.cost_model import DacPricing
from ecosim.engine import IterationOutcome
from ecosim.summary import (
    DRIVING_FIELDS,
    mode_estimate,
    nearest_rank,
    outcome_to_dict,
    summarize,
)

from test_scenario import make_params


def make_outcome(
    iteration: int,
    total: float,
    *,
    lifespan: float = 50.0,
    replacement_rate: float = 2.0,
    cost: float = 0.0,
    turnover: float = 0.0,
) -> IterationOutcome:
    params = make_params(
        lifespan_threshold=lifespan, replacement_emission_rate=replacement_rate
    )
    return IterationOutcome(
        iteration=iteration,
        params=params,
        count_keep=1,
        count_renovate=0,
        count_replace=0,
        count_demolish=0,
        count_new_construction=0,
        emissions_renovate=0.0,
        emissions_replace=0.0,
        emissions_demolish=0.0,
        emissions_new_construction=0.0,
        operational_emissions=total,
        total_emissions=total,
        cost_renovate=0.0,
        cost_replace=0.0,
        cost_demolish=0.0,
        cost_new_construction=cost,
        total_cost=cost,
        turnover_ratio=turnover,
    )


class TestNearestRank:
    def test_centiles_on_one_to_hundred(self):
        values = np.arange(1.0, 101.0)
        assert nearest_rank(values, 5.0) == 5.0
        assert nearest_rank(values, 50.0) == 50.0
        assert nearest_rank(values, 95.0) == 95.0
        assert nearest_rank(values, 100.0) == 100.0

    def test_small_samples(self):
        values = np.array([10.0, 20.0, 30.0])
        # ceil(0.05 * 3) = 1, ceil(0.95 * 3) = 3.
        assert nearest_rank(values, 5.0) == 10.0
        assert nearest_rank(values, 95.0) == 30.0

    def test_always_an_observed_value(self):
        values = np.sort(np.random.default_rng(0).normal(size=47))
        for p in (1.0, 5.0, 33.0, 50.0, 77.7, 95.0, 100.0):
            assert nearest_rank(values, p) in values

    def test_bounds(self):
        values = np.array([1.0])
        with pytest.raises(ValueError):
            nearest_rank(values, 0.0)
        with pytest.raises(ValueError):
            nearest_rank(values, 101.0)
        with pytest.raises(ValueError):
            nearest_rank(np.array([]), 50.0)


class TestModeEstimate:
    def test_bimodal_picks_heavier_cluster(self):
        rng = np.random.default_rng(42)
        light = rng.normal(10.0, 0.5, size=200)
        heavy = rng.normal(30.0, 0.5, size=800)
        values = np.concatenate([light, heavy])
        assert mode_estimate(values) == pytest.approx(30.0, abs=1.0)

    def test_result_is_observed_value(self):
        values = np.random.default_rng(7).normal(size=500)
        assert mode_estimate(values) in values

    def test_all_equal(self):
        values = np.full(50, 3.25)
        assert mode_estimate(values) == 3.25

    def test_single_value(self):
        assert mode_estimate(np.array([7.5])) == 7.5

    def test_zero_iqr_falls_back_to_median(self):
        # IQR of this sample is zero but the extremes differ.
        values = np.array([0.0] + [5.0] * 20 + [100.0])
        assert mode_estimate(values) == 5.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mode_estimate(np.array([]))


class TestSummarize:
    def test_scenarios_ordered(self):
        rng = np.random.default_rng(11)
        outcomes = [
            make_outcome(i, float(t)) for i, t in enumerate(rng.normal(1000.0, 150.0, 400))
        ]
        summary = summarize(outcomes)
        opt = summary["scenarios"]["optimistic"]["total_emissions"]
        prob = summary["scenarios"]["probable"]["total_emissions"]
        pess = summary["scenarios"]["pessimistic"]["total_emissions"]
        assert opt <= prob <= pess

    def test_selected_scenarios_are_actual_outcomes(self):
        outcomes = [make_outcome(i, float(i * 3 + 1)) for i in range(100)]
        summary = summarize(outcomes)
        totals = {o.total_emissions for o in outcomes}
        for name in ("optimistic", "probable", "pessimistic"):
            assert summary["scenarios"][name]["total_emissions"] in totals

    def test_known_percentiles(self):
        outcomes = [make_outcome(i, float(i + 1)) for i in range(100)]
        summary = summarize(outcomes)
        assert summary["scenarios"]["optimistic"]["total_emissions"] == 5.0
        assert summary["scenarios"]["pessimistic"]["total_emissions"] == 95.0
        assert summary["total_emissions"]["p50"] == 50.0
        assert summary["total_emissions"]["min"] == 1.0
        assert summary["total_emissions"]["max"] == 100.0

    def test_single_outcome_scenarios_coincide(self):
        summary = summarize([make_outcome(0, 500.0, cost=20.0, turnover=0.1)])
        for name in ("optimistic", "probable", "pessimistic"):
            assert summary["scenarios"][name]["total_emissions"] == 500.0
            assert summary["scenarios"][name]["iteration"] == 0
        assert summary["iterations"] == 1
        assert summary["total_emissions"]["std"] == 0.0

    def test_probable_clamped_into_range(self):
        # A heavy cluster below the 5th percentile cannot pull the probable
        # scenario outside the optimistic/pessimistic band.
        values = [1.0, 1.0, 1.0] + [float(v) for v in range(100, 200)]
        outcomes = [make_outcome(i, v) for i, v in enumerate(values)]
        summary = summarize(outcomes)
        opt = summary["scenarios"]["optimistic"]["total_emissions"]
        prob = summary["scenarios"]["probable"]["total_emissions"]
        assert prob >= opt

    def test_dac_cost_follows_price(self):
        outcomes = [make_outcome(i, 2000.0) for i in range(3)]
        default = summarize(outcomes)
        assert default["dac_price_per_tonne"] == 500.0
        assert default["scenarios"]["probable"]["dac_cost"] == pytest.approx(1000.0)
        custom = summarize(outcomes, DacPricing(price_per_tonne=100.0))
        assert custom["scenarios"]["probable"]["dac_cost"] == pytest.approx(200.0)

    def test_by_lifespan_grouping(self):
        outcomes = [
            make_outcome(0, 10.0, lifespan=50.0),
            make_outcome(1, 20.0, lifespan=50.0),
            make_outcome(2, 30.0, lifespan=80.0),
        ]
        groups = summarize(outcomes)["by_lifespan"]
        assert [g["lifespan_threshold"] for g in groups] == [50.0, 80.0]
        assert groups[0]["count"] == 2
        assert groups[0]["mean_total_emissions"] == pytest.approx(15.0)
        assert groups[1]["count"] == 1
        assert groups[1]["p5"] == 30.0

    def test_driving_variable_deciles(self):
        # Total emissions rise with the replacement rate, so decile means of
        # that rate must rise along the sorted-outcome axis.
        rates = np.linspace(1.0, 3.0, 200)
        outcomes = [
            make_outcome(i, 100.0 * r, replacement_rate=float(r))
            for i, r in enumerate(rates)
        ]
        driving = summarize(outcomes)["driving_variables"]
        assert set(driving) == set(DRIVING_FIELDS)
        decile_means = driving["replacement_emission_rate"]
        assert len(decile_means) == 10
        assert all(m is not None for m in decile_means)
        assert decile_means == sorted(decile_means)

    def test_deciles_pad_with_none_when_short(self):
        outcomes = [make_outcome(i, float(i)) for i in range(4)]
        driving = summarize(outcomes)["driving_variables"]
        deciles = driving["lifespan_threshold"]
        assert len(deciles) == 10
        assert sum(1 for d in deciles if d is not None) == 4

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestOutcomeToDict:
    def test_fields_present(self):
        d = outcome_to_dict(make_outcome(3, 1500.0, cost=42.0, turnover=0.5), DacPricing())
        assert d["iteration"] == 3
        assert d["total_emissions"] == 1500.0
        assert d["total_cost"] == 42.0
        assert d["turnover_ratio"] == 0.5
        assert d["dac_cost"] == pytest.approx(750.0)
        assert d["lifespan_threshold"] == 50.0
        assert d["count_keep"] == 1
