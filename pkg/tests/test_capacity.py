"""Capacity formulas, reports, and the cooperative-vs-perception bound sweep."""

import random

import pytest

from sdcap import (
    DeviationSet,
    InvalidInputError,
    InvalidParameterError,
    Regime,
    RoadSpec,
    SweepGrid,
    capacity_report,
    check_capacity_bound,
    expected_safe_distance,
    expected_safe_distance_mixture,
    safe_longitudinal_distance,
    sdc,
    sdc_per_lane,
)
from conftest import REFERENCE


def test_road_defaults():
    road = RoadSpec()
    assert (road.length_km, road.lanes, road.min_speed_kmh) == (10.0, 2, 100.0)
    assert road.length_m == 10_000.0
    assert road.min_speed_mps == pytest.approx(100.0 / 3.6)


def test_road_rejects_zero_speed_floor():
    with pytest.raises(InvalidParameterError):
        RoadSpec(min_speed_kmh=0.0)


def test_road_rejects_bad_lanes_and_length():
    with pytest.raises(InvalidParameterError):
        RoadSpec(lanes=0)
    with pytest.raises(InvalidParameterError):
        RoadSpec(length_km=-1.0)


def test_sdc_reference_point():
    assert sdc(RoadSpec(), 24.02, 5.0) == 833


def test_sdc_exact_packing_single_lane():
    # all values exactly representable: 1250 m - 5 m = 10 spacings of 124.5 m
    road = RoadSpec(length_km=1.25, lanes=1)
    assert sdc(road, 124.5, 5.0) == 11


def test_sdc_huge_spacing_still_fits_one_vehicle():
    road = RoadSpec()
    assert sdc(road, 1e9, 5.0) == 1


def test_sdc_rejects_bad_inputs():
    with pytest.raises(InvalidParameterError):
        sdc(RoadSpec(), 0.0, 5.0)
    with pytest.raises(InvalidParameterError):
        sdc(RoadSpec(), -3.0, 5.0)
    with pytest.raises(InvalidParameterError):
        sdc(RoadSpec(), 20.0, 20_000.0)


def test_sdc_per_lane_variant_differs_by_packing_remainder():
    road = RoadSpec()
    d = expected_safe_distance(REFERENCE, road, "pbv")
    assert sdc(road, d, 5.0) == 833
    assert sdc_per_lane(road, d, 5.0) == 834


def test_sdc_monotonicity():
    road = RoadSpec()
    values = [sdc(road, d, 5.0) for d in (10.0, 20.0, 30.0, 40.0)]
    assert values == sorted(values, reverse=True)
    assert sdc(RoadSpec(lanes=3), 24.0, 5.0) >= sdc(RoadSpec(lanes=2), 24.0, 5.0)
    assert sdc(RoadSpec(length_km=12.0), 24.0, 5.0) >= sdc(RoadSpec(), 24.0, 5.0)


def test_expected_safe_distance_matches_kinematics_at_the_floor():
    road = RoadSpec()
    d = expected_safe_distance(REFERENCE, road, "pbv")
    at_floor = REFERENCE.with_speed(road.min_speed_mps)
    assert d == safe_longitudinal_distance(at_floor, at_floor, 0.5)
    assert d == pytest.approx(24.02, abs=5e-3)


def test_expected_safe_distance_cbv_collapse():
    road = RoadSpec()
    cbv = REFERENCE.with_response_time(0.4)
    d = expected_safe_distance(cbv, road, "cbv", DeviationSet(), 0.1)
    assert d == pytest.approx(expected_safe_distance(REFERENCE, road, "pbv"), abs=1e-9)


def test_expected_safe_distance_guards():
    with pytest.raises(InvalidInputError):
        expected_safe_distance(REFERENCE, RoadSpec(), "cbv")
    with pytest.raises(InvalidInputError):
        expected_safe_distance(REFERENCE, RoadSpec(), "quantum")


def test_mixture_collapses_to_homogeneous_point():
    road = RoadSpec()
    single = expected_safe_distance(REFERENCE, road, "pbv")
    mixture = expected_safe_distance_mixture([(REFERENCE, 1.0)], road, "pbv")
    assert mixture == pytest.approx(single)
    doubled = expected_safe_distance_mixture(
        [(REFERENCE, 2.0), (REFERENCE, 3.0)], road, "pbv"
    )
    assert doubled == pytest.approx(single)


def test_mixture_averages_pairwise_distances():
    road = RoadSpec()
    slow = REFERENCE.with_response_time(0.3)
    mixture = expected_safe_distance_mixture(
        [(REFERENCE, 1.0), (slow, 1.0)], road, "pbv"
    )
    at_floor = REFERENCE.with_speed(road.min_speed_mps)
    d_fast = safe_longitudinal_distance(at_floor, at_floor, 0.5)
    d_slow = safe_longitudinal_distance(at_floor, at_floor, 0.3)
    assert mixture == pytest.approx(0.5 * d_fast + 0.5 * d_slow)


def test_capacity_report_default_point():
    report = capacity_report(REFERENCE, RoadSpec(), DeviationSet(), 0.1, 0.4)
    assert report.sdc_pbv == 833
    assert report.sdc_cbv == 833
    assert report.parameters["e_tau"] == 1.0


def test_capacity_report_bound_holds_on_conservative_draws():
    rng = random.Random(17)
    road = RoadSpec()
    for _ in range(200):
        e_tau = rng.uniform(0.9, 1.0)
        dev = DeviationSet(
            length=rng.uniform(0.9, 1.0),
            front_speed=rng.uniform(1.0, 1.1),
            brake=rng.uniform(0.9, 1.0),
            response=e_tau,
        )
        eta = rng.uniform(0.0, 0.5 - e_tau * 0.4)
        report = capacity_report(REFERENCE, road, dev, eta, 0.4)
        assert report.sdc_pbv <= report.sdc_cbv


def test_cbv_capacity_non_increasing_in_latency():
    road = RoadSpec()
    dev = DeviationSet(response=0.95)
    etas = [0.0, 0.02, 0.05, 0.08, 0.1]
    capacities = [
        capacity_report(REFERENCE, road, dev, eta, 0.4).sdc_cbv for eta in etas
    ]
    assert capacities == sorted(capacities, reverse=True)


def test_check_capacity_bound_small_grid_holds():
    grid = SweepGrid(
        e_tau=(0.95, 1.0), e_brake=(0.95, 1.0), e_v=(1.0, 1.05), eta=(0.001, 0.05)
    )
    report = check_capacity_bound(grid, REFERENCE, 0.4)
    assert report.holds
    assert len(report.rows) == 16
    assert all(row.sdc_cbv >= row.sdc_pbv for row in report.rows)


def test_check_capacity_bound_degenerate_point_equality():
    grid = SweepGrid(e_tau=(1.0,), e_brake=(1.0,), e_v=(1.0,), eta=(0.1,))
    report = check_capacity_bound(grid, REFERENCE, 0.4)
    assert report.holds
    row = report.rows[0]
    assert row.sdc_pbv == row.sdc_cbv
    assert row.d_cbv == pytest.approx(row.d_pbv, abs=1e-9)


def test_check_capacity_bound_rejects_out_of_regime_points():
    grid = SweepGrid(e_tau=(1.0,), e_brake=(1.0,), e_v=(0.9, 1.0), eta=(0.05,))
    report = check_capacity_bound(grid, REFERENCE, 0.4)
    assert len(report.rejected) == 1
    assert "e_v=0.9" in report.rejected[0]
    assert len(report.rows) == 1  # the bad point is not counted


def test_check_capacity_bound_rejects_delay_side_condition():
    grid = SweepGrid(e_tau=(1.0,), e_brake=(1.0,), e_v=(1.0,), eta=(0.2,))
    report = check_capacity_bound(grid, REFERENCE, 0.4)
    assert not report.rows
    assert "side condition" in report.rejected[0]


def test_sweep_grid_rejects_empty_axis():
    with pytest.raises(InvalidInputError):
        SweepGrid(e_tau=(), e_brake=(1.0,), e_v=(1.0,), eta=(0.0,))


def test_deviation_regime_misuse_raises_at_construction():
    # Out-of-regime points cannot silently enter conservative-regime APIs.
    with pytest.raises(Exception):
        DeviationSet(front_speed=0.8, regime=Regime.CONSERVATIVE)
