import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chargebroker.incentive import (
    provider_reward,
    reward_battery_level,
    reward_request,
    reward_requested_energy,
    reward_stay_time,
    reward_time_of_provision,
)
from chargebroker.model import DEFAULT_CONSTANTS, DomainError, TimeWindow

from factories import make_request, make_service

# Weighted total recomputed with exact rational arithmetic, no floats.
WORKED_EXAMPLE_TOTAL = (
    Fraction(27, 100) * 1
    + Fraction(28, 100) * Fraction(1, 2)
    + Fraction(23, 100) * Fraction(3, 4)
    + Fraction(22, 100) * Fraction(18, 100)
)


def test_worked_example_oracle_value():
    assert WORKED_EXAMPLE_TOTAL == Fraction(6221, 10000)


def test_worked_example_breakdown():
    """Battery 10, energy 50 of 100, stay 30 of 120 min, start 09:00."""
    service = make_service(capacity=100.0, window="09:00-11:00")
    request = make_request(battery_level=10.0, requested_energy=50.0, window="09:00-09:30")
    b = reward_request(request, service)
    assert (b.battery_level, b.requested_energy, b.stay_time, b.time_of_provision) == (
        1.0,
        0.5,
        0.75,
        0.18,
    )
    assert abs(b.total - float(WORKED_EXAMPLE_TOTAL)) < 1e-9


@pytest.mark.parametrize(
    "level,expected",
    [
        (0.0, 1.0),
        (19.999, 1.0),
        (20.0, 0.5),  # thresholds are strict, so the boundary is mid
        (50.0, 0.5),
        (80.0, 0.5),
        (80.001, 1.0),
        (100.0, 1.0),
    ],
)
def test_battery_level_thresholds(level, expected):
    assert reward_battery_level(level) == expected


@pytest.mark.parametrize("level", [-0.1, 100.1])
def test_battery_level_out_of_range(level):
    with pytest.raises(DomainError):
        reward_battery_level(level)


def test_requested_energy_fraction():
    assert reward_requested_energy(50.0, 100.0) == 0.5
    assert reward_requested_energy(100.0, 100.0) == 1.0


def test_requested_energy_requires_prefiltering():
    with pytest.raises(DomainError, match="pre-filtered"):
        reward_requested_energy(101.0, 100.0)


@pytest.mark.parametrize("requested,capacity", [(0.0, 100.0), (-5.0, 100.0), (10.0, 0.0)])
def test_requested_energy_rejects_nonpositive(requested, capacity):
    with pytest.raises(DomainError):
        reward_requested_energy(requested, capacity)


def test_stay_time_relative_gap():
    assert reward_stay_time(TimeWindow.parse("09:00-09:30"), TimeWindow.parse("09:00-11:00")) == 0.75
    assert reward_stay_time(TimeWindow.parse("09:00-11:00"), TimeWindow.parse("09:00-11:00")) == 0.0


def test_stay_time_requires_containment():
    with pytest.raises(DomainError, match="not contained"):
        reward_stay_time(TimeWindow.parse("08:00-09:30"), TimeWindow.parse("09:00-11:00"))


@pytest.mark.parametrize(
    "window,expected",
    [
        ("09:00-09:30", 0.18),
        ("10:59-11:30", 0.18),
        ("11:00-11:30", 0.23),
        ("12:59-13:10", 0.23),
        ("13:00-13:30", 0.26),
        ("15:00-15:30", 0.21),
        ("16:59-17:30", 0.21),
        ("08:00-08:30", 0.18),  # before the first period clamps down
        ("17:30-18:00", 0.21),  # after the last period clamps up
        ("22:00-23:00", 0.21),
    ],
)
def test_time_of_provision_periods(window, expected):
    assert reward_time_of_provision(TimeWindow.parse(window)) == expected


def test_time_of_provision_keyed_on_start():
    # A stay spanning two periods scores by where it starts.
    assert reward_time_of_provision(TimeWindow.parse("10:50-11:20")) == 0.18


consumer_windows = st.integers(min_value=540, max_value=1019).flatmap(
    lambda start: st.integers(min_value=start + 1, max_value=1020).map(
        lambda end: TimeWindow(start, end)
    )
)


@given(
    battery=st.floats(min_value=0, max_value=100, allow_nan=False),
    requested=st.floats(min_value=0.01, max_value=100.0, allow_nan=False),
    capacity=st.floats(min_value=0.01, max_value=100.0, allow_nan=False),
    window=consumer_windows,
)
def test_total_reward_bounds(battery, requested, capacity, window):
    """Any scorable request earns a positive total capped at 0.8372."""
    if requested > capacity:
        requested = capacity
    service = make_service(capacity=capacity, window="09:00-17:00")
    request = dataclasses.replace(
        make_request(), battery_level=battery, requested_energy=requested, window=window
    )
    b = reward_request(request, service)
    assert 0.0 < b.total <= 0.8372


@given(
    battery=st.floats(min_value=0, max_value=100, allow_nan=False),
    requested=st.floats(min_value=0.01, max_value=80.0, allow_nan=False),
    window=consumer_windows,
)
def test_total_consistent_with_exact_recomputation(battery, requested, window):
    service = make_service(capacity=80.0, window="09:00-17:00")
    request = dataclasses.replace(
        make_request(), battery_level=battery, requested_energy=requested, window=window
    )
    b = reward_request(request, service)
    exact = (
        Fraction(27, 100) * Fraction(b.battery_level)
        + Fraction(28, 100) * Fraction(b.requested_energy)
        + Fraction(23, 100) * Fraction(b.stay_time)
        + Fraction(22, 100) * Fraction(b.time_of_provision)
    )
    assert abs(b.total - float(exact)) <= 1e-12


@given(
    low=st.floats(min_value=0.01, max_value=50.0, allow_nan=False),
    high=st.floats(min_value=50.01, max_value=100.0, allow_nan=False),
)
def test_requested_energy_monotone(low, high):
    assert reward_requested_energy(low, 100.0) < reward_requested_energy(high, 100.0)


@given(
    short_end=st.integers(min_value=541, max_value=659),
    long_end=st.integers(min_value=541, max_value=660),
)
def test_shorter_stay_earns_no_less(short_end, long_end):
    if long_end <= short_end:
        short_end, long_end = long_end, short_end + 1
    provider = TimeWindow.parse("09:00-11:00")
    shorter = reward_stay_time(TimeWindow(540, short_end), provider)
    longer = reward_stay_time(TimeWindow(540, long_end), provider)
    assert shorter >= longer


def test_reward_is_deterministic():
    service = make_service()
    request = make_request()
    assert reward_request(request, service) == reward_request(request, service)


def test_provider_reward_sums_totals():
    service = make_service(window="09:00-17:00")
    breakdowns = [
        reward_request(make_request(id=f"r{i}", window=f"{9 + i}:00-{9 + i}:30"), service)
        for i in range(3)
    ]
    expected = 0.0
    for b in breakdowns:
        expected += b.total
    assert provider_reward(breakdowns) == expected
    assert provider_reward([]) == 0.0
