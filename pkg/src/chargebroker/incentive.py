"""Reward scoring for charging requests.

A request earns a credit reward from four attributes: the consumer's battery
level, the requested energy relative to the provider's capacity, the
consumer's stay duration relative to the provider's, and the clock period in
which provision starts. The request total is the weighted sum of the four
component rewards; a provider's total is the sum over its served requests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    DEFAULT_CONSTANTS,
    DomainError,
    EnergyRequest,
    EnergyService,
    ModelConstants,
    TimeWindow,
)


@dataclass(frozen=True, slots=True)
class RewardBreakdown:
    """Component rewards of one request plus their weighted total."""

    battery_level: float
    requested_energy: float
    stay_time: float
    time_of_provision: float
    total: float


def reward_battery_level(
    battery_level: float, constants: ModelConstants = DEFAULT_CONSTANTS
) -> float:
    """Reward for the consumer's battery level.

    Extreme levels (strictly below the low threshold or strictly above the
    high one) earn the full reward: low batteries risk shutdown and high ones
    charge slowly, so serving either is worth more. Everything else earns the
    mid reward; the thresholds themselves count as mid.
    """
    if not 0 <= battery_level <= 100:
        raise DomainError(f"battery level {battery_level} outside 0..100")
    if battery_level < constants.bl_low_threshold or battery_level > constants.bl_high_threshold:
        return constants.bl_reward_extreme
    return constants.bl_reward_mid


def reward_requested_energy(requested: float, capacity: float) -> float:
    """Reward for the requested energy: the fraction of capacity consumed.

    Only defined for affordable requests; selection must have filtered out
    anything above capacity before scoring.
    """
    if capacity <= 0:
        raise DomainError(f"capacity must be positive, got {capacity}")
    if requested <= 0:
        raise DomainError(f"requested energy must be positive, got {requested}")
    if requested > capacity:
        raise DomainError(
            f"reward undefined for requested {requested} > capacity {capacity}; "
            "request must be pre-filtered"
        )
    return requested / capacity


def reward_stay_time(consumer_window: TimeWindow, provider_window: TimeWindow) -> float:
    """Reward for the consumer's stay duration.

    The relative gap between consumer and provider stay lengths: shorter
    consumer stays are more urgent and earn more. Requires the consumer
    window to lie inside the provider's.
    """
    if not provider_window.contains(consumer_window):
        raise DomainError(
            f"consumer window {consumer_window.format()} not contained in "
            f"provider window {provider_window.format()}"
        )
    return abs(consumer_window.duration() - provider_window.duration()) / provider_window.duration()


def reward_time_of_provision(
    consumer_window: TimeWindow, constants: ModelConstants = DEFAULT_CONSTANTS
) -> float:
    """Reward for the clock period in which provision starts.

    The request is classified by its start minute into one of the four
    configured periods (half-open [lo, hi), so each minute maps to exactly
    one period). Starts before the first period clamp to it; starts at or
    after the last period's end clamp to the last, so arbitrary datasets
    remain scorable.
    """
    start = consumer_window.start
    boundaries = constants.tp_boundaries
    if start < boundaries[0].start:
        return constants.tp_rewards[0]
    for period, reward in zip(boundaries, constants.tp_rewards):
        if period.start <= start < period.end:
            return reward
    return constants.tp_rewards[-1]


def reward_request(
    request: EnergyRequest,
    service: EnergyService,
    constants: ModelConstants = DEFAULT_CONSTANTS,
) -> RewardBreakdown:
    """Score one request against one service.

    The total is the weight dot-product over the four component rewards.
    The request must already have passed the selection gates (containment,
    range, affordability); component scorers raise otherwise.
    """
    bl = reward_battery_level(request.battery_level, constants)
    re = reward_requested_energy(request.requested_energy, service.capacity)
    st = reward_stay_time(request.window, service.window)
    tp = reward_time_of_provision(request.window, constants)
    total = (
        constants.weight_bl * bl
        + constants.weight_re * re
        + constants.weight_st * st
        + constants.weight_tp * tp
    )
    return RewardBreakdown(bl, re, st, tp, total)


def provider_reward(breakdowns: list[RewardBreakdown]) -> float:
    """Total credit a provider earns for a set of served requests."""
    total = 0.0
    for breakdown in breakdowns:
        total += breakdown.total
    return total
