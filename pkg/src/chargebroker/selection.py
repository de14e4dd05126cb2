"""Selection gates: which requests a service can serve at all.

A request is selectable when its stay fits inside the provider's window,
it is within wireless range, and its requested energy does not exceed the
advertised capacity. Survivors are annotated with their reward breakdown.
Affordability here is against the full advertised capacity; running-budget
accounting belongs to the composition scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .incentive import RewardBreakdown, reward_request
from .model import (
    DEFAULT_CONSTANTS,
    EnergyRequest,
    EnergyService,
    Location,
    ModelConstants,
)


@dataclass(frozen=True, slots=True)
class ScoredRequest:
    """A selectable request paired with its reward against one service."""

    request: EnergyRequest
    reward: RewardBreakdown


def distance(a: Location, b: Location) -> float:
    """Euclidean distance in meters."""
    return math.hypot(a.x - b.x, a.y - b.y)


def is_temporally_composable(request: EnergyRequest, service: EnergyService) -> bool:
    """True iff the consumer's stay lies inside the provider's (inclusive)."""
    return service.window.contains(request.window)


def select_nearby(
    service: EnergyService,
    requests: list[EnergyRequest],
    constants: ModelConstants = DEFAULT_CONSTANTS,
) -> list[ScoredRequest]:
    """Filter requests through the three gates and score the survivors.

    Gates, all inclusive comparisons: temporal containment, distance at most
    ``constants.max_energy_distance``, requested energy at most capacity.
    Output preserves input order; inputs are not mutated.
    """
    scored: list[ScoredRequest] = []
    for request in requests:
        if not is_temporally_composable(request, service):
            continue
        if distance(request.location, service.location) > constants.max_energy_distance:
            continue
        if request.requested_energy > service.capacity:
            continue
        scored.append(ScoredRequest(request, reward_request(request, service, constants)))
    return scored
