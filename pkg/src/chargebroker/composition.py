"""Schedule builders: greedy incentive-based, FCFS, and exact brute force.

All three algorithms optimize over the identical feasible set: an accepted
schedule must be pairwise non-overlapping in time (back-to-back service is
legal: one request may end exactly when the next starts, since the provider
charges one consumer at a time for the consumer's whole stay) and must fit
the provider's energy budget. They differ only in how they pick.

- ``ib``   scans requests by (start ascending, reward descending) and accepts
           whatever is feasible at the cursor — a priority-scheduling greedy.
- ``fcfs`` scans by start time alone; reward plays no role in ordering.
- ``bf``   enumerates every feasible subset and returns a maximum-reward one.

Tie-breaks are deterministic everywhere: request id for the greedy sorts,
and (fewer requests, then lexicographic ids) for brute force.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .incentive import provider_reward
from .model import DEFAULT_CONSTANTS, EnergyService, ModelConstants
from .selection import ScoredRequest, distance, is_temporally_composable

ALGORITHM_IB = "ib"
ALGORITHM_FCFS = "fcfs"
ALGORITHM_BF = "bf"
ALGORITHMS = (ALGORITHM_IB, ALGORITHM_FCFS, ALGORITHM_BF)

#: Above this many scored requests, brute force refuses to enumerate.
DEFAULT_BF_LIMIT = 20


class BruteForceLimitError(RuntimeError):
    """Raised when an instance is too large for exhaustive enumeration."""

    def __init__(self, size: int, limit: int) -> None:
        super().__init__(
            f"brute force refused: {size} scored requests exceed the "
            f"enumeration limit of {limit}"
        )
        self.size = size
        self.limit = limit


@dataclass(frozen=True, slots=True)
class CompositionPlan:
    """A feasible schedule of accepted requests for one service.

    ``accepted`` is ordered by start time. ``remaining_energy`` is the
    capacity left after sequentially subtracting each accepted request's
    energy, in schedule order.
    """

    algorithm: str
    service_id: str
    accepted: tuple[ScoredRequest, ...]
    total_reward: float
    remaining_energy: float


def _scan(service: EnergyService, ordered: Iterable[ScoredRequest]) -> tuple[list[ScoredRequest], float]:
    """Single greedy pass: accept whatever fits the time cursor and budget."""
    accepted: list[ScoredRequest] = []
    cursor = service.window.start
    energy = service.capacity
    for item in ordered:
        window = item.request.window
        if window.start >= cursor and item.request.requested_energy <= energy:
            accepted.append(item)
            cursor = window.end
            energy -= item.request.requested_energy
    return accepted, energy


def compose_ib(service: EnergyService, scored: Sequence[ScoredRequest]) -> CompositionPlan:
    """Incentive-based greedy: start ascending, then reward descending."""
    ordered = sorted(
        scored,
        key=lambda s: (s.request.window.start, -s.reward.total, s.request.id),
    )
    accepted, remaining = _scan(service, ordered)
    return CompositionPlan(
        algorithm=ALGORITHM_IB,
        service_id=service.id,
        accepted=tuple(accepted),
        total_reward=provider_reward([s.reward for s in accepted]),
        remaining_energy=remaining,
    )


def compose_fcfs(service: EnergyService, scored: Sequence[ScoredRequest]) -> CompositionPlan:
    """First come, first served: start ascending, reward ignored."""
    ordered = sorted(scored, key=lambda s: (s.request.window.start, s.request.id))
    accepted, remaining = _scan(service, ordered)
    return CompositionPlan(
        algorithm=ALGORITHM_FCFS,
        service_id=service.id,
        accepted=tuple(accepted),
        total_reward=provider_reward([s.reward for s in accepted]),
        remaining_energy=remaining,
    )


def compose_bf(
    service: EnergyService,
    scored: Sequence[ScoredRequest],
    limit: int = DEFAULT_BF_LIMIT,
) -> CompositionPlan:
    """Exact maximum: enumerate every feasible subset, keep the best.

    Feasibility mirrors the greedy scanners' constraints exactly, so all
    three algorithms optimize over the same set. Ties are broken toward
    fewer requests, then the lexicographically smallest sorted id tuple.
    Refuses instances larger than ``limit`` (exponential enumeration guard).
    """
    if len(scored) > limit:
        raise BruteForceLimitError(len(scored), limit)

    order = sorted(
        scored,
        key=lambda s: (s.request.window.start, s.request.window.end, s.request.id),
    )
    n = len(order)
    starts = [s.request.window.start for s in order]
    ends = [s.request.window.end for s in order]
    energies = [s.request.requested_energy for s in order]
    rewards = [s.reward.total for s in order]
    ids = [s.request.id for s in order]

    best_reward = 0.0
    best_count = 0
    best_ids: tuple[str, ...] = ()
    best_chosen: tuple[int, ...] = ()

    chosen: list[int] = []

    def visit(i: int, cursor: int, energy: float, reward: float) -> None:
        nonlocal best_reward, best_count, best_ids, best_chosen
        if i == n:
            count = len(chosen)
            if reward > best_reward:
                improved = True
            elif reward == best_reward:
                if count != best_count:
                    improved = count < best_count
                else:
                    improved = tuple(sorted(ids[j] for j in chosen)) < best_ids
            else:
                improved = False
            if improved:
                best_reward = reward
                best_count = count
                best_ids = tuple(sorted(ids[j] for j in chosen))
                best_chosen = tuple(chosen)
            return
        # Include-first so a near-greedy solution is found early and most
        # later leaves fail the reward comparison cheaply.
        if starts[i] >= cursor and energies[i] <= energy:
            chosen.append(i)
            visit(i + 1, ends[i], energy - energies[i], reward + rewards[i])
            chosen.pop()
        visit(i + 1, cursor, energy, reward)

    visit(0, service.window.start, service.capacity, 0.0)

    accepted = [order[j] for j in best_chosen]
    remaining = service.capacity
    for item in accepted:
        remaining -= item.request.requested_energy
    return CompositionPlan(
        algorithm=ALGORITHM_BF,
        service_id=service.id,
        accepted=tuple(accepted),
        total_reward=provider_reward([s.reward for s in accepted]),
        remaining_energy=remaining,
    )


_REWARD_SUM_TOL = 1e-12
_ENERGY_TOL = 1e-9


def verify_plan(
    service: EnergyService,
    plan: CompositionPlan,
    constants: ModelConstants = DEFAULT_CONSTANTS,
) -> list[str]:
    """Independently re-check a plan; returns violations, empty iff valid.

    Checks the plan invariants (non-overlap, energy budget and remainder,
    reward-sum consistency) plus the per-request selection gates.
    """
    violations: list[str] = []
    requests = [item.request for item in plan.accepted]

    seen: set[str] = set()
    for request in requests:
        if request.id in seen:
            violations.append(f"request {request.id} accepted more than once")
        seen.add(request.id)

    for request in requests:
        if not is_temporally_composable(request, service):
            violations.append(
                f"request {request.id} window {request.window.format()} not "
                f"inside service window {service.window.format()}"
            )
        gap = distance(request.location, service.location)
        if gap > constants.max_energy_distance:
            violations.append(
                f"request {request.id} at {gap:.3f} m exceeds transfer range "
                f"{constants.max_energy_distance} m"
            )
        if request.requested_energy > service.capacity:
            violations.append(
                f"request {request.id} energy {request.requested_energy} exceeds "
                f"capacity {service.capacity}"
            )

    for earlier, later in zip(requests, requests[1:]):
        if earlier.window.end > later.window.start:
            violations.append(
                f"requests {earlier.id} and {later.id} overlap in time"
            )

    total_energy = 0.0
    for request in requests:
        total_energy += request.requested_energy
    if total_energy > service.capacity:
        violations.append(
            f"accepted energy {total_energy} exceeds capacity {service.capacity}"
        )
    replayed = service.capacity
    for request in requests:
        replayed -= request.requested_energy
    if abs(plan.remaining_energy - replayed) > _ENERGY_TOL:
        violations.append(
            f"remaining energy {plan.remaining_energy} inconsistent with "
            f"capacity minus accepted energy {replayed}"
        )
    if plan.remaining_energy < 0:
        violations.append(f"remaining energy {plan.remaining_energy} is negative")

    recomputed = provider_reward([item.reward for item in plan.accepted])
    if abs(plan.total_reward - recomputed) > _REWARD_SUM_TOL:
        violations.append(
            f"total reward {plan.total_reward} differs from component sum {recomputed}"
        )
    return violations


def plan_to_dict(plan: CompositionPlan) -> dict[str, Any]:
    """Wire form of a plan."""
    return {
        "algorithm": plan.algorithm,
        "service_id": plan.service_id,
        "accepted": [
            {
                "request_id": item.request.id,
                "start": item.request.window.start,
                "end": item.request.window.end,
                "requested_energy": item.request.requested_energy,
                "reward_total": item.reward.total,
            }
            for item in plan.accepted
        ],
        "total_reward": plan.total_reward,
        "remaining_energy": plan.remaining_energy,
    }
