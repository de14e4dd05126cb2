"""Composition engine for microcell wireless-energy sharing.

Providers advertise shareable energy; consumers request charge during their
stays. This package scores requests with a multi-attribute incentive model,
filters them through selection gates, composes non-overlapping schedules
(greedy incentive-based, FCFS, exact brute force), and benchmarks the three
algorithms over synthetic workloads. An HTTP service and CLI wrap the core.
"""

from .composition import (
    ALGORITHM_BF,
    ALGORITHM_FCFS,
    ALGORITHM_IB,
    ALGORITHMS,
    DEFAULT_BF_LIMIT,
    BruteForceLimitError,
    CompositionPlan,
    compose_bf,
    compose_fcfs,
    compose_ib,
    plan_to_dict,
    verify_plan,
)
from .harness import ExperimentReport, run_experiment
from .incentive import (
    RewardBreakdown,
    provider_reward,
    reward_battery_level,
    reward_request,
    reward_requested_energy,
    reward_stay_time,
    reward_time_of_provision,
)
from .model import (
    DEFAULT_CONSTANTS,
    DomainError,
    EnergyRequest,
    EnergyService,
    Location,
    ModelConstants,
    TimeWindow,
    ValidationFinding,
    load_constants,
    validate_instance,
)
from .selection import ScoredRequest, distance, select_nearby
from .workload import (
    WorkloadSpec,
    generate_requests,
    generate_services,
    ingest_transactions,
    load_workload_spec,
    read_fixture,
    write_fixture,
)

__version__ = "1.0.0"

__all__ = [
    "ALGORITHM_BF",
    "ALGORITHM_FCFS",
    "ALGORITHM_IB",
    "ALGORITHMS",
    "DEFAULT_BF_LIMIT",
    "DEFAULT_CONSTANTS",
    "BruteForceLimitError",
    "CompositionPlan",
    "DomainError",
    "EnergyRequest",
    "EnergyService",
    "ExperimentReport",
    "Location",
    "ModelConstants",
    "RewardBreakdown",
    "ScoredRequest",
    "TimeWindow",
    "ValidationFinding",
    "WorkloadSpec",
    "compose_bf",
    "compose_fcfs",
    "compose_ib",
    "distance",
    "generate_requests",
    "generate_services",
    "ingest_transactions",
    "load_constants",
    "load_workload_spec",
    "plan_to_dict",
    "provider_reward",
    "read_fixture",
    "reward_battery_level",
    "reward_request",
    "reward_requested_energy",
    "reward_stay_time",
    "reward_time_of_provision",
    "run_experiment",
    "select_nearby",
    "validate_instance",
    "verify_plan",
    "write_fixture",
]
