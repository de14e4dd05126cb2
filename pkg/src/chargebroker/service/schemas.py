"""Wire schemas for the HTTP service.

These models own the request and response shapes only. Domain invariants
(window ordering, battery ranges, constants consistency) are checked by the
core validators so the rules live in exactly one place; lenient conversion
below deliberately lets shape-valid but rule-breaking objects through to
``validate_instance``, which reports findings instead of a bare 422.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from ..composition import DEFAULT_BF_LIMIT, ALGORITHMS
from ..model import (
    MINUTES_PER_DAY,
    DomainError,
    EnergyRequest,
    EnergyService,
    Location,
    ModelConstants,
    TimeWindow,
    constants_from_dict,
)
from ..workload import WorkloadSpec, spec_from_dict


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class WindowModel(_Schema):
    start: int = Field(ge=0, lt=MINUTES_PER_DAY)
    end: int = Field(ge=0, lt=MINUTES_PER_DAY)

    def to_domain(self) -> TimeWindow:
        # Lenient: a reversed window must reach validate_instance as an
        # object so it can be reported as a finding, not a parse failure.
        try:
            return TimeWindow(self.start, self.end)
        except DomainError:
            window = TimeWindow.__new__(TimeWindow)
            object.__setattr__(window, "start", self.start)
            object.__setattr__(window, "end", self.end)
            return window


class LocationModel(_Schema):
    x: float
    y: float

    def to_domain(self) -> Location:
        return Location(self.x, self.y)


class ServiceModel(_Schema):
    id: str
    owner_id: str
    capacity: float
    location: LocationModel
    window: WindowModel

    def to_domain(self) -> EnergyService:
        return EnergyService(
            id=self.id,
            owner_id=self.owner_id,
            capacity=self.capacity,
            location=self.location.to_domain(),
            window=self.window.to_domain(),
        )


class RequestModel(_Schema):
    id: str
    owner_id: str
    battery_level: float
    requested_energy: float
    window: WindowModel
    location: LocationModel

    def to_domain(self) -> EnergyRequest:
        return EnergyRequest(
            id=self.id,
            owner_id=self.owner_id,
            battery_level=self.battery_level,
            requested_energy=self.requested_energy,
            window=self.window.to_domain(),
            location=self.location.to_domain(),
        )


class ConstantsModel(_Schema):
    """Optional overrides for the scoring constants; omitted keys keep defaults."""

    attribute_weights: dict[str, float] | None = None
    tp_rewards: list[float] | None = None
    tp_boundaries: list[str] | None = None
    bl_low_threshold: float | None = None
    bl_high_threshold: float | None = None
    bl_reward_extreme: float | None = None
    bl_reward_mid: float | None = None
    max_energy_distance_m: float | None = None

    def to_domain(self) -> ModelConstants:
        return constants_from_dict(self.model_dump(exclude_none=True))


class WorkloadSpecModel(_Schema):
    """Optional overrides for the workload shape; omitted keys keep defaults."""

    seed: int | None = None
    num_services: int | None = None
    num_requests: int | None = None
    service_duration_range: tuple[int, int] | None = None
    request_duration_range: tuple[int, int] | None = None
    provided_energy_range: tuple[float, float] | None = None
    requested_energy_range: tuple[float, float] | None = None
    battery_level_range: tuple[float, float] | None = None
    day_window: str | None = None
    cell_radius: float | None = None

    def to_domain(self) -> WorkloadSpec:
        doc: dict[str, Any] = self.model_dump(exclude_none=True)
        for key in (
            "service_duration_range",
            "request_duration_range",
            "provided_energy_range",
            "requested_energy_range",
            "battery_level_range",
        ):
            if key in doc:
                doc[key] = list(doc[key])
        return spec_from_dict(doc)


class ComposeRequest(_Schema):
    service: ServiceModel
    requests: list[RequestModel]
    algorithm: Literal["ib", "fcfs", "bf"] = "ib"
    constants: ConstantsModel | None = None
    bf_limit: int = Field(default=DEFAULT_BF_LIMIT, ge=0)


class AcceptedItem(_Schema):
    request_id: str
    start: int
    end: int
    requested_energy: float
    reward_total: float


class PlanResponse(_Schema):
    algorithm: str
    service_id: str
    accepted: list[AcceptedItem]
    total_reward: float
    remaining_energy: float


class FindingModel(_Schema):
    subject: str
    field: str
    message: str


class ErrorResponse(_Schema):
    error: str
    findings: list[FindingModel] = []


class GenerateRequest(_Schema):
    spec: WorkloadSpecModel = WorkloadSpecModel()


class BenchRequest(_Schema):
    spec: WorkloadSpecModel = WorkloadSpecModel()
    algorithms: list[str] = list(ALGORITHMS)
    bf_limit: int = Field(default=DEFAULT_BF_LIMIT, ge=0)
    bucket_width: int = Field(default=50, gt=0)
    constants: ConstantsModel | None = None
