"""Core domain model for microcell wireless-energy sharing.

Unit conventions used across the whole package:

- Time: integer minutes since midnight, within a single day (0..1439).
- Energy: battery-percent units of a common reference device; a provider's
  shareable capacity and a consumer's requested energy use the same unit, so
  budget arithmetic (sums, remainders) is well defined.
- Distance: planar meters. The default wireless-transfer range is 15 feet,
  i.e. 4.572 m.

All types are immutable value objects and safe to share between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

MINUTES_PER_DAY = 1440

#: Wireless transfer range in meters (15 feet).
DEFAULT_MAX_ENERGY_DISTANCE_M = 4.572


class DomainError(ValueError):
    """A value or argument violates a domain rule."""


def parse_clock(text: str) -> int:
    """Parse ``"HH:MM"`` into minutes since midnight."""
    parts = text.strip().split(":")
    if len(parts) != 2:
        raise DomainError(f"invalid clock time {text!r}: expected HH:MM")
    try:
        hours, minutes = int(parts[0]), int(parts[1])
    except ValueError:
        raise DomainError(f"invalid clock time {text!r}: expected HH:MM") from None
    if not (0 <= hours <= 23 and 0 <= minutes <= 59):
        raise DomainError(f"invalid clock time {text!r}: out of range")
    return hours * 60 + minutes


def format_clock(minutes: int) -> str:
    """Format minutes since midnight as ``"HH:MM"``."""
    if not 0 <= minutes < MINUTES_PER_DAY:
        raise DomainError(f"minutes {minutes} outside 0..{MINUTES_PER_DAY - 1}")
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


@dataclass(frozen=True, slots=True)
class TimeWindow:
    """Half-open-in-spirit stay interval [start, end], in minutes since midnight.

    Construction rejects degenerate or reversed windows: ``start < end``
    always holds for a constructed instance.
    """

    start: int
    end: int

    def __post_init__(self) -> None:
        for name, value in (("start", self.start), ("end", self.end)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise DomainError(f"window {name} must be an integer, got {value!r}")
            if not 0 <= value < MINUTES_PER_DAY:
                raise DomainError(
                    f"window {name}={value} outside 0..{MINUTES_PER_DAY - 1}"
                )
        if self.start >= self.end:
            raise DomainError(
                f"window start {self.start} must precede end {self.end}"
            )

    def duration(self) -> int:
        """Window length in minutes; positive by construction."""
        return self.end - self.start

    def contains(self, other: "TimeWindow") -> bool:
        """Inclusive containment: other fits entirely inside this window."""
        return other.start >= self.start and other.end <= self.end

    @classmethod
    def parse(cls, text: str) -> "TimeWindow":
        """Parse ``"HH:MM-HH:MM"`` into a window."""
        lo, sep, hi = text.partition("-")
        if not sep:
            raise DomainError(f"invalid window {text!r}: expected HH:MM-HH:MM")
        return cls(parse_clock(lo), parse_clock(hi))

    def format(self) -> str:
        return f"{format_clock(self.start)}-{format_clock(self.end)}"


@dataclass(frozen=True, slots=True)
class Location:
    """Planar position in meters within a microcell."""

    x: float
    y: float


@dataclass(frozen=True, slots=True)
class EnergyService:
    """A provider's advertisement: energy to share, where, and when.

    ``capacity`` is the shareable energy in battery-percent units (0, 100].
    """

    id: str
    owner_id: str
    capacity: float
    location: Location
    window: TimeWindow


@dataclass(frozen=True, slots=True)
class EnergyRequest:
    """A consumer's demand: how much energy, during which stay, and where."""

    id: str
    owner_id: str
    battery_level: float
    requested_energy: float
    window: TimeWindow
    location: Location


# Attribute keys of the incentive model, in weight order.
ATTRIBUTE_KEYS = ("bl", "re", "st", "tp")


def _default_tp_boundaries() -> tuple[TimeWindow, TimeWindow, TimeWindow, TimeWindow]:
    return (
        TimeWindow(parse_clock("09:00"), parse_clock("11:00")),
        TimeWindow(parse_clock("11:00"), parse_clock("13:00")),
        TimeWindow(parse_clock("13:00"), parse_clock("15:00")),
        TimeWindow(parse_clock("15:00"), parse_clock("17:00")),
    )


@dataclass(frozen=True, slots=True)
class ModelConstants:
    """Tunable constants of the incentive model.

    Defaults are the survey-derived values the scoring rules were calibrated
    with; they are injected (not hard-coded at call sites) so sensitivity
    studies can vary them. Note the provision-period rewards intentionally
    sum to 0.88, not 1.0 — they are kept exactly as calibrated, without
    renormalization.
    """

    weight_bl: float = 0.27
    weight_re: float = 0.28
    weight_st: float = 0.23
    weight_tp: float = 0.22
    tp_boundaries: tuple[TimeWindow, ...] = field(
        default_factory=_default_tp_boundaries
    )
    tp_rewards: tuple[float, ...] = (0.18, 0.23, 0.26, 0.21)
    bl_low_threshold: float = 20.0
    bl_high_threshold: float = 80.0
    bl_reward_extreme: float = 1.0
    bl_reward_mid: float = 0.5
    max_energy_distance: float = DEFAULT_MAX_ENERGY_DISTANCE_M

    def __post_init__(self) -> None:
        if len(self.tp_boundaries) != 4 or len(self.tp_rewards) != 4:
            raise DomainError("exactly four provision periods are required")
        for earlier, later in zip(self.tp_boundaries, self.tp_boundaries[1:]):
            if earlier.end != later.start:
                raise DomainError(
                    "provision periods must be contiguous: "
                    f"{earlier.format()} then {later.format()}"
                )
        if not 0 <= self.bl_low_threshold < self.bl_high_threshold <= 100:
            raise DomainError(
                "battery thresholds must satisfy 0 <= low < high <= 100, got "
                f"({self.bl_low_threshold}, {self.bl_high_threshold})"
            )
        if self.max_energy_distance <= 0:
            raise DomainError("max energy distance must be positive")

    @property
    def attribute_weights(self) -> dict[str, float]:
        """Weights keyed by attribute, in the canonical bl/re/st/tp order."""
        return {
            "bl": self.weight_bl,
            "re": self.weight_re,
            "st": self.weight_st,
            "tp": self.weight_tp,
        }


DEFAULT_CONSTANTS = ModelConstants()


def constants_to_dict(constants: ModelConstants) -> dict[str, Any]:
    """Serialize constants to the configuration-document shape."""
    return {
        "attribute_weights": constants.attribute_weights,
        "tp_rewards": list(constants.tp_rewards),
        "tp_boundaries": [w.format() for w in constants.tp_boundaries],
        "bl_low_threshold": constants.bl_low_threshold,
        "bl_high_threshold": constants.bl_high_threshold,
        "bl_reward_extreme": constants.bl_reward_extreme,
        "bl_reward_mid": constants.bl_reward_mid,
        "max_energy_distance_m": constants.max_energy_distance,
    }


def constants_from_dict(doc: dict[str, Any]) -> ModelConstants:
    """Build constants from a configuration document.

    Missing keys fall back to the defaults; unknown keys are rejected so
    typos do not silently configure nothing.
    """
    known = {
        "attribute_weights",
        "tp_rewards",
        "tp_boundaries",
        "bl_low_threshold",
        "bl_high_threshold",
        "bl_reward_extreme",
        "bl_reward_mid",
        "max_energy_distance_m",
    }
    unknown = set(doc) - known
    if unknown:
        raise DomainError(f"unknown constants keys: {sorted(unknown)}")

    kwargs: dict[str, Any] = {}
    if "attribute_weights" in doc:
        weights = doc["attribute_weights"]
        if set(weights) != set(ATTRIBUTE_KEYS):
            raise DomainError(
                f"attribute_weights must have exactly the keys {ATTRIBUTE_KEYS}"
            )
        kwargs.update(
            weight_bl=float(weights["bl"]),
            weight_re=float(weights["re"]),
            weight_st=float(weights["st"]),
            weight_tp=float(weights["tp"]),
        )
    if "tp_rewards" in doc:
        kwargs["tp_rewards"] = tuple(float(r) for r in doc["tp_rewards"])
    if "tp_boundaries" in doc:
        kwargs["tp_boundaries"] = tuple(
            TimeWindow.parse(text) for text in doc["tp_boundaries"]
        )
    for key, attr in (
        ("bl_low_threshold", "bl_low_threshold"),
        ("bl_high_threshold", "bl_high_threshold"),
        ("bl_reward_extreme", "bl_reward_extreme"),
        ("bl_reward_mid", "bl_reward_mid"),
        ("max_energy_distance_m", "max_energy_distance"),
    ):
        if key in doc:
            kwargs[attr] = float(doc[key])
    return ModelConstants(**kwargs)


def load_constants(path: str | Path) -> ModelConstants:
    """Load constants from a JSON configuration file."""
    with open(path, "rb") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid constants file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise DomainError(f"constants file {path} must hold a JSON object")
    return constants_from_dict(doc)


# ---------------------------------------------------------------------------
# Serialization of core objects (fixture and wire schemas)


def location_to_dict(location: Location) -> dict[str, float]:
    return {"x": location.x, "y": location.y}


def window_to_dict(window: TimeWindow) -> dict[str, int]:
    return {"start": window.start, "end": window.end}


def service_to_dict(service: EnergyService) -> dict[str, Any]:
    return {
        "id": service.id,
        "owner_id": service.owner_id,
        "capacity": service.capacity,
        "location": location_to_dict(service.location),
        "window": window_to_dict(service.window),
    }


def request_to_dict(request: EnergyRequest) -> dict[str, Any]:
    return {
        "id": request.id,
        "owner_id": request.owner_id,
        "battery_level": request.battery_level,
        "requested_energy": request.requested_energy,
        "window": window_to_dict(request.window),
        "location": location_to_dict(request.location),
    }


def _window_from_dict(doc: dict[str, Any]) -> TimeWindow:
    try:
        return TimeWindow(int(doc["start"]), int(doc["end"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"invalid window document: {exc}") from None


def _location_from_dict(doc: dict[str, Any]) -> Location:
    try:
        return Location(float(doc["x"]), float(doc["y"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"invalid location document: {exc}") from None


def service_from_dict(doc: dict[str, Any]) -> EnergyService:
    try:
        return EnergyService(
            id=str(doc["id"]),
            owner_id=str(doc["owner_id"]),
            capacity=float(doc["capacity"]),
            location=_location_from_dict(doc["location"]),
            window=_window_from_dict(doc["window"]),
        )
    except KeyError as exc:
        raise DomainError(f"service document missing field {exc}") from None


def request_from_dict(doc: dict[str, Any]) -> EnergyRequest:
    try:
        return EnergyRequest(
            id=str(doc["id"]),
            owner_id=str(doc["owner_id"]),
            battery_level=float(doc["battery_level"]),
            requested_energy=float(doc["requested_energy"]),
            window=_window_from_dict(doc["window"]),
            location=_location_from_dict(doc["location"]),
        )
    except KeyError as exc:
        raise DomainError(f"request document missing field {exc}") from None


# ---------------------------------------------------------------------------
# Instance validation


@dataclass(frozen=True, slots=True)
class ValidationFinding:
    """One violated invariant on one object of a problem instance."""

    subject: str
    field: str
    message: str


def _check_window(subject: str, window: TimeWindow, findings: list[ValidationFinding]) -> None:
    # Re-checked independently of construction; corrupt objects (e.g. from
    # deserialization layers that bypass __init__) must still be caught.
    if not (
        isinstance(window.start, int)
        and isinstance(window.end, int)
        and 0 <= window.start < MINUTES_PER_DAY
        and 0 <= window.end < MINUTES_PER_DAY
    ):
        findings.append(
            ValidationFinding(subject, "window", "window bounds outside the day")
        )
    elif window.start >= window.end:
        findings.append(
            ValidationFinding(
                subject,
                "window",
                f"window start {window.start} does not precede end {window.end}",
            )
        )


def _check_location(subject: str, location: Location, findings: list[ValidationFinding]) -> None:
    if not (math.isfinite(location.x) and math.isfinite(location.y)):
        findings.append(
            ValidationFinding(subject, "location", "coordinates must be finite")
        )


def validate_instance(
    service: EnergyService, requests: list[EnergyRequest]
) -> list[ValidationFinding]:
    """Check every invariant of a problem instance, collecting findings.

    Returns one finding per violated invariant; an empty list means the
    instance is valid. Never raises: findings, not failures.
    """
    findings: list[ValidationFinding] = []
    subject = f"service {service.id}"
    if not service.capacity > 0:
        findings.append(
            ValidationFinding(subject, "capacity", "capacity must be positive")
        )
    if service.capacity > 100:
        findings.append(
            ValidationFinding(
                subject, "capacity", "capacity above 100 battery-percent units"
            )
        )
    _check_location(subject, service.location, findings)
    _check_window(subject, service.window, findings)

    for request in requests:
        subject = f"request {request.id}"
        if not 0 <= request.battery_level <= 100:
            findings.append(
                ValidationFinding(
                    subject,
                    "battery_level",
                    f"battery level {request.battery_level} outside 0..100",
                )
            )
        if not request.requested_energy > 0:
            findings.append(
                ValidationFinding(
                    subject, "requested_energy", "requested energy must be positive"
                )
            )
        _check_window(subject, request.window, findings)
        _check_location(subject, request.location, findings)
    return findings
