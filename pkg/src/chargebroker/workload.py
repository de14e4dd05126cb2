"""Workload synthesis and ingestion for benchmark runs.

Instances are either synthesized from a seeded spec (uniform draws over the
configured ranges, the minimal assumption for "random") or ingested from a
transaction-log CSV whose rows become charging requests. All randomness
flows through per-purpose streams derived from the spec seed, so any output
is a pure function of (spec, seed, count).
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, Iterable, TextIO

from .model import (
    MINUTES_PER_DAY,
    DomainError,
    EnergyRequest,
    EnergyService,
    Location,
    TimeWindow,
    parse_clock,
    request_from_dict,
    request_to_dict,
    service_from_dict,
    service_to_dict,
)


def _default_day_window() -> TimeWindow:
    return TimeWindow(parse_clock("09:00"), parse_clock("17:00"))


@dataclass(frozen=True, slots=True)
class WorkloadSpec:
    """Shape of a synthetic benchmark workload.

    Ranges are closed and in the units of the core model (minutes,
    battery-percent, meters). Defaults mirror the benchmark protocol:
    2000 advertisements against a 560-request day inside 09:00-17:00.
    """

    seed: int = 0
    num_services: int = 2000
    num_requests: int = 560
    service_duration_range: tuple[int, int] = (10, 200)
    request_duration_range: tuple[int, int] = (5, 30)
    provided_energy_range: tuple[float, float] = (50.0, 100.0)
    requested_energy_range: tuple[float, float] = (1.0, 100.0)
    battery_level_range: tuple[float, float] = (1.0, 80.0)
    day_window: TimeWindow = field(default_factory=_default_day_window)
    cell_radius: float = 10.0

    def __post_init__(self) -> None:
        if self.num_services < 0 or self.num_requests < 0:
            raise DomainError("workload counts must be non-negative")
        for name in (
            "service_duration_range",
            "request_duration_range",
            "provided_energy_range",
            "requested_energy_range",
            "battery_level_range",
        ):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise DomainError(f"{name} is empty: ({lo}, {hi})")
        if self.service_duration_range[0] < 1 or self.request_duration_range[0] < 1:
            raise DomainError("durations must be at least one minute")
        if self.provided_energy_range[0] <= 0 or self.provided_energy_range[1] > 100:
            raise DomainError("provided energy must stay within (0, 100]")
        if self.requested_energy_range[0] <= 0:
            raise DomainError("requested energy must be positive")
        lo, hi = self.battery_level_range
        if lo < 0 or hi > 100:
            raise DomainError("battery level range must stay within 0..100")
        if self.cell_radius <= 0:
            raise DomainError("cell radius must be positive")


def spec_to_dict(spec: WorkloadSpec) -> dict[str, Any]:
    return {
        "seed": spec.seed,
        "num_services": spec.num_services,
        "num_requests": spec.num_requests,
        "service_duration_range": list(spec.service_duration_range),
        "request_duration_range": list(spec.request_duration_range),
        "provided_energy_range": list(spec.provided_energy_range),
        "requested_energy_range": list(spec.requested_energy_range),
        "battery_level_range": list(spec.battery_level_range),
        "day_window": spec.day_window.format(),
        "cell_radius": spec.cell_radius,
    }


def spec_from_dict(doc: dict[str, Any]) -> WorkloadSpec:
    """Build a spec from its JSON document; omitted keys keep defaults."""
    known = set(spec_to_dict(WorkloadSpec()))
    unknown = set(doc) - known
    if unknown:
        raise DomainError(f"unknown workload spec keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for key in ("seed", "num_services", "num_requests"):
        if key in doc:
            kwargs[key] = int(doc[key])
    for key in ("service_duration_range", "request_duration_range"):
        if key in doc:
            lo, hi = doc[key]
            kwargs[key] = (int(lo), int(hi))
    for key in (
        "provided_energy_range",
        "requested_energy_range",
        "battery_level_range",
    ):
        if key in doc:
            lo, hi = doc[key]
            kwargs[key] = (float(lo), float(hi))
    if "day_window" in doc:
        kwargs["day_window"] = TimeWindow.parse(doc["day_window"])
    if "cell_radius" in doc:
        kwargs["cell_radius"] = float(doc["cell_radius"])
    return WorkloadSpec(**kwargs)


def load_workload_spec(path: str | Path) -> WorkloadSpec:
    with open(path, "rb") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid workload spec file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise DomainError(f"workload spec file {path} must hold a JSON object")
    return spec_from_dict(doc)


def _stream(spec: WorkloadSpec, purpose: str) -> random.Random:
    # Seeding from a string hashes via sha512 (random.seed version 2), which
    # is stable across platforms and runs.
    return random.Random(f"{spec.seed}:{purpose}")


def _point_in_cell(rng: random.Random, radius: float) -> Location:
    r = radius * math.sqrt(rng.random())
    theta = rng.random() * 2.0 * math.pi
    return Location(r * math.cos(theta), r * math.sin(theta))


def generate_services(spec: WorkloadSpec) -> list[EnergyService]:
    """Synthesize provider advertisements, seeded and deterministic."""
    rng = _stream(spec, "services")
    day = spec.day_window
    lo, hi = spec.service_duration_range
    hi = min(hi, day.duration())
    services = []
    for i in range(spec.num_services):
        duration = rng.randint(lo, hi)
        start = rng.randint(day.start, day.end - duration)
        capacity = rng.uniform(*spec.provided_energy_range)
        location = _point_in_cell(rng, spec.cell_radius)
        services.append(
            EnergyService(
                id=f"svc-{i:04d}",
                owner_id=f"prov-{i:04d}",
                capacity=capacity,
                location=location,
                window=TimeWindow(start, start + duration),
            )
        )
    return services


def _draw_request(
    rng: random.Random, spec: WorkloadSpec, index: int, start: int
) -> EnergyRequest:
    # Stay duration is drawn then clipped so the window never escapes the day.
    duration = rng.randint(*spec.request_duration_range)
    end = min(start + duration, spec.day_window.end)
    battery = rng.uniform(*spec.battery_level_range)
    energy = rng.uniform(*spec.requested_energy_range)
    location = _point_in_cell(rng, spec.cell_radius)
    return EnergyRequest(
        id=f"req-{index:05d}",
        owner_id=f"cons-{index:05d}",
        battery_level=battery,
        requested_energy=energy,
        window=TimeWindow(start, end),
        location=location,
    )


def generate_requests(spec: WorkloadSpec, count: int) -> list[EnergyRequest]:
    """Synthesize charging requests, seeded and deterministic."""
    rng = _stream(spec, "requests")
    day = spec.day_window
    requests = []
    for i in range(count):
        start = rng.randint(day.start, day.end - 1)
        requests.append(_draw_request(rng, spec, i, start))
    return requests


# ---------------------------------------------------------------------------
# Transaction-log ingestion

TRANSACTION_COLUMNS = ("date", "time", "x", "y", "shop_id")


@dataclass(frozen=True, slots=True)
class TransactionRecord:
    """One parsed row of a transaction log."""

    date: datetime.date
    time: int  # minutes since midnight
    location: Location
    shop_id: str


class IngestError(DomainError):
    """A transaction log did not parse; carries row and column context."""

    def __init__(self, row: int, column: str, message: str) -> None:
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


def _open_text(source: str | Path | BinaryIO | TextIO) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def parse_transactions(source: str | Path | BinaryIO | TextIO) -> list[TransactionRecord]:
    """Parse a transaction CSV (header ``date,time,x,y,shop_id``, any order).

    Raises :class:`IngestError` naming the offending row and column; an
    empty file (no data rows) yields an empty list.
    """
    stream = _open_text(source)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return []
    names = [name.strip().lower() for name in header]
    missing = set(TRANSACTION_COLUMNS) - set(names)
    if missing:
        raise IngestError(1, ",".join(sorted(missing)), "missing header column")
    index = {name: names.index(name) for name in TRANSACTION_COLUMNS}

    records = []
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < len(names):
            raise IngestError(row_number, "*", f"expected {len(names)} fields, got {len(row)}")

        def cell(column: str) -> str:
            return row[index[column]].strip()

        try:
            date = datetime.date.fromisoformat(cell("date"))
        except ValueError:
            raise IngestError(row_number, "date", f"invalid date {cell('date')!r}") from None
        try:
            minutes = parse_clock(cell("time"))
        except DomainError:
            raise IngestError(row_number, "time", f"invalid time {cell('time')!r}") from None
        coords = {}
        for column in ("x", "y"):
            try:
                value = float(cell(column))
            except ValueError:
                raise IngestError(
                    row_number, column, f"invalid coordinate {cell(column)!r}"
                ) from None
            if not math.isfinite(value):
                raise IngestError(row_number, column, "coordinate must be finite")
            coords[column] = value
        records.append(
            TransactionRecord(
                date=date,
                time=minutes,
                location=Location(coords["x"], coords["y"]),
                shop_id=cell("shop_id"),
            )
        )
    return records


def ingest_transactions(
    source: str | Path | BinaryIO | TextIO, spec: WorkloadSpec
) -> list[EnergyRequest]:
    """Turn transaction records into charging requests, one per row.

    The record supplies arrival time and location; stay duration, battery
    level and requested energy are drawn from the spec ranges through the
    seeded stream, so a fixed (file, seed) pair always yields the same
    requests.
    """
    records = parse_transactions(source)
    rng = _stream(spec, "ingest")
    requests = []
    for i, record in enumerate(records):
        duration = rng.randint(*spec.request_duration_range)
        start = record.time
        end = min(start + duration, MINUTES_PER_DAY - 1)
        if end <= start:  # stay spills past midnight; pin it to the day edge
            start = end - 1
        battery = rng.uniform(*spec.battery_level_range)
        energy = rng.uniform(*spec.requested_energy_range)
        requests.append(
            EnergyRequest(
                id=f"req-{i:05d}",
                owner_id=f"cons-{i:05d}",
                battery_level=battery,
                requested_energy=energy,
                window=TimeWindow(start, end),
                location=record.location,
            )
        )
    return requests


def sample_transactions_path() -> Path:
    """Path of the bundled month-long synthetic transaction log."""
    return Path(__file__).parent / "data" / "transactions_sample.csv"


def write_sample_transactions(
    path: str | Path,
    *,
    days: int = 30,
    rows_per_day: int = 560,
    seed: int = 20240401,
    shop_id: str = "shop-1",
    radius: float = 10.0,
    first_day: datetime.date = datetime.date(2024, 4, 1),
) -> int:
    """Write a synthetic transaction log with the ingestion schema.

    Stands in for proprietary point-of-sale data: one shop, ``days`` calendar
    days, ``rows_per_day`` business-hours transactions each. Returns the
    number of rows written.
    """
    rng = random.Random(f"{seed}:transactions")
    open_at, close_at = parse_clock("09:00"), parse_clock("17:00")
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRANSACTION_COLUMNS)
        for day in range(days):
            date = first_day + datetime.timedelta(days=day)
            times = sorted(rng.randint(open_at, close_at - 1) for _ in range(rows_per_day))
            for minutes in times:
                r = radius * math.sqrt(rng.random())
                theta = rng.random() * 2.0 * math.pi
                writer.writerow(
                    [
                        date.isoformat(),
                        f"{minutes // 60:02d}:{minutes % 60:02d}",
                        f"{r * math.cos(theta):.3f}",
                        f"{r * math.sin(theta):.3f}",
                        shop_id,
                    ]
                )
                rows += 1
    return rows


# ---------------------------------------------------------------------------
# Fixture files: JSON lines, one object per line with a type tag


def fixture_lines(
    services: Iterable[EnergyService], requests: Iterable[EnergyRequest]
) -> list[str]:
    lines = []
    for service in services:
        lines.append(json.dumps({"type": "service", **service_to_dict(service)}))
    for request in requests:
        lines.append(json.dumps({"type": "request", **request_to_dict(request)}))
    return lines


def write_fixture(
    path: str | Path,
    services: Iterable[EnergyService],
    requests: Iterable[EnergyRequest],
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in fixture_lines(services, requests):
            fh.write(line + "\n")


def read_fixture(path: str | Path) -> tuple[list[EnergyService], list[EnergyRequest]]:
    """Read a JSONL fixture back into services and requests, input order kept."""
    services: list[EnergyService] = []
    requests: list[EnergyRequest] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DomainError(f"fixture line {line_number}: invalid JSON ({exc})") from None
            kind = doc.pop("type", None)
            if kind == "service":
                services.append(service_from_dict(doc))
            elif kind == "request":
                requests.append(request_from_dict(doc))
            else:
                raise DomainError(
                    f"fixture line {line_number}: unknown type tag {kind!r}"
                )
    return services, requests
