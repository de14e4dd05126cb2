"""Benchmark harness: run composition algorithms over a workload and report.

One experiment synthesizes a workload, runs each requested algorithm on
every advertisement against the shared request pool, and aggregates rewards
by provider stay-duration bucket. Everything except wall-clock timings is a
pure function of the workload spec, so two runs with the same seed agree
byte for byte once timing columns are set aside.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Any, Sequence

from .composition import (
    ALGORITHM_BF,
    ALGORITHM_FCFS,
    ALGORITHM_IB,
    ALGORITHMS,
    DEFAULT_BF_LIMIT,
    CompositionPlan,
    compose_bf,
    compose_fcfs,
    compose_ib,
)
from .model import (
    DEFAULT_CONSTANTS,
    DomainError,
    ModelConstants,
    constants_to_dict,
)
from .selection import ScoredRequest, select_nearby
from .workload import WorkloadSpec, generate_requests, generate_services, spec_to_dict

# Reward comparisons below this gap are ties, not dominance violations.
DOMINANCE_TOLERANCE = 1e-12

CSV_COLUMNS = (
    "algorithm",
    "bucket_lo",
    "bucket_hi",
    "avg_reward",
    "avg_remaining_energy",
    "avg_exec_us",
    "n",
)


@dataclass(frozen=True, slots=True)
class InstanceResult:
    """Outcome of one algorithm on one advertisement."""

    service_id: str
    algorithm: str
    stay_duration: int
    bucket_lo: int
    bucket_hi: int
    num_scored: int
    num_accepted: int
    total_reward: float
    remaining_energy: float
    exec_us: float
    scored_digest: str


@dataclass(frozen=True, slots=True)
class BucketRow:
    """Per-bucket averages for one algorithm."""

    algorithm: str
    bucket_lo: int
    bucket_hi: int
    avg_reward: float
    avg_remaining_energy: float
    avg_exec_us: float
    n: int


@dataclass(frozen=True, slots=True)
class ExperimentReport:
    spec: WorkloadSpec
    constants: ModelConstants
    algorithms: tuple[str, ...]
    bf_limit: int
    bucket_edges: tuple[int, ...]
    rows: tuple[InstanceResult, ...]
    buckets: tuple[BucketRow, ...]
    bf_skipped: tuple[str, ...]
    fcfs_over_ib: tuple[str, ...]
    ib_over_bf: tuple[str, ...]


def stay_time_buckets(lo: int, hi: int, width: int = 50) -> tuple[int, ...]:
    """Bucket edges: the range start, then every multiple of width up to hi.

    >>> stay_time_buckets(10, 200)
    (10, 50, 100, 150, 200)
    """
    if width <= 0:
        raise DomainError("bucket width must be positive")
    if hi <= lo:
        raise DomainError("bucket range is empty")
    edges = [lo]
    mark = (lo // width + 1) * width
    while mark < hi:
        edges.append(mark)
        mark += width
    edges.append(hi)
    return tuple(edges)


def _bucket_of(duration: int, edges: Sequence[int]) -> tuple[int, int]:
    # Intervals are half-open except the last, which is closed.
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        last = i == len(edges) - 2
        if lo <= duration < hi or (last and duration == hi):
            return lo, hi
    raise DomainError(f"stay duration {duration} falls outside buckets {tuple(edges)}")


def scored_digest(scored: Sequence[ScoredRequest]) -> str:
    """Digest of the scored set: identical across algorithm runs by design."""
    h = hashlib.sha256()
    for item in scored:
        h.update(item.request.id.encode())
        h.update(b"\x00")
        h.update(item.reward.total.hex().encode())
        h.update(b"\x00")
    return h.hexdigest()


def _canonical_algorithms(algorithms: Sequence[str]) -> tuple[str, ...]:
    unknown = [name for name in algorithms if name not in ALGORITHMS]
    if unknown:
        raise DomainError(
            f"unknown algorithms {unknown}; choose from {list(ALGORITHMS)}"
        )
    requested = set(algorithms)
    return tuple(name for name in (ALGORITHM_IB, ALGORITHM_FCFS, ALGORITHM_BF) if name in requested)


def run_experiment(
    spec: WorkloadSpec,
    algorithms: Sequence[str] = ALGORITHMS,
    constants: ModelConstants = DEFAULT_CONSTANTS,
    *,
    bf_limit: int = DEFAULT_BF_LIMIT,
    bucket_width: int = 50,
) -> ExperimentReport:
    """Run the benchmark an advertisement at a time.

    Advertisements whose scored set exceeds ``bf_limit`` skip the exhaustive
    algorithm and are listed in ``bf_skipped`` rather than failing the run.
    """
    algos = _canonical_algorithms(algorithms)
    edges = stay_time_buckets(
        spec.service_duration_range[0], spec.service_duration_range[1], bucket_width
    )
    services = generate_services(spec)
    requests = generate_requests(spec, spec.num_requests)

    rows: list[InstanceResult] = []
    bf_skipped: list[str] = []
    fcfs_over_ib: list[str] = []
    ib_over_bf: list[str] = []

    for service in services:
        scored = select_nearby(service, requests, constants)
        digest = scored_digest(scored)
        duration = service.window.duration()
        bucket_lo, bucket_hi = _bucket_of(duration, edges)
        plans: dict[str, CompositionPlan] = {}
        for algorithm in algos:
            if algorithm == ALGORITHM_BF and len(scored) > bf_limit:
                bf_skipped.append(service.id)
                continue
            started = time.perf_counter_ns()
            if algorithm == ALGORITHM_IB:
                plan = compose_ib(service, scored)
            elif algorithm == ALGORITHM_FCFS:
                plan = compose_fcfs(service, scored)
            else:
                plan = compose_bf(service, scored, limit=bf_limit)
            elapsed_us = (time.perf_counter_ns() - started) / 1000.0
            plans[algorithm] = plan
            rows.append(
                InstanceResult(
                    service_id=service.id,
                    algorithm=algorithm,
                    stay_duration=duration,
                    bucket_lo=bucket_lo,
                    bucket_hi=bucket_hi,
                    num_scored=len(scored),
                    num_accepted=len(plan.accepted),
                    total_reward=plan.total_reward,
                    remaining_energy=plan.remaining_energy,
                    exec_us=elapsed_us,
                    scored_digest=digest,
                )
            )
        ib_plan = plans.get(ALGORITHM_IB)
        fcfs_plan = plans.get(ALGORITHM_FCFS)
        bf_plan = plans.get(ALGORITHM_BF)
        if ib_plan and fcfs_plan and fcfs_plan.total_reward > ib_plan.total_reward + DOMINANCE_TOLERANCE:
            fcfs_over_ib.append(service.id)
        if ib_plan and bf_plan and ib_plan.total_reward > bf_plan.total_reward + DOMINANCE_TOLERANCE:
            ib_over_bf.append(service.id)

    buckets: list[BucketRow] = []
    for algorithm in algos:
        for i in range(len(edges) - 1):
            lo, hi = edges[i], edges[i + 1]
            members = [
                row
                for row in rows
                if row.algorithm == algorithm and row.bucket_lo == lo and row.bucket_hi == hi
            ]
            if not members:
                continue
            buckets.append(
                BucketRow(
                    algorithm=algorithm,
                    bucket_lo=lo,
                    bucket_hi=hi,
                    avg_reward=fmean(row.total_reward for row in members),
                    avg_remaining_energy=fmean(row.remaining_energy for row in members),
                    avg_exec_us=fmean(row.exec_us for row in members),
                    n=len(members),
                )
            )

    return ExperimentReport(
        spec=spec,
        constants=constants,
        algorithms=algos,
        bf_limit=bf_limit,
        bucket_edges=edges,
        rows=tuple(rows),
        buckets=tuple(buckets),
        bf_skipped=tuple(bf_skipped),
        fcfs_over_ib=tuple(fcfs_over_ib),
        ib_over_bf=tuple(ib_over_bf),
    )


def _fmt(value: float) -> str:
    return format(value, ".12g")


def report_to_dict(report: ExperimentReport) -> dict[str, Any]:
    return {
        "spec": spec_to_dict(report.spec),
        "constants": constants_to_dict(report.constants),
        "algorithms": list(report.algorithms),
        "bf_limit": report.bf_limit,
        "bucket_edges": list(report.bucket_edges),
        "rows": [
            {
                "service_id": row.service_id,
                "algorithm": row.algorithm,
                "stay_duration": row.stay_duration,
                "bucket_lo": row.bucket_lo,
                "bucket_hi": row.bucket_hi,
                "num_scored": row.num_scored,
                "num_accepted": row.num_accepted,
                "total_reward": row.total_reward,
                "remaining_energy": row.remaining_energy,
                "exec_us": row.exec_us,
                "scored_digest": row.scored_digest,
            }
            for row in report.rows
        ],
        "buckets": [
            {
                "algorithm": row.algorithm,
                "bucket_lo": row.bucket_lo,
                "bucket_hi": row.bucket_hi,
                "avg_reward": row.avg_reward,
                "avg_remaining_energy": row.avg_remaining_energy,
                "avg_exec_us": row.avg_exec_us,
                "n": row.n,
            }
            for row in report.buckets
        ],
        "bf_skipped": list(report.bf_skipped),
        "fcfs_over_ib": list(report.fcfs_over_ib),
        "ib_over_bf": list(report.ib_over_bf),
    }


def report_to_csv(report: ExperimentReport) -> str:
    """Bucket summary as CSV; floats carry 12 significant digits."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.buckets:
        writer.writerow(
            [
                row.algorithm,
                row.bucket_lo,
                row.bucket_hi,
                _fmt(row.avg_reward),
                _fmt(row.avg_remaining_energy),
                _fmt(row.avg_exec_us),
                row.n,
            ]
        )
    return out.getvalue()


def write_report(report: ExperimentReport, format: str, destination: str | Path) -> None:
    """Serialize the report to ``destination`` as ``json`` or ``csv``."""
    if format == "json":
        payload = json.dumps(report_to_dict(report), indent=2) + "\n"
    elif format == "csv":
        payload = report_to_csv(report)
    else:
        raise DomainError(f"unknown report format {format!r}; use json or csv")
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write report to {destination}: {exc}") from exc
