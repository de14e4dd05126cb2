"""HTTP endpoints around the composition engine.

The service is stateless: every call carries its full instance or workload
spec, so replies are pure functions of the request body. Domain rule
violations answer 422 with a machine-readable error body.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from ..composition import (
    ALGORITHM_BF,
    ALGORITHM_FCFS,
    BruteForceLimitError,
    compose_bf,
    compose_fcfs,
    compose_ib,
    plan_to_dict,
)
from ..harness import report_to_csv, report_to_dict, run_experiment
from ..model import (
    DEFAULT_CONSTANTS,
    DomainError,
    constants_to_dict,
    validate_instance,
)
from ..selection import select_nearby
from ..workload import fixture_lines, generate_requests, generate_services
from .schemas import BenchRequest, ComposeRequest, GenerateRequest, PlanResponse


def create_app() -> FastAPI:
    app = FastAPI(
        title="chargebroker",
        summary="Composition engine for microcell wireless-energy sharing",
        version="1.0.0",
    )

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": str(exc), "findings": []})

    @app.exception_handler(BruteForceLimitError)
    async def _bf_limit(request: Request, exc: BruteForceLimitError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": str(exc), "findings": []})

    @app.get("/health")
    async def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/constants/default")
    async def default_constants() -> dict:
        return constants_to_dict(DEFAULT_CONSTANTS)

    @app.post("/compose", response_model=PlanResponse, responses={422: {"description": "invalid instance"}})
    async def compose(body: ComposeRequest) -> JSONResponse:
        service = body.service.to_domain()
        requests = [model.to_domain() for model in body.requests]
        findings = validate_instance(service, requests)
        if findings:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "instance failed validation",
                    "findings": [
                        {"subject": f.subject, "field": f.field, "message": f.message}
                        for f in findings
                    ],
                },
            )
        constants = body.constants.to_domain() if body.constants else DEFAULT_CONSTANTS
        scored = select_nearby(service, requests, constants)
        if body.algorithm == ALGORITHM_FCFS:
            plan = compose_fcfs(service, scored)
        elif body.algorithm == ALGORITHM_BF:
            plan = compose_bf(service, scored, limit=body.bf_limit)
        else:
            plan = compose_ib(service, scored)
        return JSONResponse(content=plan_to_dict(plan))

    @app.post("/workload/generate")
    async def generate(body: GenerateRequest) -> PlainTextResponse:
        spec = body.spec.to_domain()
        services = generate_services(spec)
        requests = generate_requests(spec, spec.num_requests)
        payload = "\n".join(fixture_lines(services, requests))
        if payload:
            payload += "\n"
        return PlainTextResponse(payload, media_type="application/x-ndjson")

    @app.post("/bench")
    async def bench(
        body: BenchRequest,
        format: str = Query(default="json", pattern="^(json|csv)$"),
    ) -> Response:
        spec = body.spec.to_domain()
        constants = body.constants.to_domain() if body.constants else DEFAULT_CONSTANTS
        report = run_experiment(
            spec,
            body.algorithms,
            constants,
            bf_limit=body.bf_limit,
            bucket_width=body.bucket_width,
        )
        if format == "csv":
            return PlainTextResponse(report_to_csv(report), media_type="text/csv")
        return JSONResponse(content=report_to_dict(report))

    return app
