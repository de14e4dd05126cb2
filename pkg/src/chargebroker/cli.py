"""Command-line client for the composition service.

Every data command is a thin wrapper over the HTTP API: by default requests
run against an in-process copy of the service (no network, no extra
process), and ``--url`` or ``CHARGEBROKER_URL`` points them at a remote
deployment instead. Exit codes: 0 success, 1 validation or configuration
error, 2 I/O error (unreadable or unwritable files, unreachable service).
"""

from __future__ import annotations

import json
import sys
from typing import Any

import click
import httpx

from .model import DomainError

_SPEC_FLAG_HELP = "JSON file with workload spec overrides."
_CONSTANTS_FLAG_HELP = "JSON file with scoring-constant overrides."


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=120.0)
    # In-process transport: the CLI works offline, same contract as remote.
    from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _checked(response: httpx.Response) -> httpx.Response:
    if response.status_code >= 400:
        try:
            body = response.json()
        except ValueError:
            body = None
        if isinstance(body, dict):
            message = body.get("error") or json.dumps(body)
            findings = body.get("findings") or []
            for finding in findings:
                message += f"\n  {finding['subject']}: {finding['message']}"
        else:
            message = response.text
        raise click.ClickException(f"HTTP {response.status_code}: {message}")
    return response


def _load_json_file(path: str | None, what: str) -> dict[str, Any]:
    """Read a JSON object from ``path``; missing flag means empty overrides."""
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise click.ClickException(f"{what} file {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise click.ClickException(f"{what} file {path} must hold a JSON object")
    return doc


def _write_output(out: str, text: str) -> None:
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


@click.group()
@click.option(
    "--url",
    envvar="CHARGEBROKER_URL",
    default=None,
    help="Base URL of a running service; omit to run in process.",
)
@click.pass_context
def cli(ctx: click.Context, url: str | None) -> None:
    """Compose wireless-energy charging schedules and benchmark algorithms."""
    ctx.obj = url


@cli.command()
@click.option("--seed", type=int, default=None, help="Workload seed override.")
@click.option("--services", type=int, default=None, help="Number of advertisements.")
@click.option("--requests", type=int, default=None, help="Number of charging requests.")
@click.option("--spec", "spec_path", type=str, default=None, help=_SPEC_FLAG_HELP)
@click.option("--out", default="-", show_default=True, help="Output path, - for stdout.")
@click.pass_obj
def generate(
    url: str | None,
    seed: int | None,
    services: int | None,
    requests: int | None,
    spec_path: str | None,
    out: str,
) -> None:
    """Generate a workload fixture (JSON lines, one object per line)."""
    doc = _load_json_file(spec_path, "workload spec")
    if seed is not None:
        doc["seed"] = seed
    if services is not None:
        doc["num_services"] = services
    if requests is not None:
        doc["num_requests"] = requests
    with _client(url) as client:
        response = _checked(client.post("/workload/generate", json={"spec": doc}))
    _write_output(out, response.text)


def _service_document(value: str) -> dict[str, Any]:
    """Accept the service as inline JSON text or as a path to a JSON file."""
    text = value.strip()
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise click.ClickException(f"inline service JSON is invalid: {exc}") from None
    else:
        with open(value, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise click.ClickException(
                    f"service file {value} is not valid JSON: {exc}"
                ) from None
    if isinstance(doc, dict) and doc.get("type") == "service":
        doc = {k: v for k, v in doc.items() if k != "type"}
    if not isinstance(doc, dict):
        raise click.ClickException("service document must be a JSON object")
    return doc


def _request_documents(path: str) -> list[dict[str, Any]]:
    """Read requests from a JSON array or JSON-lines file.

    Type-tagged fixture lines are accepted; service lines are skipped so a
    generated fixture can be used as a request pool directly.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read().strip()
    if not text:
        return []
    try:
        if text.startswith("["):
            docs = json.loads(text)
        else:
            docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"requests file {path} is not valid JSON: {exc}") from None
    out: list[dict[str, Any]] = []
    for doc in docs:
        if not isinstance(doc, dict):
            raise click.ClickException(f"requests file {path} must hold JSON objects")
        kind = doc.get("type", "request")
        if kind == "service":
            continue
        if kind != "request":
            raise click.ClickException(f"requests file {path}: unknown type tag {kind!r}")
        out.append({k: v for k, v in doc.items() if k != "type"})
    return out


@cli.command()
@click.option(
    "--service",
    "service_value",
    required=True,
    help="Provider advertisement: inline JSON or a path to a JSON file.",
)
@click.option(
    "--requests",
    "requests_path",
    required=True,
    help="Charging requests: JSON array or JSON-lines file (fixtures work).",
)
@click.option(
    "--algo",
    type=click.Choice(["ib", "fcfs", "bf"]),
    default="ib",
    show_default=True,
    help="Composition algorithm.",
)
@click.option("--constants", "constants_path", default=None, help=_CONSTANTS_FLAG_HELP)
@click.option("--bf-limit", type=int, default=20, show_default=True, help="Exhaustive-search size cap.")
@click.option("--out", default="-", show_default=True, help="Output path, - for stdout.")
@click.pass_obj
def compose(
    url: str | None,
    service_value: str,
    requests_path: str,
    algo: str,
    constants_path: str | None,
    bf_limit: int,
    out: str,
) -> None:
    """Compose a schedule for one service; prints the plan as JSON."""
    payload: dict[str, Any] = {
        "service": _service_document(service_value),
        "requests": _request_documents(requests_path),
        "algorithm": algo,
        "bf_limit": bf_limit,
    }
    constants_doc = _load_json_file(constants_path, "constants")
    if constants_doc:
        payload["constants"] = constants_doc
    with _client(url) as client:
        response = _checked(client.post("/compose", json=payload))
    _write_output(out, json.dumps(response.json(), indent=2) + "\n")


@cli.command()
@click.option("--spec", "spec_path", type=str, default=None, help=_SPEC_FLAG_HELP)
@click.option("--seed", type=int, default=None, help="Workload seed override.")
@click.option(
    "--algos",
    default="ib,fcfs,bf",
    show_default=True,
    help="Comma-separated algorithms to benchmark.",
)
@click.option(
    "--format",
    "format_",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="Report format.",
)
@click.option("--out", default="-", show_default=True, help="Output path, - for stdout.")
@click.option("--bf-limit", type=int, default=20, show_default=True, help="Exhaustive-search size cap.")
@click.option("--bucket-width", type=int, default=50, show_default=True, help="Stay-duration bucket width, minutes.")
@click.option("--constants", "constants_path", default=None, help=_CONSTANTS_FLAG_HELP)
@click.pass_obj
def bench(
    url: str | None,
    spec_path: str | None,
    seed: int | None,
    algos: str,
    format_: str,
    out: str,
    bf_limit: int,
    bucket_width: int,
    constants_path: str | None,
) -> None:
    """Benchmark composition algorithms over a synthetic workload."""
    doc = _load_json_file(spec_path, "workload spec")
    if seed is not None:
        doc["seed"] = seed
    payload: dict[str, Any] = {
        "spec": doc,
        "algorithms": [name.strip() for name in algos.split(",") if name.strip()],
        "bf_limit": bf_limit,
        "bucket_width": bucket_width,
    }
    constants_doc = _load_json_file(constants_path, "constants")
    if constants_doc:
        payload["constants"] = constants_doc
    with _client(url) as client:
        response = _checked(client.post("/bench", params={"format": format_}, json=payload))
    _write_output(out, response.text)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Entry point mapping failures onto the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except httpx.TransportError as exc:
        click.echo(f"error: cannot reach service: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
