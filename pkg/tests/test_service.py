import json

import pytest
from fastapi.testclient import TestClient

from chargebroker.model import DEFAULT_CONSTANTS, constants_to_dict
from chargebroker.service.app import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c


SERVICE = {
    "id": "svc-1",
    "owner_id": "prov-1",
    "capacity": 100.0,
    "location": {"x": 0.0, "y": 0.0},
    "window": {"start": 540, "end": 660},
}

REQUEST = {
    "id": "req-1",
    "owner_id": "cons-1",
    "battery_level": 10.0,
    "requested_energy": 50.0,
    "window": {"start": 540, "end": 570},
    "location": {"x": 1.0, "y": 1.0},
}


def compose_payload(**overrides):
    payload = {"service": SERVICE, "requests": [REQUEST], "algorithm": "ib"}
    payload.update(overrides)
    return payload


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_default_constants_endpoint(client):
    response = client.get("/constants/default")
    assert response.json() == json.loads(json.dumps(constants_to_dict(DEFAULT_CONSTANTS)))


def test_compose_returns_plan(client):
    response = client.post("/compose", json=compose_payload())
    assert response.status_code == 200
    plan = response.json()
    assert plan["algorithm"] == "ib"
    assert [a["request_id"] for a in plan["accepted"]] == ["req-1"]
    assert plan["total_reward"] == pytest.approx(0.6221, abs=1e-9)
    assert plan["remaining_energy"] == pytest.approx(50.0)


@pytest.mark.parametrize("algorithm", ["fcfs", "bf"])
def test_compose_other_algorithms(client, algorithm):
    response = client.post("/compose", json=compose_payload(algorithm=algorithm))
    assert response.status_code == 200
    assert response.json()["algorithm"] == algorithm


def test_compose_unknown_algorithm_rejected(client):
    response = client.post("/compose", json=compose_payload(algorithm="dp"))
    assert response.status_code == 422


def test_compose_validation_findings(client):
    degenerate = dict(REQUEST, window={"start": 570, "end": 570})
    response = client.post("/compose", json=compose_payload(requests=[degenerate]))
    assert response.status_code == 422
    body = response.json()
    assert body["error"] == "instance failed validation"
    assert body["findings"][0]["subject"] == "request req-1"
    assert body["findings"][0]["field"] == "window"


def test_compose_multiple_findings_collected(client):
    bad_service = dict(SERVICE, capacity=0.0)
    bad_request = dict(REQUEST, battery_level=300.0)
    response = client.post(
        "/compose", json=compose_payload(service=bad_service, requests=[bad_request])
    )
    assert response.status_code == 422
    subjects = {f["subject"] for f in response.json()["findings"]}
    assert subjects == {"service svc-1", "request req-1"}


def test_compose_bf_limit(client):
    requests = [
        dict(REQUEST, id=f"req-{i:02d}", window={"start": 540 + i, "end": 560 + i}, requested_energy=1.0)
        for i in range(6)
    ]
    response = client.post(
        "/compose", json=compose_payload(requests=requests, algorithm="bf", bf_limit=5)
    )
    assert response.status_code == 422
    assert "enumeration limit of 5" in response.json()["error"]


def test_compose_with_constants_override(client):
    # Shrink transfer range below the request's distance: nothing selectable.
    response = client.post(
        "/compose",
        json=compose_payload(constants={"max_energy_distance_m": 1.0}),
    )
    assert response.status_code == 200
    assert response.json()["accepted"] == []


def test_compose_rejects_unknown_constants_key(client):
    response = client.post(
        "/compose", json=compose_payload(constants={"max_distance": 1.0})
    )
    assert response.status_code == 422


def test_compose_rejects_malformed_shape(client):
    response = client.post("/compose", json={"service": SERVICE})
    assert response.status_code == 422


def test_generate_returns_fixture_lines(client):
    response = client.post(
        "/workload/generate", json={"spec": {"num_services": 2, "num_requests": 3, "seed": 4}}
    )
    assert response.status_code == 200
    lines = [json.loads(line) for line in response.text.splitlines()]
    assert [doc["type"] for doc in lines] == ["service", "service", "request", "request", "request"]


def test_generate_rejects_bad_spec(client):
    response = client.post("/workload/generate", json={"spec": {"cell_radius": -1.0}})
    assert response.status_code == 422


def test_bench_json(client):
    response = client.post(
        "/bench",
        json={"spec": {"num_services": 15, "num_requests": 40, "seed": 8}, "algorithms": ["ib", "fcfs"]},
    )
    assert response.status_code == 200
    report = response.json()
    assert report["algorithms"] == ["ib", "fcfs"]
    assert report["spec"]["num_services"] == 15
    assert len(report["rows"]) == 30


def test_bench_csv(client):
    response = client.post(
        "/bench",
        params={"format": "csv"},
        json={"spec": {"num_services": 15, "num_requests": 40, "seed": 8}, "algorithms": ["ib"]},
    )
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    assert response.text.startswith("algorithm,bucket_lo,bucket_hi,")


def test_bench_rejects_unknown_format(client):
    response = client.post(
        "/bench", params={"format": "yaml"}, json={"spec": {"num_services": 1}}
    )
    assert response.status_code == 422


def test_bench_rejects_unknown_algorithm(client):
    response = client.post(
        "/bench", json={"spec": {"num_services": 1}, "algorithms": ["dp"]}
    )
    assert response.status_code == 422
