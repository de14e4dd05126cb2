import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargebroker.model import DomainError, TimeWindow
from chargebroker.workload import (
    IngestError,
    WorkloadSpec,
    generate_requests,
    generate_services,
    ingest_transactions,
    load_workload_spec,
    parse_transactions,
    read_fixture,
    sample_transactions_path,
    spec_from_dict,
    spec_to_dict,
    write_fixture,
)

SMALL = WorkloadSpec(seed=11, num_services=40, num_requests=60)


def test_generation_is_deterministic():
    assert generate_services(SMALL) == generate_services(SMALL)
    assert generate_requests(SMALL, 60) == generate_requests(SMALL, 60)


def test_different_seeds_differ():
    other = WorkloadSpec(seed=12, num_services=40, num_requests=60)
    assert generate_services(SMALL) != generate_services(other)


def test_zero_counts():
    spec = WorkloadSpec(num_services=0)
    assert generate_services(spec) == []
    assert generate_requests(spec, 0) == []


def test_service_fields_within_ranges():
    for service in generate_services(SMALL):
        assert 50.0 <= service.capacity <= 100.0
        assert 10 <= service.window.duration() <= 200
        assert SMALL.day_window.contains(service.window)
        assert service.location.x**2 + service.location.y**2 <= SMALL.cell_radius**2 + 1e-9


def test_request_fields_within_ranges():
    for request in generate_requests(SMALL, 60):
        assert 1.0 <= request.battery_level <= 80.0
        assert 1.0 <= request.requested_energy <= 100.0
        assert SMALL.day_window.contains(request.window)
        assert request.window.duration() <= 30


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**63 - 1))
def test_ranges_hold_across_seeds(seed):
    spec = WorkloadSpec(seed=seed, num_services=5, num_requests=8)
    for service in generate_services(spec):
        assert 50.0 <= service.capacity <= 100.0
        assert spec.day_window.contains(service.window)
    for request in generate_requests(spec, 8):
        assert 1.0 <= request.battery_level <= 80.0
        assert spec.day_window.contains(request.window)


def test_ids_are_stable_and_unique():
    services = generate_services(SMALL)
    assert services[0].id == "svc-0000"
    assert len({s.id for s in services}) == len(services)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"num_services": -1},
        {"service_duration_range": (200, 10)},
        {"request_duration_range": (0, 30)},
        {"provided_energy_range": (0.0, 100.0)},
        {"provided_energy_range": (50.0, 101.0)},
        {"requested_energy_range": (0.0, 100.0)},
        {"battery_level_range": (-1.0, 80.0)},
        {"battery_level_range": (1.0, 101.0)},
        {"cell_radius": 0.0},
    ],
)
def test_spec_rejects_bad_ranges(kwargs):
    with pytest.raises(DomainError):
        WorkloadSpec(**kwargs)


def test_spec_dict_round_trip():
    spec = WorkloadSpec(seed=9, num_requests=100, cell_radius=3.5)
    doc = spec_to_dict(spec)
    assert doc["day_window"] == "09:00-17:00"
    assert spec_from_dict(doc) == spec


def test_spec_from_dict_defaults_and_unknown_keys():
    assert spec_from_dict({}) == WorkloadSpec()
    assert spec_from_dict({"seed": 5}).seed == 5
    with pytest.raises(DomainError, match="unknown workload spec keys"):
        spec_from_dict({"seeds": 5})


def test_load_workload_spec(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"seed": 3, "day_window": "10:00-16:00"}))
    spec = load_workload_spec(path)
    assert spec.seed == 3
    assert spec.day_window == TimeWindow.parse("10:00-16:00")


def test_load_workload_spec_rejects_malformed(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text("[1, 2]")
    with pytest.raises(DomainError, match="JSON object"):
        load_workload_spec(path)


# Transaction ingestion ------------------------------------------------------

WELL_FORMED = """\
date,time,x,y,shop_id
2024-04-01,09:15,1.5,-2.0,shop-1
2024-04-01,10:00,0.0,0.5,shop-1
2024-04-02,16:45,3.25,1.0,shop-1
"""


def test_ingest_well_formed_rows():
    requests = ingest_transactions(io.StringIO(WELL_FORMED), SMALL)
    assert len(requests) == 3
    assert requests[0].window.start == 9 * 60 + 15
    for request in requests:
        assert 1.0 <= request.battery_level <= 80.0
        assert 1.0 <= request.requested_energy <= 100.0
        assert 5 <= request.window.duration() <= 30


def test_ingest_is_deterministic():
    first = ingest_transactions(io.StringIO(WELL_FORMED), SMALL)
    second = ingest_transactions(io.StringIO(WELL_FORMED), SMALL)
    assert first == second


def test_ingest_row_count_matches():
    rows = "date,time,x,y,shop_id\n" + "\n".join(
        f"2024-04-01,{9 + i % 8:02d}:30,0.0,0.0,shop-1" for i in range(25)
    )
    assert len(ingest_transactions(io.StringIO(rows), SMALL)) == 25


def test_ingest_header_order_insensitive():
    reordered = "shop_id,y,x,time,date\nshop-1,-2.0,1.5,09:15,2024-04-01\n"
    requests = ingest_transactions(io.StringIO(reordered), SMALL)
    assert requests[0].location.x == 1.5
    assert requests[0].location.y == -2.0


def test_ingest_empty_file():
    assert ingest_transactions(io.StringIO(""), SMALL) == []
    assert ingest_transactions(io.StringIO("date,time,x,y,shop_id\n"), SMALL) == []


def test_ingest_invalid_time_names_row_and_column():
    bad = "date,time,x,y,shop_id\n2024-04-01,09:15,0,0,shop-1\n2024-04-01,25:99,0,0,shop-1\n"
    with pytest.raises(IngestError, match="row 3") as info:
        ingest_transactions(io.StringIO(bad), SMALL)
    assert info.value.column == "time"


def test_ingest_invalid_date():
    bad = "date,time,x,y,shop_id\n04/01/2024,09:15,0,0,shop-1\n"
    with pytest.raises(IngestError, match="row 2.*date"):
        ingest_transactions(io.StringIO(bad), SMALL)


def test_ingest_invalid_coordinate():
    bad = "date,time,x,y,shop_id\n2024-04-01,09:15,east,0,shop-1\n"
    with pytest.raises(IngestError) as info:
        ingest_transactions(io.StringIO(bad), SMALL)
    assert (info.value.row, info.value.column) == (2, "x")


def test_ingest_missing_header_column():
    with pytest.raises(IngestError, match="missing header column"):
        ingest_transactions(io.StringIO("date,time,x,y\n"), SMALL)


def test_ingest_short_row():
    bad = "date,time,x,y,shop_id\n2024-04-01,09:15,0\n"
    with pytest.raises(IngestError, match="row 2"):
        ingest_transactions(io.StringIO(bad), SMALL)


def test_ingest_from_path(tmp_path):
    path = tmp_path / "transactions.csv"
    path.write_text(WELL_FORMED)
    assert len(ingest_transactions(path, SMALL)) == 3


def test_bundled_sample_parses():
    records = parse_transactions(sample_transactions_path())
    assert len(records) == 30 * 560
    dates = {r.date for r in records}
    assert len(dates) == 30
    assert all(9 * 60 <= r.time < 17 * 60 for r in records)
    assert {r.shop_id for r in records} == {"shop-1"}


# Fixture files ---------------------------------------------------------------


def test_fixture_round_trip(tmp_path):
    path = tmp_path / "fixture.jsonl"
    services = generate_services(SMALL)
    requests = generate_requests(SMALL, 60)
    write_fixture(path, services, requests)
    read_services, read_requests = read_fixture(path)
    assert read_services == services
    assert read_requests == requests


def test_fixture_rejects_unknown_tag(tmp_path):
    path = tmp_path / "fixture.jsonl"
    path.write_text('{"type": "gadget"}\n')
    with pytest.raises(DomainError, match="unknown type tag"):
        read_fixture(path)


def test_fixture_rejects_invalid_json(tmp_path):
    path = tmp_path / "fixture.jsonl"
    path.write_text("{broken\n")
    with pytest.raises(DomainError, match="line 1"):
        read_fixture(path)
