from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from catwalk.errors import InvariantViolation
from catwalk.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


PATH3 = "3 2\n0 1\n1 2\n"


def count_req(**overrides):
    body = {
        "graph": {"graph_text": PATH3},
        "source": 0,
        "target": 2,
        "length": 2,
    }
    body.update(overrides)
    return body


def test_healthz(client):
    r = client.get("/healthz")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_count_walks_from_text(client):
    r = client.post("/count-walks", json=count_req())
    assert r.status_code == 200
    body = r.json()
    assert body["count"] == "1"
    assert body["witness"]["value"] == "1"
    assert body["metrics"]["n"] == 3
    assert body["metrics"]["moduli"] == body["witness"]["moduli"]
    assert body["trace"] is None


def test_count_walks_from_edge_list(client):
    graph = {"n": 4, "edges": [[0, 1], [0, 2], [1, 3], [2, 3]]}
    r = client.post("/count-walks", json=count_req(graph=graph, target=3))
    assert r.status_code == 200
    assert r.json()["count"] == "2"


def test_count_walks_trace_round_trip(client):
    r = client.post("/count-walks", json=count_req(trace=True))
    assert r.status_code == 200
    trace = r.json()["trace"]
    assert trace and all(line.startswith(("+", "-")) for line in trace)
    # reversible protocol: every compute line has a matching uncompute line
    assert len([t for t in trace if t[0] == "+"]) == len(trace) // 2


def test_ambiguous_graph_spec_is_input_error(client):
    graph = {"graph_text": PATH3, "n": 3, "edges": [[0, 1]]}
    r = client.post("/count-walks", json=count_req(graph=graph))
    assert r.status_code == 422
    body = r.json()
    assert body["category"] == "input"
    assert "error" in body


def test_bad_graph_text_is_input_error(client):
    r = client.post("/count-walks", json=count_req(graph={"graph_text": "1 one\n"}))
    assert r.status_code == 422
    assert r.json()["category"] == "input"


def test_vertex_out_of_range_is_input_error(client):
    r = client.post("/count-walks", json=count_req(source=9))
    assert r.status_code == 422
    assert r.json()["category"] == "input"


def test_invariant_violation_maps_to_500():
    app = create_app()

    @app.get("/boom")
    def boom():
        raise InvariantViolation("synthetic")

    local = TestClient(app, raise_server_exceptions=False)
    r = local.get("/boom")
    assert r.status_code == 500
    assert r.json()["category"] == "invariant"


def test_stcon_verdicts(client):
    r = client.post(
        "/stcon", json={"graph": {"graph_text": PATH3}, "source": 0, "target": 2}
    )
    assert r.status_code == 200
    assert r.json() == {
        "reachable": True,
        "verdict": "REACHABLE",
        "metrics": r.json()["metrics"],
    }

    r = client.post(
        "/stcon", json={"graph": {"graph_text": "2 0\n"}, "source": 0, "target": 1}
    )
    assert r.json()["reachable"] is False
    assert r.json()["verdict"] == "UNREACHABLE"


def test_verify_endpoint_green(client):
    r = client.post(
        "/verify", json={"graph": {"graph_text": PATH3}, "seeds": 2, "base_seed": 8}
    )
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert {c["name"] for c in body["checks"]} == {
        "restoration",
        "only-V",
        "seed-invariance",
        "oracle-agreement",
    }


def test_verify_endpoint_reports_fault(client):
    r = client.post(
        "/verify",
        json={"graph": {"graph_text": PATH3}, "seeds": 2, "fault": "skip-uncompute"},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is False
    failed = [c for c in body["checks"] if not c["passed"]]
    assert any(c["name"] == "restoration" for c in failed)


def test_bench_endpoint_small_grid(client):
    r = client.post("/bench", json={"sizes": [4], "ks": [1, 2], "q": 5, "seed": 0})
    assert r.status_code == 200
    records = r.json()["records"]
    # lengths {2, n//2, n} collapse to {2, 4} for n=4
    assert len(records) == 4
    for rec in records:
        assert rec["n"] == 4
        assert rec["moduli"] == [5]
        assert rec["peak_workspace_bits"] > 0
