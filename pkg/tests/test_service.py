import time

import pytest
from fastapi.testclient import TestClient

from taskfsa.io import model_payload
from taskfsa.fixtures import load_model
from taskfsa.service import SessionStore, create_app


@pytest.fixture
def client():
    app = create_app(SessionStore(synchronous=True))
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def _create_light_session(client):
    body = {
        "task": "Cross the road at the traffic light",
        "model": model_payload(load_model("crossing_light")),
        "specs": [{"name": "reach goal",
                   "formula": "traffic_light & G F (green & !car_come) -> F goal"}],
        "backend": {"transcript_fixture": "crossroad_light"},
    }
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()


def test_health_probe(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["ok"] is True


def test_session_list_starts_empty(client):
    assert client.get("/sessions").json() == {"sessions": []}


def test_create_session_first_verdict_fails_with_p0_loop(client):
    state = _create_light_session(client)
    sid = state["id"]
    state = client.get(f"/sessions/{sid}").json()
    assert state["status"] == "fail"
    result = state["iterations"][0]["results"][0]
    assert result["passed"] is False
    assert result["counterexample"]["projection"] == {"stem": [], "loop": ["p0"]}
    listed = client.get("/sessions").json()["sessions"]
    assert [s["id"] for s in listed] == [sid]


def test_manual_refine_bumps_revision_and_updates_verdict(client):
    state = _create_light_session(client)
    sid, rev0 = state["id"], state["revision"]
    resp = client.post(f"/sessions/{sid}/refine-manual",
                       json={"instruction": 'with an action "approach pedestrian crossing"'})
    assert resp.status_code == 200
    state = client.get(f"/sessions/{sid}").json()
    assert state["revision"] > rev0
    assert state["status"] == "fail"
    latest = state["iterations"][-1]["results"][0]
    assert latest["counterexample"]["projection"] == {
        "stem": ["p0", "p1", "p3"], "loop": ["p5"]}

    resp = client.post(f"/sessions/{sid}/refine-manual", json={
        "instruction": 'Refine the following steps to ensure the action "cross the '
                       'road" is performed under conditions "traffic light turns '
                       'green" and "no cars are coming"'})
    assert resp.status_code == 200
    state = client.get(f"/sessions/{sid}").json()
    assert state["status"] == "pass"
    assert len(state["iterations"]) == 3


def test_unknown_session_404(client):
    assert client.get("/sessions/nope").status_code == 404
    assert client.post("/sessions/nope/refine-auto").status_code == 404


def test_illegal_transition_409(client):
    state = _create_light_session(client)
    sid = state["id"]
    # prune requires a passing controller
    assert client.post(f"/sessions/{sid}/prune").status_code == 409
    # drive to pass, then manual refine must be rejected
    client.post(f"/sessions/{sid}/refine-manual",
                json={"instruction": 'with an action "approach pedestrian crossing"'})
    client.post(f"/sessions/{sid}/refine-manual", json={
        "instruction": 'Refine the following steps to ensure the action "cross the '
                       'road" is performed under conditions "traffic light turns '
                       'green" and "no cars are coming"'})
    resp = client.post(f"/sessions/{sid}/refine-manual", json={"instruction": "x"})
    assert resp.status_code == 409


def test_auto_refine_and_prune_flow(client):
    body = {
        "task": "Cross the road",
        "model": model_payload(load_model("crossing_looks")),
        "specs": [{"name": "no light", "formula": "!traffic_light -> F goal"}],
        "backend": {"transcript_fixture": "crossroad"},
    }
    sid = client.post("/sessions", json=body).json()["id"]
    assert client.get(f"/sessions/{sid}").json()["status"] == "fail"
    assert client.post(f"/sessions/{sid}/refine-auto").status_code == 200
    state = client.get(f"/sessions/{sid}").json()
    assert state["status"] == "pass"
    assert client.post(f"/sessions/{sid}/prune").status_code == 200
    state = client.get(f"/sessions/{sid}").json()
    assert state["status"] == "pass"
    dot = client.get(f"/sessions/{sid}/dot/controller")
    assert dot.status_code == 200
    assert dot.text.count('"q') > 0 and "digraph" in dot.text


def test_dot_artifacts_per_iteration(client):
    state = _create_light_session(client)
    sid = state["id"]
    first = client.get(f"/sessions/{sid}/dot/controller-1")
    assert first.status_code == 200
    assert "locate traffic light" in first.text
    model_dot = client.get(f"/sessions/{sid}/dot/model")
    assert model_dot.status_code == 200
    missing = client.get(f"/sessions/{sid}/dot/controller-99")
    assert missing.status_code == 404


def test_create_requires_spec_and_transcript(client):
    body = {
        "task": "Cross the road",
        "model": model_payload(load_model("crossing_looks")),
        "specs": [],
        "backend": {"transcript_fixture": "crossroad"},
    }
    assert client.post("/sessions", json=body).status_code == 422
    body["specs"] = [{"formula": "F goal"}]
    body["backend"] = {}
    assert client.post("/sessions", json=body).status_code == 422


def test_request_sequence_replays_to_identical_state():
    def run_sequence():
        app = create_app(SessionStore(synchronous=True))
        with TestClient(app, raise_server_exceptions=False) as client:
            sid = _create_light_session(client)["id"]
            client.post(f"/sessions/{sid}/refine-manual",
                        json={"instruction": 'with an action "approach pedestrian crossing"'})
            state = client.get(f"/sessions/{sid}").json()
            state.pop("id")
            for it in state["iterations"]:
                it.pop("dot")
            state.pop("dot")
            return state

    assert run_sequence() == run_sequence()


def test_async_mode_polls_to_completion():
    app = create_app(SessionStore(synchronous=False))
    with TestClient(app, raise_server_exceptions=False) as client:
        body = {
            "task": "Cross the road",
            "model": model_payload(load_model("crossing_looks")),
            "specs": [{"name": "no light", "formula": "!traffic_light -> F goal"}],
            "backend": {"transcript_fixture": "crossroad"},
        }
        state = client.post("/sessions", json=body).json()
        sid = state["id"]
        deadline = time.time() + 10
        while time.time() < deadline:
            state = client.get(f"/sessions/{sid}").json()
            if state["status"] not in ("querying", "verifying", "idle"):
                break
            time.sleep(0.02)
        assert state["status"] == "fail"
        revisions = [state["revision"]]
        client.post(f"/sessions/{sid}/refine-auto")
        deadline = time.time() + 10
        while time.time() < deadline:
            state = client.get(f"/sessions/{sid}").json()
            revisions.append(state["revision"])
            if state["status"] in ("pass", "fail", "unrepresentable", "error"):
                break
            time.sleep(0.02)
        assert state["status"] in ("pass", "unrepresentable", "fail")
        assert revisions == sorted(revisions)  # revisions never regress
