#!/usr/bin/env python3
"""Record real service responses for the frontend contract tests.

Drives the manual-refinement crossing session against the in-process
service and saves every exchange (in order) to
frontend/fixtures/recorded.json, with the session id normalized to "s1".
"""

from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from taskfsa.fixtures import load_model  # noqa: E402
from taskfsa.io import model_payload  # noqa: E402
from taskfsa.service import SessionStore, create_app  # noqa: E402

INSTRUCTION_1 = 'with an action "approach pedestrian crossing"'
INSTRUCTION_2 = (
    'Refine the following steps to ensure the action "cross the road" is performed '
    'under conditions "traffic light turns green" and "no cars are coming"'
)

OUT = ROOT / "frontend" / "fixtures" / "recorded.json"


def main() -> None:
    app = create_app(SessionStore(synchronous=True))
    client = TestClient(app)
    recorded = []
    real_id = None

    def record(method: str, path: str, body=None):
        nonlocal real_id
        if method == "GET":
            resp = client.get(path)
        else:
            resp = client.post(path, json=body) if body is not None else client.post(path)
        content_type = resp.headers.get("content-type", "")
        text = resp.text
        recorded.append({
            "method": method,
            "path": path.replace(real_id, "s1") if real_id else path,
            "request_body": body,
            "status": resp.status_code,
            "content_type": content_type,
            "body": text.replace(real_id, "s1") if real_id else text,
        })
        return resp

    create = client.post("/sessions", json={
        "task": "Cross the road at the traffic light",
        "model": model_payload(load_model("crossing_light")),
        "specs": [{"name": "reach the goal on a fair light",
                   "formula": "traffic_light & G F (green & !car_come) -> F goal"}],
        "backend": {"transcript_fixture": "crossroad_light"},
    })
    real_id = create.json()["id"]

    record("GET", f"/sessions/{real_id}")
    record("GET", f"/sessions/{real_id}/dot/controller-1")
    record("GET", f"/sessions/{real_id}/dot/model")
    record("POST", f"/sessions/{real_id}/refine-manual", {"instruction": INSTRUCTION_1})
    record("GET", f"/sessions/{real_id}")
    record("GET", f"/sessions/{real_id}/dot/controller-2")
    record("GET", f"/sessions/{real_id}/dot/model")
    record("POST", f"/sessions/{real_id}/refine-manual", {"instruction": INSTRUCTION_2})
    record("GET", f"/sessions/{real_id}")
    record("GET", f"/sessions/{real_id}/dot/controller-3")
    record("GET", f"/sessions/{real_id}/dot/model")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(recorded, indent=2) + "\n")
    print(f"wrote {OUT.relative_to(ROOT)} ({len(recorded)} exchanges)")


if __name__ == "__main__":
    main()
