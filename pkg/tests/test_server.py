from __future__ import annotations

import json
import shutil
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from asmsynth import create_app, toyarm_dir


def wait_done(client: TestClient, job_id: str, timeout: float = 30.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        doc = client.get(f"/jobs/{job_id}").json()
        if doc["state"] in ("done", "failed"):
            return doc
        time.sleep(0.02)
    raise AssertionError(f"job {job_id} did not finish")


def submit(client: TestClient, body: dict) -> str:
    resp = client.post("/requests", content=json.dumps(body))
    assert resp.status_code == 202
    job_id = resp.json()["jobId"]
    doc = wait_done(client, job_id)
    assert doc["state"] == "done", doc
    return job_id


ARM_REQUEST = {
    "target": {"formats": [], "parts": ["Arm"], "attributes": []},
    "limit": 12,
}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory) -> Path:
    dst = tmp_path_factory.mktemp("server-data")
    shutil.copytree(str(toyarm_dir()), dst, dirs_exist_ok=True)
    return dst


@pytest.fixture(scope="module")
def client(workdir) -> TestClient:
    with TestClient(create_app(workdir)) as c:
        yield c


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_cors_header_present(client):
    resp = client.get("/health", headers={"Origin": "http://localhost:5173"})
    assert resp.headers.get("access-control-allow-origin") == "*"


def test_get_taxonomy_and_unknown_hierarchy(client):
    resp = client.get("/taxonomies/parts")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["hierarchy"] == "parts"
    assert "Arm" in doc["nodes"]
    assert client.get("/taxonomies/colors").status_code == 404


def test_put_taxonomy_validates(client):
    parts = client.get("/taxonomies/parts").json()
    mismatched = dict(parts, hierarchy="formats")
    assert client.put("/taxonomies/parts", content=json.dumps(mismatched)).status_code == 400
    malformed = {"hierarchy": "parts", "nodes": ["A"]}
    assert client.put("/taxonomies/parts", content=json.dumps(malformed)).status_code == 400
    duplicate = dict(parts, nodes=parts["nodes"] + [parts["nodes"][0]])
    assert client.put("/taxonomies/parts", content=json.dumps(duplicate)).status_code == 409
    cyclic = {
        "hierarchy": "parts",
        "nodes": parts["nodes"],
        "edges": [["Arm", "Motor"], ["Motor", "Arm"]],
    }
    assert client.put("/taxonomies/parts", content=json.dumps(cyclic)).status_code == 409


def test_put_taxonomy_rejects_removing_atoms_in_use(client):
    parts = client.get("/taxonomies/parts").json()
    shrunk = {
        "hierarchy": "parts",
        "nodes": [n for n in parts["nodes"] if n != "Gripper"],
        "edges": [e for e in parts["edges"] if "Gripper" not in e],
    }
    resp = client.put("/taxonomies/parts", content=json.dumps(shrunk))
    assert resp.status_code == 409
    # catalog untouched
    assert client.get("/parts/gripper").status_code == 200


def test_put_taxonomy_persists_and_round_trips(client, workdir):
    attrs = client.get("/taxonomies/attributes").json()
    grown = {
        "hierarchy": "attributes",
        "nodes": sorted(attrs["nodes"] + ["Titanium"]),
        "edges": attrs["edges"] + [["Titanium", "Material"]],
    }
    resp = client.put("/taxonomies/attributes", content=json.dumps(grown))
    assert resp.status_code == 200
    assert resp.json()["nodes"] == grown["nodes"]
    on_disk = json.loads((workdir / "taxonomies.json").read_text())
    by_h = {d["hierarchy"]: d for d in on_disk}
    assert "Titanium" in by_h["attributes"]["nodes"]


def test_parts_listing_is_sorted(client):
    docs = client.get("/parts").json()
    ids = [d["partId"] for d in docs]
    assert ids == sorted(ids)
    assert "base-plate" in ids


def test_get_unknown_part(client):
    assert client.get("/parts/rocket").status_code == 404


def test_put_part_rejects_path_mismatch_and_bad_json(client):
    doc = client.get("/parts/gripper").json()
    assert client.put("/parts/other-id", content=json.dumps(doc)).status_code == 400
    assert client.put("/parts/gripper", content=b"{not json").status_code == 400
    broken = dict(doc)
    del broken["name"]
    assert client.put("/parts/gripper", content=json.dumps(broken)).status_code == 400


def test_put_part_validation_errors_carry_diagnostics(client):
    doc = client.get("/parts/gripper").json()
    bad = json.loads(json.dumps(doc))
    bad["partId"] = "gripper-2"
    bad["jointOrigins"][0]["uuid"] = "gr2-mount"
    bad["jointOrigins"][0]["provides"] = {
        "formats": ["no-such-format"], "parts": [], "attributes": [],
    }
    resp = client.put("/parts/gripper-2", content=json.dumps(bad))
    assert resp.status_code == 422
    payload = resp.json()
    assert payload["error"]
    assert any(
        d["severity"] == "error" and d["joUuid"] == "gr2-mount"
        for d in payload["diagnostics"]
    )
    assert client.get("/parts/gripper-2").status_code == 404


def test_put_part_rejects_joint_origin_uuid_clash(client):
    doc = client.get("/parts/gripper").json()
    clone = json.loads(json.dumps(doc))
    clone["partId"] = "gripper-clone"
    resp = client.put("/parts/gripper-clone", content=json.dumps(clone))
    assert resp.status_code == 422
    assert "gr-mount" in resp.json()["error"]


def test_put_delete_part_persists(client, workdir):
    doc = client.get("/parts/suction-cup").json()
    new = json.loads(json.dumps(doc))
    new["partId"] = "suction-cup-xl"
    new["name"] = "Suction cup XL"
    new["unitCost"] = 27.5
    for jo in new["jointOrigins"]:
        jo["uuid"] = "xl-" + jo["uuid"]
    resp = client.put("/parts/suction-cup-xl", content=json.dumps(new))
    assert resp.status_code == 200
    path = workdir / "parts" / "suction-cup-xl.json"
    assert path.exists()
    assert json.loads(path.read_text())["unitCost"] == 27.5

    assert client.delete("/parts/suction-cup-xl").status_code == 204
    assert not path.exists()
    assert client.delete("/parts/suction-cup-xl").status_code == 404


def test_request_validation_statuses(client):
    assert client.post("/requests", content=b"nope").status_code == 400
    no_target = {"limit": 5}
    assert client.post("/requests", content=json.dumps(no_target)).status_code == 400
    unknown_atom = {"target": {"formats": [], "parts": ["Rocket"], "attributes": []}}
    assert client.post("/requests", content=json.dumps(unknown_atom)).status_code == 422
    format_target = {"target": {"formats": ["motor-flange"], "parts": [], "attributes": []}}
    assert client.post("/requests", content=json.dumps(format_target)).status_code == 422
    oversized = dict(ARM_REQUEST, limit=999_999)
    resp = client.post("/requests", content=json.dumps(oversized))
    assert resp.status_code == 422
    assert "at most 2000" in resp.json()["error"]


def test_job_lifecycle_and_listing(client):
    job_id = submit(client, ARM_REQUEST)
    doc = client.get(f"/jobs/{job_id}").json()
    assert doc["resultCount"] == 12
    assert doc["request"]["limit"] == 12
    assert doc["createdAt"] <= doc["startedAt"] <= doc["finishedAt"]
    listed = client.get("/jobs").json()
    assert job_id in [j["jobId"] for j in listed]
    assert client.get("/jobs/nope").status_code == 404


def test_results_paging(client):
    job_id = submit(client, ARM_REQUEST)
    page = client.get(f"/jobs/{job_id}/results?offset=0&limit=5").json()
    assert page["total"] == 12
    assert [r["index"] for r in page["items"]] == [0, 1, 2, 3, 4]
    rest = client.get(f"/jobs/{job_id}/results?offset=10&limit=50").json()
    assert [r["index"] for r in rest["items"]] == [10, 11]
    row = page["items"][0]
    assert set(row) == {"index", "partCount", "totalKnownCost", "costComplete", "dof"}
    assert row["partCount"] == 3
    assert client.get(f"/jobs/{job_id}/results?offset=-1").status_code == 400
    assert client.get(f"/jobs/{job_id}/results?limit=0").status_code == 400
    assert client.get(f"/jobs/{job_id}/results?limit=501").status_code == 400
    assert client.get("/jobs/nope/results").status_code == 404


def test_results_of_unfinished_job_conflict(client):
    from asmsynth.server import Job
    from asmsynth import make_request, make_atom, type_expr

    state = client.app.state.asm
    job = Job(job_id="stub-queued", request=make_request(state.ctx, type_expr(make_atom("parts", "Arm"))))
    with state.lock:
        state.jobs[job.job_id] = job
    try:
        assert client.get("/jobs/stub-queued/results").status_code == 409
        assert client.get("/jobs/stub-queued/results/0/bom").status_code == 409
    finally:
        with state.lock:
            del state.jobs[job.job_id]


def test_result_artifacts(client):
    job_id = submit(client, ARM_REQUEST)
    bom = client.get(f"/jobs/{job_id}/results/0/bom").json()
    assert bom["costComplete"] is True
    assert bom["totalKnownCost"] == sum(r["rowTotal"] for r in bom["rows"])
    term = client.get(f"/jobs/{job_id}/results/0/term").json()
    assert set(term) == {"type", "partCount", "term"}
    assert term["partCount"] == 3
    program = client.get(f"/jobs/{job_id}/results/0/program").json()
    assert set(program) == {"insertions", "links", "moves", "joints"}
    assert client.get(f"/jobs/{job_id}/results/99/bom").status_code == 404


def test_scene_endpoint_with_angles(client):
    job_id = submit(client, ARM_REQUEST)
    resp = client.get(f"/jobs/{job_id}/results/0/scene")
    assert resp.status_code == 200
    entries = json.loads(resp.content)
    assert [e["occ"] for e in entries] == ["0", "0.0", "0.0.0"]

    program = client.get(f"/jobs/{job_id}/results/0/program").json()
    n_rev = sum(1 for j in program["joints"] if j[0] == "revolute")
    assert n_rev == 1
    bent = client.get(f"/jobs/{job_id}/results/0/scene?angles=1.5707963")
    assert bent.status_code == 200
    assert json.loads(bent.content) != entries

    assert client.get(f"/jobs/{job_id}/results/0/scene?angles=0.1,0.2").status_code == 400
    assert client.get(f"/jobs/{job_id}/results/0/scene?angles=abc").status_code == 400


def test_scene_bytes_match_library_export(client):
    from asmsynth import (
        Term,
        compile_program,
        expand_term,
        export_scene,
        forward_kinematics,
        load_workspace,
        partition_links,
        term_from_json,
    )

    job_id = submit(client, ARM_REQUEST)
    term_doc = client.get(f"/jobs/{job_id}/results/0/term").json()
    ctx, catalog = load_workspace(Path(str(toyarm_dir())))
    term = term_from_json(term_doc["term"])
    tree = expand_term(ctx, catalog, term)
    program = compile_program(tree, partition_links(tree))
    expected = export_scene(forward_kinematics(catalog, tree, program, [0.25]))
    resp = client.get(f"/jobs/{job_id}/results/0/scene?angles=0.25")
    assert resp.content.decode() == expected


def test_job_uses_catalog_snapshot(client):
    # a part deleted after submission stays visible in the finished job
    doc = client.get("/parts/suction-cup").json()
    job_id = submit(client, ARM_REQUEST)
    assert client.delete("/parts/suction-cup").status_code == 204
    try:
        bom = client.get(f"/jobs/{job_id}/results/1/bom").json()
        assert any(r["partId"] == "suction-cup" for r in bom["rows"])
        scene = client.get(f"/jobs/{job_id}/results/1/scene")
        assert scene.status_code == 200
    finally:
        assert client.put("/parts/suction-cup", content=json.dumps(doc)).status_code == 200


def test_job_artifacts_persisted(client, workdir):
    job_id = submit(client, ARM_REQUEST)
    job_dir = workdir / "jobs" / job_id
    assert (job_dir / "job.json").exists()
    results = json.loads((job_dir / "results.json").read_text())
    assert len(results) == 12
    assert (job_dir / "program-0.json").exists()
    assert (job_dir / "bom-11.json").exists()
    via_api = client.get(f"/jobs/{job_id}/results/0/program").json()
    assert json.loads((job_dir / "program-0.json").read_text()) == via_api


def test_server_restart_reloads_workspace(workdir):
    with TestClient(create_app(workdir)) as fresh:
        ids = [d["partId"] for d in fresh.get("/parts").json()]
        assert "base-plate" in ids
        assert fresh.get("/taxonomies/parts").json()["nodes"]


def test_server_without_data_dir_starts_empty():
    with TestClient(create_app(None)) as c:
        assert c.get("/parts").json() == []
        assert c.get("/taxonomies/parts").json() == {
            "hierarchy": "parts", "nodes": [], "edges": [],
        }
        body = {"target": {"formats": [], "parts": ["Arm"], "attributes": []}}
        assert c.post("/requests", content=json.dumps(body)).status_code == 422
