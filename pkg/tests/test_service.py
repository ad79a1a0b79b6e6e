import threading

import pytest
from fastapi.testclient import TestClient

from cppnstudio.service import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "store")
    with TestClient(app) as c:
        yield c


def new_session(client, **overrides):
    body = {"from": "scratch", "palette": "gray", "seed": 5}
    body.update(overrides)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200, response.text
    return response.json()["session_id"]


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["version"]


def test_full_breeding_round_trip(client):
    sid = new_session(client)
    pop = client.get(f"/sessions/{sid}/population?size=64").json()
    assert pop["generation"] == 0
    assert len(pop["slots"]) == 15
    assert all(not slot["selected"] for slot in pop["slots"])

    png = client.get(pop["slots"][3]["url"])
    assert png.status_code == 200
    assert png.headers["content-type"] == "image/png"
    assert png.content.startswith(b"\x89PNG")

    assert client.post(f"/sessions/{sid}/select", json={"slots": [3, 5]}).status_code == 204
    refetched = client.get(f"/sessions/{sid}/population?size=64").json()
    assert [s["slot"] for s in refetched["slots"] if s["selected"]] == [3, 5]

    assert client.post(f"/sessions/{sid}/next").json() == {"generation": 1}

    before = client.get("/health").json()["records"]
    record = client.post(f"/sessions/{sid}/publish",
                         json={"slot": 0, "title": "Test", "author": "t"}).json()
    assert record["parent_id"] is None
    assert client.get("/health").json()["records"] == before + 1

    stored = client.get(f"/images/{record['genome_id']}").json()
    assert stored == record
    genome_doc = client.get(f"/images/{record['genome_id']}/genome").json()
    assert genome_doc["palette"] == "gray"
    direct = client.get(f"/images/{record['genome_id']}.png?size=48")
    assert direct.status_code == 200 and direct.content.startswith(b"\x89PNG")
    node_png = client.get(f"/images/{record['genome_id']}/nodes/1.png?size=16")
    assert node_png.status_code == 200


def test_branch_session_parent_link_and_palette_guard(client):
    sid = new_session(client)
    record = client.post(f"/sessions/{sid}/publish",
                         json={"slot": 1, "title": "Root", "author": "t"}).json()
    root = record["genome_id"]

    branch = client.post("/sessions", json={"from": root, "seed": 9})
    assert branch.status_code == 200
    bid = branch.json()["session_id"]
    child = client.post(f"/sessions/{bid}/publish",
                        json={"slot": 2, "title": "Child", "author": "t"}).json()
    assert child["parent_id"] == root

    mismatch = client.post("/sessions", json={"from": root, "palette": "color"})
    assert mismatch.status_code == 400

    lineage = client.get(f"/images/{child['genome_id']}/lineage").json()
    assert [r["genome_id"] for r in lineage["records"]] == [root, child["genome_id"]]
    assert lineage["tracked_connections"]


def test_error_statuses(client):
    sid = new_session(client)
    assert client.post(f"/sessions/{sid}/next").status_code == 400  # empty selection
    assert client.post(f"/sessions/{sid}/select", json={"slots": [99]}).status_code == 400
    assert client.post(f"/sessions/{sid}/publish",
                       json={"slot": 0, "title": "", "author": ""}).status_code == 400
    assert client.post(f"/sessions/{sid}/publish",
                       json={"slot": 99, "title": "x", "author": ""}).status_code == 400
    assert client.get("/images/404").status_code == 404
    assert client.get("/sessions/nosuch/population").status_code == 404
    assert client.post("/sessions", json={"from": "scratch", "palette": "sepia"}).status_code == 400
    assert client.post("/sessions", json={"from": "scratch", "palette": "gray",
                                          "population": 3}).status_code == 400


def test_sweep_endpoint_contract(client):
    sid = new_session(client)
    record = client.post(f"/sessions/{sid}/publish",
                         json={"slot": 0, "title": "Sweep", "author": "t"}).json()
    gid = record["genome_id"]
    genome_doc = client.get(f"/images/{gid}/genome").json()
    conn = genome_doc["connections"][0]

    view = client.get(f"/images/{gid}/sweep?connection={conn['innovation']}&size=32").json()
    assert len(view["frames"]) == 61
    assert view["baseline_weight"] == conn["weight"]
    assert "changed_fraction" in view["impact"]

    frame = client.get(view["frames"][30]["url"])
    assert frame.status_code == 200
    # the frame endpoint is a pure function: refetching matches
    assert client.get(view["frames"][30]["url"]).content == frame.content

    fine = client.get(f"/images/{gid}/sweep?connection={conn['innovation']}"
                      f"&step=0.01&size=8").json()
    assert len(fine["frames"]) == 601

    assert client.get(f"/images/{gid}/sweep?connection=424242").status_code == 404


def test_labels_annotation_and_metrics(client):
    sid = new_session(client)
    record = client.post(f"/sessions/{sid}/publish",
                         json={"slot": 0, "title": "Lab", "author": "t"}).json()
    gid = record["genome_id"]
    conn = client.get(f"/images/{gid}/genome").json()["connections"][0]["innovation"]

    put = client.put(f"/images/{gid}/labels",
                     json={"labels": {str(conn): {"name": "sky", "color": "#2255EE"}}})
    assert put.status_code == 200
    got = client.get(f"/images/{gid}/labels").json()
    assert got["labels"][str(conn)] == {"name": "sky", "color": "#2255ee"}

    bad = client.put(f"/images/{gid}/labels",
                     json={"labels": {"424242": {"name": "x", "color": "#000000"}}})
    assert bad.status_code == 404

    svg = client.get(f"/images/{gid}/annotated.svg")
    assert svg.status_code == 200
    assert svg.headers["content-type"].startswith("image/svg")
    assert "#2255ee" in svg.text
    assert client.get(f"/images/{gid}/annotated.svg?modules=true").status_code == 200

    decomp = client.get(f"/images/{gid}/decomposition").json()
    assert decomp["groups"][0]["name"] == "sky"

    metrics = client.get(f"/images/{gid}/metrics?nulls=4&seed=7").json()
    again = client.get(f"/images/{gid}/metrics?nulls=4&seed=7").json()
    assert metrics == again
    assert metrics["q_residual"] == pytest.approx(
        metrics["q_raw"] - metrics["q_null_mean"])


def test_corpus_report_endpoint(client):
    assert client.get("/corpus/report").status_code == 400  # empty store
    sid = new_session(client)
    for slot in range(3):
        client.post(f"/sessions/{sid}/publish",
                    json={"slot": slot, "title": f"i{slot}", "author": "t"})
    report = client.get("/corpus/report?nulls=2&seed=3").json()
    assert report["n"] == 3
    assert "modularity" in report and "hierarchy" in report


def test_concurrent_sessions_stay_independent(client):
    ids = [new_session(client, seed=100 + k) for k in range(2)]
    errors = []

    def run(sid):
        try:
            for _ in range(100):
                client.post(f"/sessions/{sid}/select", json={"slots": [0, 1]})
                client.post(f"/sessions/{sid}/next")
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=run, args=(sid,)) for sid in ids]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    gens = [client.get(f"/sessions/{sid}/population").json() for sid in ids]
    assert all(g["generation"] == 100 for g in gens)
    assert gens[0]["session_id"] != gens[1]["session_id"]


def test_store_survives_restart(tmp_path):
    path = tmp_path / "store"
    app = create_app(path)
    with TestClient(app) as client:
        sid = new_session(client)
        record = client.post(f"/sessions/{sid}/publish",
                             json={"slot": 0, "title": "Keep", "author": "t"}).json()
    app2 = create_app(path)
    with TestClient(app2) as client2:
        assert client2.get(f"/images/{record['genome_id']}").json() == record
        # sessions are not persisted across restarts
        assert client2.get(f"/sessions/{sid}/population").status_code == 404
