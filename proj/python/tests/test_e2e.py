import json
import signal
import subprocess
import time
import urllib.error
import urllib.request

import jsonschema
import pytest
import referencing

import ecograde as eg
from conftest import load_json, read_lines


@pytest.fixture(scope="module")
def schemas(root):
    names = ["report", "listing", "manifest", "config"]
    loaded = {n: load_json(root / "schemas" / f"{n}.schema.json") for n in names}
    registry = referencing.Registry().with_resources(
        (s["$id"], referencing.Resource.from_contents(s)) for s in loaded.values())
    return loaded, registry


def validate(instance, schema, registry):
    jsonschema.Draft202012Validator(schema, registry=registry).validate(instance)


def test_outputs_match_schemas(scored_store, schemas, root):
    loaded, registry = schemas
    for report in read_lines(scored_store["scores"] / "reports.jsonl"):
        validate(report, loaded["report"], registry)
    for listing in read_lines(scored_store["store"] / "listings.jsonl"):
        validate(listing, loaded["listing"], registry)
    for d in ("store", "scores", "validate"):
        validate(load_json(scored_store[d] / "manifest.json"), loaded["manifest"], registry)
    validate(load_json(root / "config" / "ecograde.json"), loaded["config"], registry)
    validate(load_json(root / "config" / "bedroom_table.json"), loaded["config"]["$defs"]["bedroom_table"], registry)


def test_manifest_lists_every_output(scored_store):
    manifest = load_json(scored_store["scores"] / "manifest.json")
    listed = {o["path"] for o in manifest["outputs"]}
    on_disk = {p.name for p in scored_store["scores"].iterdir() if p.name != "manifest.json"}
    assert listed == on_disk
    assert manifest["started_at"] == "2023-11-14T22:13:20Z"


def test_validation_outputs(scored_store):
    run = scored_store["validate"]
    summary = load_json(run / "summary.json")
    assert summary["n_direct"] + summary["n_interpolated"] == 400
    for name in ("city_means.csv", "bed_type_means.csv", "listings.csv", "histogram_overall_all.csv"):
        assert (run / name).is_file()


@pytest.fixture(scope="module")
def openapi(root, schemas):
    doc = load_json(root / "docs" / "openapi.json")
    _, registry = schemas
    registry = registry.with_resource("urn:openapi", referencing.Resource.from_contents(
        doc, default_specification=referencing.jsonschema.DRAFT202012))
    return doc, registry


def response_schema(doc, path, status):
    responses = doc["paths"][path]["get"]["responses"]
    response = responses[str(status)]
    if "$ref" in response:
        response = doc["components"]["responses"][response["$ref"].rsplit("/", 1)[1]]
    (media,) = response["content"].values()
    return {"$ref": "urn:openapi" + media["schema"]["$ref"]}


def test_api_contract(scored_store, openapi):
    doc, registry = openapi
    service = eg.Service(scored_store["store"], scored_store["scores"])
    reports = {r["listing_id"]: r for r in read_lines(scored_store["scores"] / "reports.jsonl")}
    listing_id = next(iter(reports))
    supplier = read_lines(scored_store["store"] / "suppliers.jsonl")[0]["id"]
    client = read_lines(scored_store["store"] / "clients.jsonl")[0]["id"]
    calls = [
        ("/v1/health", "/v1/health", {}, 200),
        ("/v1/listings", "/v1/listings", {"order": "asc", "page_size": "50"}, 200),
        ("/v1/listings", "/v1/listings", {"beds": "many"}, 400),
        ("/v1/listings/{listing_id}/ecograde", f"/v1/listings/{listing_id}/ecograde", {}, 200),
        ("/v1/listings/{listing_id}/ecograde", "/v1/listings/none/ecograde", {}, 404),
        ("/v1/listings/{listing_id}/advice", f"/v1/listings/{listing_id}/advice", {}, 200),
        ("/v1/corporate/{client_id}/dashboard", f"/v1/corporate/{client}/dashboard", {"as_of": "2025-01-01"}, 200),
        ("/v1/corporate/{client_id}/dashboard", f"/v1/corporate/{client}/dashboard", {"as_of": "soon"}, 400),
        ("/v1/suppliers/{supplier_id}/dashboard", f"/v1/suppliers/{supplier}/dashboard", {}, 200),
        ("/v1/suppliers/{supplier_id}/dashboard", "/v1/suppliers/nobody/dashboard", {}, 404),
    ]
    for template, path, query, status in calls:
        got, body = service.get(path, query)
        assert got == status, (path, body)
        validate(body, response_schema(doc, template, status), registry)
    assert service.get(f"/v1/listings/{listing_id}/ecograde")[1] == reports[listing_id]
    health = service.get("/v1/health")[1]
    assert health["snapshot"] == service.fingerprint
    months = service.get(f"/v1/corporate/{client}/dashboard", {"as_of": "2025-01-01"})[1]["months"]
    assert len(months) == 12


def get_json(url):
    try:
        with urllib.request.urlopen(url, timeout=5) as r:
            return r.status, r.read()
    except urllib.error.HTTPError as e:
        return e.code, e.read()


def test_serve_matches_score_output(cli, scored_store):
    proc = subprocess.Popen([cli, "serve", "--store", str(scored_store["store"]), "--scores",
                             str(scored_store["scores"]), "--port", "0"],
                            stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, text=True)
    try:
        line = proc.stdout.readline().strip()
        assert line.startswith("listening on ")
        base = "http://" + line.split()[-1]
        deadline = time.time() + 30
        while True:
            status, _ = get_json(base + "/v1/health")
            if status == 200 or time.time() > deadline:
                break
            assert status == 503
            time.sleep(0.05)
        assert status == 200
        reports = {r["listing_id"]: r for r in read_lines(scored_store["scores"] / "reports.jsonl")}
        status, body = get_json(base + "/v1/listings?page_size=500")
        assert status == 200
        for item in json.loads(body)["items"]:
            assert item["overall"] == reports[item["id"]]["overall"]
        some = next(iter(reports))
        status, body = get_json(f"{base}/v1/listings/{some}/ecograde")
        assert json.loads(body) == reports[some]
    finally:
        proc.send_signal(signal.SIGTERM)
        assert proc.wait(timeout=10) == 0
