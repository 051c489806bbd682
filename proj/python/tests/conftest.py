import json
import os
import shutil
import subprocess
from pathlib import Path

import pytest

ROOT = Path(os.environ.get("ECOGRADE_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def load_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def read_lines(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.fixture(scope="session")
def root():
    return ROOT


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("ECOGRADE_CLI") or shutil.which("ecograde")
    if not exe:
        pytest.skip("ecograde executable not available")
    return exe


@pytest.fixture(scope="session")
def scored_store(cli, tmp_path_factory):
    """Synthetic corpus run through ingest and score."""
    base = tmp_path_factory.mktemp("e2e")
    env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")

    def run(*args):
        return subprocess.run([cli, *map(str, args)], check=True, capture_output=True, text=True, env=env)

    run("validate", "--seeds", "11", "--cities", "2", "--addresses", "200", "--emit-corpus", "--out", base / "v")
    corpus = next((base / "v").glob("run_*")) / "corpus"
    run("ingest", corpus / "epc_export.csv", "--listings", corpus / "listings.jsonl", "--transport",
        corpus / "transport", "--bookings", corpus / "bookings.jsonl", "--clients", corpus / "clients.jsonl",
        "--suppliers", corpus / "suppliers.jsonl", "--out", base / "store")
    run("--config", ROOT / "config" / "ecograde.json", "score", "--store", base / "store", "--calib",
        ROOT / "config" / "ecograde.json", "--out", base / "scores")
    return {"base": base, "validate": next((base / "v").glob("run_*")), "store": base / "store",
            "scores": base / "scores"}
