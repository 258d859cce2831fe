"""End-to-end CLI tests via subprocess: exit codes, schema validity, determinism."""

import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "momentforge", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


@pytest.fixture(scope="module")
def schema():
    text = resources.files("momentforge").joinpath("schemas/output.schema.json").read_text()
    return json.loads(text)


def check_json(proc, schema):
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    jsonschema.validate(payload, schema)
    manifest = json.loads(proc.stderr.strip().splitlines()[-1])
    for key in ("subcommand", "parameters", "tool_version", "output", "wall_time_s"):
        assert key in manifest
    return payload, manifest


SMOKE_COMMANDS = [
    ("moments", ["moments", "--family", "domino", "--m", "2", "--n", "3", "--r", "3"]),
    ("central", ["central", "--family", "boolean", "--n", "3", "--k", "0", "--r", "4"]),
    (
        "binomial-moments",
        ["binomial-moments", "--family", "invmaj", "--n", "6", "--r", "4"],
    ),
    ("pgf", ["pgf", "--family", "invmaj", "--n", "4"]),
    (
        "normality",
        ["normality", "--family", "domino", "--n-grid", "11,101,1001", "--r-max", "4"],
    ),
    (
        "mgf-limit",
        ["mgf-limit", "--family", "board1n", "--n", "500", "--t-steps", "5"],
    ),
    ("oracle", ["oracle", "--family", "schur", "--n", "6", "--c", "2"]),
    (
        "fit",
        ["fit", "--family", "schur", "--r", "1", "--c", "2", "--period", "2",
         "--degree", "2", "--n-min", "1", "--n-max", "14"],
    ),
    ("identities", ["identities", "--r-max", "6"]),
    ("approx-h", ["approx-h", "--n", "3", "--k", "1", "--with-polynomial"]),
]


@pytest.mark.parametrize("name,args", SMOKE_COMMANDS, ids=[c[0] for c in SMOKE_COMMANDS])
def test_every_subcommand_emits_schema_valid_json(name, args, schema):
    payload, manifest = check_json(run_cli(*args), schema)
    assert payload["subcommand"] == name
    assert manifest["subcommand"] == name


@pytest.mark.parametrize("name,args", SMOKE_COMMANDS, ids=[c[0] for c in SMOKE_COMMANDS])
def test_reruns_are_byte_identical(name, args, schema):
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout  # manifests differ only in wall time, on stderr


def test_domino_moments_table_value(schema):
    proc = run_cli("moments", "--family", "domino", "--m", "2", "--n", "3", "--r", "3")
    payload, _ = check_json(proc, schema)
    assert payload["result"]["scaled_entries"][3] == "3920"


def test_pgf_trivial_case():
    proc = run_cli("pgf", "--family", "invmaj", "--n", "1")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["polynomial"] == "1"


def test_identities_rows_all_ok(schema):
    proc = run_cli("identities", "--r-max", "10")
    payload, _ = check_json(proc, schema)
    assert payload["result"]["all_ok"] is True
    rows = payload["result"]["rows"]
    assert {"r": 4, "t": 2, "value": "3/16", "expected": "3/16", "ok": True} in rows


def test_csv_format_and_out_file(tmp_path):
    out = tmp_path / "hist.csv"
    proc = run_cli(
        "oracle", "--family", "invmaj", "--n", "4", "--format", "csv", "--out", str(out)
    )
    assert proc.returncode == 0
    assert proc.stdout == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "value,count"
    assert lines[1] == "0,1"
    manifest = json.loads(proc.stderr.strip().splitlines()[-1])
    assert manifest["output"] == str(out)


def test_normality_csv_columns():
    proc = run_cli(
        "normality", "--family", "invmaj", "--n-grid", "4,6,8", "--r-max", "4",
        "--format", "csv",
    )
    assert proc.returncode == 0
    header = proc.stdout.splitlines()[0]
    assert header == "family,params,r,n,m_r,target,deviation,verdict"


def test_oracle_sampling_mode_reproducible(schema):
    args = ["oracle", "--family", "boolean", "--n", "4", "--k", "1",
            "--samples", "200", "--seed", "99"]
    a, _ = check_json(run_cli(*args), schema)
    b, _ = check_json(run_cli(*args), schema)
    assert a == b
    assert a["result"]["mode"] == "sample"
    assert a["result"]["seed"] == 99


def test_oracle_sampling_needs_seed():
    proc = run_cli("oracle", "--family", "boolean", "--n", "4", "--k", "1",
                   "--samples", "10")
    assert proc.returncode == 1
    assert "seed" in proc.stderr


def test_usage_errors_exit_1():
    for args in (
        ["moments", "--family", "nosuch", "--n", "3"],
        ["moments", "--family", "schur", "--n", "4", "--r", "7"],
        ["oracle", "--family", "invmaj", "--n", "12"],  # guard: 12! too large
        ["no-such-command"],
        ["mgf-limit", "--family", "invmaj", "--n", "1"],
    ):
        proc = run_cli(*args)
        assert proc.returncode == 1, (args, proc.stderr)


def test_fit_verification_failure_exits_2():
    proc = run_cli(
        "fit", "--family", "schur", "--r", "2", "--c", "2", "--period", "12",
        "--degree", "3", "--n-min", "13", "--n-max", "120",
    )
    assert proc.returncode == 2
    assert "verification mismatch" in proc.stderr


def test_threads_env_fallback(schema):
    args = ["fit", "--family", "schur", "--r", "1", "--c", "3", "--period", "2",
            "--degree", "2", "--n-min", "1", "--n-max", "14"]
    base, _ = check_json(run_cli(*args), schema)
    threaded, _ = check_json(run_cli(*args), schema)
    env, _ = check_json(run_cli(*args, env_extra={"MOMENTFORGE_THREADS": "3"}), schema)
    assert base == threaded == env


def test_mgf_limit_json_fields(schema):
    proc = run_cli("mgf-limit", "--family", "invmaj", "--n", "50", "--t-steps", "9")
    payload, _ = check_json(proc, schema)
    result = payload["result"]
    assert result["n"] == 50
    assert len(result["rows"]) == 9
    assert float(result["sup_deviation"]) < 0.3


def test_approx_h_fields(schema):
    proc = run_cli("approx-h", "--n", "4", "--k", "1")
    payload, _ = check_json(proc, schema)
    r = payload["result"]
    assert r["p"] == "1/4"
    assert r["mean"] == "15/2"  # n(2^n - 1)/8 at n = 4
    assert r["exact_mean"] == "8"  # n 2^n / 8
