import json
import os
import subprocess

import pytest

BNEG = os.environ.get("BNEG_CLI", "bneg")


def run(*args):
    return subprocess.run([BNEG, *map(str, args)], capture_output=True, text=True)


def test_equation_examples():
    r = run("equation", "--p", 3, "--m", 1, "--e", 1)
    assert r.returncode == 0
    assert "x0^2 + x0*x1 + x0*x2 + x1^2 + x1*x2 + x2^2" in r.stdout
    assert "equal up to scalar" in r.stdout
    r = run("equation", "--p", 5, "--m", 4, "--e", 1)
    assert r.returncode == 0
    assert r.stdout.strip().endswith("x0 + x1 + x2")
    assert run("equation", "--p", 5, "--m", 3, "--e", 1).returncode == 2


def test_equation_json_roundtrip_shape():
    r = run("equation", "--p", 5, "--m", 4, "--e", 2, "--format", "json")
    j = json.loads(r.stdout)
    assert j["schema"] == 1
    assert j["params"]["d"] == 6
    assert j["polynomial"]["degree"] == 6


@pytest.mark.parametrize("p,m,e,c2", [(5, 4, 2, -7), (2, 3, 4, -1), (5, 4, 1, -2), (7, 6, 2, -25)])
def test_verify_passes(p, m, e, c2):
    r = run("verify", "--p", p, "--m", m, "--e", e, "--format", "json")
    assert r.returncode == 0, r.stdout
    j = json.loads(r.stdout)
    assert j["summary"]["self_intersection"] == c2
    assert "timings_ms" not in j


def test_verify_mult_at_111_matches_count():
    j = json.loads(run("verify", "--p", 2, "--m", 3, "--e", 4, "--format", "json").stdout)
    z = next(c for c in j["checks"] if c["check"] == "zeta_fermat")
    assert z["pass"]
    assert z["detail"]["from_count"] == z["detail"]["geometric"]


def test_reports_are_byte_identical():
    a = run("verify", "--p", 5, "--m", 4, "--e", 2, "--format", "json").stdout
    b = run("verify", "--p", 5, "--m", 4, "--e", 2, "--format", "json").stdout
    assert a == b


def test_timings_opt_in():
    j = json.loads(run("verify", "--p", 5, "--m", 4, "--e", 1, "--format", "json", "--timings").stdout)
    assert set(j["timings_ms"]) == {c["check"] for c in j["checks"]}


FAULTS = ["field", "equation", "mult", "self_intersection", "rationality", "singular_locus",
          "galois_intersection", "lift", "blowup_model", "psi", "graph_correspondence", "rel_frobenius",
          "fermat_count", "zeta_fermat", "gamma_relation", "log_invariants"]


@pytest.mark.parametrize("fault", FAULTS)
def test_fault_injection_names_witness(fault):
    r = run("verify", "--p", 5, "--m", 4, "--e", 1, "--inject-fault", fault, "--format", "json")
    assert r.returncode == 1
    j = json.loads(r.stdout)
    name = "multiplicities" if fault == "mult" else fault
    rec = next(c for c in j["checks"] if c["check"] == name)
    assert not rec["pass"]
    assert rec["witness"] is not None
    assert name in j["summary"]["failed"]


def test_fault_on_informational_or_unknown_is_usage():
    assert run("verify", "--p", 5, "--m", 4, "--e", 1, "--inject-fault", "shioda_katsura").returncode == 2
    assert run("verify", "--p", 5, "--m", 4, "--e", 1, "--inject-fault", "nope").returncode == 2


def test_budgets_exit_3():
    assert run("verify", "--p", 2, "--m", 1, "--e", 7).returncode == 3
    assert run("verify", "--p", 5, "--m", 4, "--e", 2, "--budget-q", 16).returncode == 3
    assert run("equation", "--p", 5, "--m", 1, "--e", 2, "--budget-d", 10).returncode == 3


def test_usage_errors():
    assert run().returncode == 2
    assert run("verify", "--p", 4, "--m", 1).returncode == 2
    assert run("verify", "--p", 5, "--m", 4, "--format", "yaml").returncode == 2
    assert run("fermat", "--m", 3, "--q", 6).returncode == 2


def test_identity_and_fermat():
    assert run("identity", "--max-n", 64).returncode == 0
    r = run("fermat", "--m", 3, "--q", 4)
    assert r.returncode == 0 and r.stdout.strip() == "9"
    assert run("fermat", "--m", 2, "--q", 9).stdout.strip() == "10"
    j = json.loads(run("fermat", "--m", 3, "--q", 4, "--format", "json", "--method", "naive").stdout)
    assert j == {"m": 3, "q": 4, "count": 9, "method": "naive", "sk_formula": 3, "sk_applicable": True,
                 "sk_match": False}


def write(tmp_path, obj):
    path = tmp_path / "grid.json"
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_survey_empty_grid(tmp_path):
    cfg = write(tmp_path, {"grid": {"p": [], "m": {"min": 1, "max": 4}, "max_q": 100}})
    r = run("survey", "--config", cfg, "--format", "csv")
    assert r.returncode == 0
    assert r.stdout.count("\n") == 1


def test_survey_rows(tmp_path):
    cfg = write(tmp_path, {"grid": {"p": [2, 3, 5, 7], "m": {"min": 1, "max": 6}, "max_q": 4096}})
    r = run("survey", "--config", cfg, "--format", "json")
    assert r.returncode == 0
    j = json.loads(r.stdout)
    assert j["rows"] and all(row["pass"] for row in j["rows"])
    keys = [(row["p"], row["m"], row["e"]) for row in j["rows"]]
    assert keys == sorted(keys)
    row = next(row for row in j["rows"] if (row["p"], row["m"], row["e"]) == (5, 4, 2))
    assert row["self_intersection"] == -7
    assert r.stdout == run("survey", "--config", cfg, "--format", "json").stdout


def test_survey_malformed(tmp_path):
    assert run("survey", "--config", write(tmp_path, "{not json")).returncode == 2
    assert run("survey", "--config", write(tmp_path, {"grid": {"p": [4], "m": [1], "max_q": 9}})).returncode == 2
    assert run("survey", "--config", write(tmp_path, {"grid": {"p": [2]}})).returncode == 2
    assert run("survey", "--config", str(tmp_path / "missing.json")).returncode == 2
