import json
import re
from pathlib import Path

import pytest

from titeica import checks as C
from titeica.cli import main

DOCS = Path(__file__).resolve().parents[1] / "docs" / "checks.md"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_eval_examples(capsys):
    code, r = report(capsys, "eval", "titeica-sinh", "--u", "1", "--v", "1")
    assert code == 0 and abs(r["result"]["residual_h"]) <= 1e-10
    code, r = report(capsys, "eval", "liouville-general", "--preset", "identity", "--u", "1", "--v", "1")
    assert code == 0 and r["result"]["h"] == 0.5
    code, r = report(capsys, "eval", "titeica-const", "--u", "0", "--v", "0")
    assert r["result"]["h"] == 1.0 and r["result"]["residual_h"] == 0.0


def test_eval_domain_error(capsys):
    code, out, err = run(capsys, "eval", "liouville-general", "--u", "1", "--v", "-1")
    assert code == 1 and "outside the domain" in err


def test_verify_conservation(capsys):
    code, r = report(capsys, "verify", "conservation", "--seed", "7")
    assert code == 0
    assert len(r["checks"]) == 7 and r["summary"] == {"passed": 7, "failed": 0}
    assert set(r["checks"][0]) == {"name", "paper_ref", "n_samples", "max_defect", "tolerance", "pass"}


def test_verify_adjoint(capsys):
    code, r = report(capsys, "verify", "adjoint", "--eps", "0.5")
    assert code == 0 and len(r["checks"]) == 9


def test_failing_check_exits_one(capsys):
    code, r = report(capsys, "verify", "adjoint", "--tol-identity", "-1")
    assert code == 1 and r["summary"]["failed"] == 9


def test_reports_are_deterministic(capsys):
    _, a = report(capsys, "verify", "liouville", "--seed", "3")
    _, b = report(capsys, "verify", "liouville", "--seed", "3")
    a.pop("timing_ms"), b.pop("timing_ms")
    assert json.dumps(a) == json.dumps(b)


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TITEICA_SEED", "11")
    _, r = report(capsys, "verify", "liouville")
    assert r["config_echo"]["seed"] == 11
    _, r = report(capsys, "verify", "liouville", "--seed", "2")
    assert r["config_echo"]["seed"] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("# settings\n[verify]\nseed = 5\nn_points = 10  # fewer\n")
    _, r = report(capsys, "verify", "liouville", "--config", str(cfg))
    assert r["config_echo"]["seed"] == 5 and r["checks"][0]["n_samples"] == 20  # two points per requested sample
    _, r = report(capsys, "verify", "liouville", "--config", str(cfg), "--n-points", "12")
    assert r["checks"][0]["n_samples"] == 24


@pytest.mark.parametrize("text", ["[verify]\ncolour = red\n", "[plot]\nx = 1\n", "[verify]\nseed = abc\n"])
def test_bad_config(capsys, tmp_path, text):
    cfg = tmp_path / "c.ini"
    cfg.write_text(text)
    code, _, err = run(capsys, "verify", "liouville", "--config", str(cfg))
    assert code == 2 and err.startswith("error:")


def test_usage_errors(capsys):
    assert run(capsys, "verify", "nosuch")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "surface", "hyperbolic", "--export", "csv")[0] == 2


def test_surface_obj(capsys, tmp_path):
    out = tmp_path / "s.obj"
    code, r = report(capsys, "surface", "nonruled-const", "--nu", "51", "--nv", "51", "--du", "0.02", "--dv", "0.02",
                     "--export", "obj", "--out", str(out))
    assert code == 0 and r["result"]["spread_I"] <= 1e-4
    assert out.read_text().count("\nf ") == 2 * 50 * 50


def test_surface_hyperbolic_csv(capsys, tmp_path):
    out = tmp_path / "h.csv"
    code, r = report(capsys, "surface", "hyperbolic", "--c", "1.0", "--export", "csv", "--out", str(out))
    assert code == 0 and r["result"]["spread_I"] <= 1e-10
    assert len(out.read_text().splitlines()) == 51 * 51 + 1


def test_surface_grid_cap(capsys):
    code, _, err = run(capsys, "surface", "nonruled-const", "--nu", "2000", "--nv", "2000")
    assert code == 2 and "cap" in err


def test_pretty_and_out(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "adjoint", "--pretty")
    assert code == 0 and out.count("PASS") == 9
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "adjoint", "--out", str(dest))
    assert out == "" and json.loads(dest.read_text())["summary"]["failed"] == 0


def test_every_paper_ref_is_documented(capsys):
    doc = DOCS.read_text()
    refs = {c.paper_ref for c in C.run_suite("all", C.Settings(seed=1, n_points=5, n_jets=20, n_fields=2))}
    for argv in (["eval", "titeica-const", "--u", "0", "--v", "0"], ["surface", "nonruled-const", "--nu", "5", "--nv", "5"]):
        refs |= {c["paper_ref"] for c in report(capsys, *argv)[1]["checks"]}
    documented = set(re.findall(r"`([^`]+)`", doc))
    assert refs <= documented, refs - documented
