import json
import subprocess
import sys

import pytest

from paracanonical.cli import build_parser, config_from_args, main
from paracanonical.core import ExactMatrix, GaussianRational
from paracanonical.cup import CupModule, build_koszul, describe, exterior_basis


def run_json(capsys, *argv):
    code = main([*argv, "--output", "json"])
    out = capsys.readouterr()
    return code, json.loads(out.out or out.err)


def test_ledger_builtins(capsys):
    code, doc = run_json(capsys, "ledger", "--builtin", "chen-hacon-cover")
    assert code == 0 and doc["status"] == "ok"
    assert doc["result"]["gap"] == -1
    _, doc = run_json(capsys, "ledger", "--builtin", "chen-hacon-general", "--n", "5")
    assert doc["result"]["gap"] == -3
    _, doc = run_json(capsys, "ledger", "--builtin", "genus2-product", "--n", "4")
    assert doc["result"]["gap"] == -3
    _, doc = run_json(capsys, "ledger", "--builtin", "complete-intersection", "--pg-y", "5")
    assert doc["result"]["gap"] == 5


def test_ledger_input_file(tmp_path, capsys):
    path = tmp_path / "hodge.json"
    path.write_text(json.dumps({"n": 3, "h": [1, 4, 6, 4], "flags": {"no_agt_fibration": True, "isolated_zero": True}}))
    code, doc = run_json(capsys, "ledger", "--input", str(path))
    assert code == 0
    assert doc["result"]["gap"] == 0 and doc["flags"]["isolated_zero"]
    assert doc["config"]["input"] == str(path)


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3,\n  "h": [1, 2,, 3]}')
    code = main(["ledger", "--input", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 2" in err and "column" in err


def test_missing_input_is_input_error(capsys):
    code, doc = run_json(capsys, "lift")
    assert code == 1 and doc["status"] == "error"


def test_transversality_builtin(capsys):
    code, doc = run_json(capsys, "transversality", "--builtin", "ample-divisor", "--q", "3", "--chi", "2", "--samples", "8")
    assert code == 0
    assert doc["incidence"]["dim_I_main"] == 3
    assert doc["isolated_point"].startswith("certified on sample")
    _, doc = run_json(capsys, "transversality", "--builtin", "koszul", "--q", "3", "--samples", "8")
    assert doc["incidence"]["dim_I_main"] == "no incidence"


def test_transversality_axiom_violation(tmp_path, capsys):
    good = build_koszul(3, 0)
    second = [list(r) for r in good.action[1].entries]
    second[exterior_basis(3, 2).index((0, 1))][1] = GaussianRational(2)
    bad = CupModule(3, good.graded_dims, (good.action[0], ExactMatrix(second, 9), good.action[2]), good.top_trace)
    path = tmp_path / "model.json"
    path.write_text(describe(bad).to_json())
    code, doc = run_json(capsys, "transversality", "--input", str(path))
    assert code == 2 and doc["status"] == "axiom_violation"
    assert "witness" in doc


def test_pfaffian_builtin(capsys):
    code, doc = run_json(capsys, "pfaffian", "--builtin", "ample-surface")
    assert code == 0 and doc["sigma"]["degree"] == "all of |K|"


def test_pfaffian_input(tmp_path, capsys):
    path = tmp_path / "family.json"
    path.write_text(json.dumps({"q": 2, "generators": [[["0", "1"], ["-1", "0"]], [["0", "i"], ["-i", "0"]]]}))
    code, doc = run_json(capsys, "pfaffian", "--input", str(path), "--samples", "4")
    assert code == 0 and doc["sigma"]["degree"] == 1
    assert all(p["type"] in ("smooth", "not_on_sigma") for p in doc["sample_points"])


def test_lift_elliptic(capsys):
    code, doc = run_json(capsys, "lift", "--builtin", "elliptic", "--order", "4")
    assert code == 0 and doc["verify"] == "pass"
    assert doc["tails"]["2"] == ["-1/2"]
    assert doc["lift"]["order_achieved"] == 4


@pytest.mark.parametrize("fixture,order", [("obstruct2", 2), ("obstruct3", 3), ("no-first-order", 1)])
def test_lift_obstructions_exit_three(capsys, fixture, order):
    code, doc = run_json(capsys, "lift", "--builtin", fixture)
    assert code == 3 and doc["status"] == "obstruction" and doc["order"] == order


def test_examples_summary_line(capsys):
    code = main(["examples", "--builtin", "ample-divisor", "--q", "4", "--samples", "8"])
    first = capsys.readouterr().out.splitlines()[0]
    assert code == 0
    assert first == "p_g = χ+q−1; verdict: |K| ⊂ P_main candidates satisfied"


def test_sweep(capsys):
    code, doc = run_json(capsys, "sweep", "--max-n", "3", "--max-h", "3")
    assert code == 0 and doc["counterexample_count"] == 0
    code, _ = run_json(capsys, "sweep", "--max-n", "9")
    assert code == 1


def test_seed_precedence():
    parser = build_parser()
    assert config_from_args(parser.parse_args(["sweep"]), environ={}).seed == 0
    assert config_from_args(parser.parse_args(["sweep"]), environ={"PARACANONICAL_SEED": "7"}).seed == 7
    assert config_from_args(parser.parse_args(["sweep", "--seed", "3"]), environ={"PARACANONICAL_SEED": "7"}).seed == 3


def test_same_seed_same_report(capsys):
    argv = ("transversality", "--builtin", "ample-divisor", "--q", "4", "--samples", "6", "--seed", "5")
    assert run_json(capsys, *argv) == run_json(capsys, *argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "paracanonical", "ledger", "--builtin", "genus2-product", "--output", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["gap"] == -2
