import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pydot
import pytest

from netbound.cli import main

DATA = resources.files("netbound") / "data"
SCHEMA = json.loads((resources.files("netbound") / "schemas" / "report.schema.json").read_text())
LAYERED = ["z_channel.json", "parallel_pipes_k2.json", "kkk_gf2_good.json", "kkk_gf2_bad.json",
           "and_fully_connected_k2.json"] + [f"adjacent_k{k}.json" for k in range(3, 9)]
KKK = ["kkk_gf2_good.json", "kkk_gf2_bad.json", "and_fully_connected_k2.json",
       "adjacent_k3.json", "adjacent_k5.json"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data


def test_bound_pair_z(capsys):
    assert run_json(capsys, "bound", "--method", "pair", "examples/z_channel.json")["bound"] == 1


def test_bound_classic_z(capsys):
    assert run_json(capsys, "bound", "--method", "classic", "examples/z_channel.json")["bound"] == 2


def test_bound_given_cut(capsys):
    data = run_json(capsys, "bound", "--method", "pair", "--omega", "s1,s2,d2", "--theta", "s2",
                    "examples/z_channel.json")
    assert data["bound"] == 1 and data["method"] == "pair-eval"
    assert data["terms"] == [{"layer": 1, "omega": 1, "theta": 1, "cross": 1, "value": 1}]


def test_bound_with_oracle(capsys):
    data = run_json(capsys, "bound", "--oracle", "examples/kkk_gf2_bad.json")
    assert data["stats"]["oracle"]["agrees"]


def test_adjacent(capsys):
    assert run_json(capsys, "adjacent", "--k", "7")["bound"] == 5
    code, out, _ = run(capsys, "adjacent", "--k", "7", "--format", "text")
    assert code == 0 and out.split("\n")[0].split(":")[1].split()[0] == "5"
    assert run_json(capsys, "adjacent", "--k", "5", "--oracle")["stats"]["oracle"]["agrees"]


def test_gns(capsys):
    data = run_json(capsys, "gns", "--ell", "2", "--max-size", "3", "examples/gns_bottleneck.json")
    assert data["bound"] == 1 and data["witness"]["edges"] == [["a", "b"]]
    code, out, _ = run(capsys, "gns", "--ell", "2", "--max-size", "3", "--format", "text",
                       "examples/gns_bottleneck.json")
    assert "['a', 'b']" in out


def test_kkk_check(capsys):
    good = run_json(capsys, "kkk-check", "--oracle", "examples/kkk_gf2_good.json")
    assert good["achieves_K"] and good["oracle"]["oracle_value"]
    bad = run_json(capsys, "kkk-check", "--oracle", "examples/kkk_gf2_bad.json")
    assert not bad["achieves_K"] and bad["fallback_bound"] == 1 and not bad["oracle"]["oracle_value"]
    generic = run_json(capsys, "kkk-check", "examples/adjacent_k3.json")
    assert generic["method"] == "theorem2" and not generic["achieves_K"]


def test_and_sim(capsys):
    data = run_json(capsys, "and-sim", "--seed", "3", "examples/and_fully_connected_k2.json")
    assert data["zero_interference"] and data["identity"] and data["directions"] == 16
    code, out, _ = run(capsys, "and-sim", "--format", "text", "examples/and_fully_connected_k2.json")
    assert code == 0 and "T~[1, 1, 1, 1] =" in out


def test_and_sim_rejects_non_diagonalizable(capsys):
    code, _, err = run(capsys, "and-sim", "examples/adjacent_k3.json")
    assert code == 1 and "diagonalizable" in err


def test_oracle_subcommand(capsys):
    assert run_json(capsys, "oracle", "examples/z_channel.json")["bound"] == 1
    assert run_json(capsys, "oracle", "examples/kkk_gf2_good.json")["oracle_value"] is True


def test_exit_codes(capsys, monkeypatch, tmp_path):
    assert run(capsys, "bound", "examples/missing.json")[0] == 1
    assert run(capsys, "bound", "--omega", "s1,zz", "examples/z_channel.json")[0] == 1
    assert run(capsys, "bound", "--omega", "s1,s2,d1", "examples/z_channel.json")[0] == 1
    assert run(capsys, "bound", "--method", "bogus", "examples/z_channel.json")[0] == 1
    assert run(capsys, "kkk-check", "--format", "dot", "examples/kkk_gf2_bad.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "bound", str(bad))
    assert code == 1 and "line 1" in err
    monkeypatch.setenv("NETBOUND_LIMITS", "max_width=2")
    assert run(capsys, "bound", "examples/adjacent_k3.json")[0] == 2


@pytest.mark.parametrize("name", LAYERED)
@pytest.mark.parametrize("method", ["classic", "pair"])
def test_every_bound_report_validates(capsys, name, method):
    data = run_json(capsys, "bound", "--method", method, f"examples/{name}")
    assert data["bound"] == sum(t["value"] for t in data["terms"])


@pytest.mark.parametrize("name", KKK)
def test_every_verdict_validates(capsys, name):
    run_json(capsys, "kkk-check", f"examples/{name}")


@pytest.mark.parametrize("name", LAYERED)
def test_dot_parses(capsys, name):
    code, out, _ = run(capsys, "bound", "--format", "dot", f"examples/{name}")
    assert code == 0 and pydot.graph_from_dot_data(out)


def test_gns_dot_parses(capsys):
    code, out, _ = run(capsys, "gns", "--format", "dot", "examples/gns_bottleneck.json")
    assert code == 0 and pydot.graph_from_dot_data(out)


@pytest.mark.parametrize("argv", [
    ["bound", "examples/adjacent_k6.json"],
    ["and-sim", "--seed", "12345678901234", "examples/and_fully_connected_k2.json"],
    ["gns", "--ell", "3", "examples/gns_bottleneck.json"],
    ["kkk-check", "--oracle", "examples/kkk_gf2_good.json"],
])
def test_byte_identical_output(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_console_script_and_help():
    out = subprocess.run([sys.executable, "-m", "netbound.cli", "bound", "--help"],
                         capture_output=True, text=True, check=True).stdout
    for flag in ("--method", "--omega", "--theta", "--format", "--oracle", "--seed"):
        assert flag in out
    top = subprocess.run([sys.executable, "-m", "netbound.cli", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "NETBOUND_LIMITS" in top
    for sub in ("bound", "kkk-check", "gns", "and-sim", "adjacent", "oracle"):
        assert sub in top
