"""Command-line front end: reports, exit codes and the experiment runner."""

import hashlib
import json
import subprocess
import sys

import pytest

from treeforge import cli
from treeforge import generators as gen


def run_cli(args, stdin=None):
    return subprocess.run([sys.executable, "-m", "treeforge.cli", *args], input=stdin,
                          capture_output=True, text=True)


@pytest.fixture
def k5(tmp_path):
    p = tmp_path / "k5.json"
    p.write_text(gen.complete(5).dumps())
    return p


def test_tile_pipe_treeing():
    tile = run_cli(["tile", "--pq", "4", "5", "--layers", "6"])
    assert tile.returncode == 0
    out = run_cli(["treeing", "--verify"], stdin=tile.stdout)
    assert out.returncode == 0, out.stderr
    rep = json.loads(out.stdout)
    assert rep["ok"] and all(i["pass"] for i in rep["invariants"])


def test_iso_exact_k5(k5, capsys):
    assert cli.main(["iso", "--exact", str(k5)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["result"]["ratio"] == "1/4" and rep["result"]["ratio_float"] == 0.25


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 3,\n "edges": [[0, 1],,]}')
    assert cli.main(["verify", str(p)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["line"] == 2 and "column" in err and "position" in err


def test_bad_window(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"n": 2, "edges": [[0, 0]]}))
    assert cli.main(["verify", str(p)]) == 2


def test_invariant_failure_exit_1(capsys):
    # a closed sphere has no dual vertex at infinity
    assert cli.main(["complex", "ominus", "--gen", "sphere:2"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert not rep["ok"]


def test_report_schema_and_hash(k5, capsys):
    cli.main(["iso", "--exact", str(k5)])
    rep = json.loads(capsys.readouterr().out)
    assert rep["schema"] == "treeforge.report/1"
    assert rep["command"] == "iso"
    canon = json.dumps(rep["config"], sort_keys=True, separators=(",", ":"))
    assert rep["config_hash"] == hashlib.sha256(canon.encode()).hexdigest()
    for i in rep["invariants"]:
        assert set(i) <= {"name", "pass", "detail"}


def test_gen_roundtrip(tmp_path):
    out = tmp_path / "g.json"
    assert cli.main(["gen", "grid", "--rows", "5", "-o", str(out)]) == 0
    from treeforge.graph import Window

    w = Window.from_json(json.loads(out.read_text()))
    assert w.n == 25 and w.m == 40


@pytest.mark.parametrize("args", [
    ["dual", "--double"],
    ["forest", "--method", "layered"],
    ["forest", "--method", "random", "--seed", "3"],
    ["verify", "--basis"],
    ["iso", "--greedy"],
])
def test_window_commands(tmp_path, capsys, args):
    p = tmp_path / "w.json"
    p.write_text(gen.grid(7).dumps())
    assert cli.main([*args, str(p)]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]


def test_forest_two_ended_is_invariant_failure(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text(gen.path(15).dumps())
    assert cli.main(["forest", "--method", "one-ended", str(p)]) == 1


def test_ominus_subcommand(tmp_path, capsys):
    p = tmp_path / "k4.json"
    p.write_text(gen.planar_k4().dumps())
    assert cli.main(["ominus", "--sub", "[]", str(p)]) == 0
    assert cli.main(["ominus", "--sub", "99", str(p)]) in (1, 2)


@pytest.mark.parametrize("action", ["dual", "ominus", "collapse", "homology"])
def test_complex_actions(action, capsys):
    assert cli.main(["complex", action, "--gen", "disk:4"]) == 0


def test_render_svg_deterministic(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text(gen.grid(4).dumps())
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli.main(["render", "--plain", str(p), "-o", str(a)]) == 0
    assert cli.main(["render", "--plain", str(p), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<svg")
    assert cli.main(["render", "--format", "dot", str(p), "-o", str(a)]) == 0
    assert "graph" in a.read_text()


def test_config_roundtrip():
    cfg = cli.ExperimentConfig("complex", {"gen": "disk:5"}, [0, 1], {"x": 1e-9}, {"report": "r.json"},
                               ["json", "svg"])
    again = cli.ExperimentConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg


@pytest.mark.parametrize("data", [
    [],
    {"params": {}},
    {"command": "nope"},
    {"command": "tile", "bogus": 1},
    {"command": "tile", "seeds": ["a"]},
])
def test_config_rejects(data):
    with pytest.raises(cli.ConfigError):
        cli.ExperimentConfig.from_json(data)


def test_run_deterministic_and_threads(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "complex", "params": {"gen": "disk:6"}, "seeds": [0, 1, 2, 3]}))
    outs = []
    for n in ("1", "4"):
        r = tmp_path / f"r{n}.json"
        monkeypatch.setenv("TREEFORGE_THREADS", n)
        assert cli.main(["run", str(cfg), "--report", str(r)]) == 0
        outs.append(r.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert [x["seed"] for x in rep["result"]["runs"]] == [0, 1, 2, 3]


def test_run_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "nope"}))
    assert cli.main(["run", str(cfg)]) == 2
