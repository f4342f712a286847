import json
import subprocess
import sys

import pytest

from scimap import generate_synthetic, read_pajek_net, write_citation_csv
from scimap.cli import main


@pytest.fixture
def csv_file(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text(write_citation_csv(generate_synthetic(blocks=(15, 15, 15), bridge_journals=2).matrix))
    return p


def test_stepwise_commands(tmp_path, csv_file, capsys):
    t = tmp_path
    assert main(["ingest", str(csv_file), "--min-citing", "12", "--out", str(t / "m.bin")]) == 0
    assert main(["stats", str(t / "m.bin"), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 43
    assert main(["similarity", str(t / "m.bin"), "--out", str(t / "s.bin")]) == 0
    assert main(["graph", str(t / "s.bin"), "--rmin", "0.8", "--out", str(t / "g.bin")]) == 0
    assert main(["components", str(t / "g.bin"), "--min-size", "10", "--out", str(t / "d.bin")]) == 0
    report = capsys.readouterr().out
    assert "Nr of bi-components" in report and "Nr of articulation points" in report
    assert main(["components", str(t / "g.bin"), "--json"]) == 0
    stats = json.loads(capsys.readouterr().out)["three or more"]
    assert stats["n_components"] == 3 and stats["n_articulation_points"] == 2
    assert main(["decompose", str(t / "s.bin"), "--ladder", "0.8", "--out", str(t / "tree.json"),
                 "--classification", str(t / "c.csv")]) == 0
    assert (t / "c.csv").read_text().startswith("path,journal,threshold,component_size\n")
    assert main(["layout", str(t / "g.bin"), "--algo", "fr", "--iters", "50", "--out", str(t / "lay.json")]) == 0
    assert main(["export-pajek", str(t / "g.bin"), "--out", str(t / "g.net"),
                 "--classification", str(t / "c.csv"), "--clu", str(t / "g.clu")]) == 0
    assert read_pajek_net((t / "g.net").read_text()).n == 43
    assert main(["render", str(t / "g.bin"), str(t / "lay.json"), "--partition", str(t / "g.clu"),
                 "--highlight-articulation", "--out", str(t / "map.svg")]) == 0
    assert (t / "map.svg").read_text().count("<circle") == 43


def test_synth_and_pipeline(tmp_path, capsys):
    assert main(["synth", "--blocks", "10,10", "--bridges", "1", "--out", str(tmp_path / "x.csv")]) == 0
    cfg = tmp_path / "run.cfg"
    cfg.write_text("input = x.csv\nladder = 0.8\nmin_size = 5\n")
    assert main(["pipeline", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    assert "2 top-level clusters" in capsys.readouterr().out
    assert (tmp_path / "out" / "manifest.json").exists()


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("A,B,1\nA,B,x\n")
    assert main(["ingest", str(bad), "--out", str(tmp_path / "m.bin")]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["stats", str(tmp_path / "missing.csv")]) == 1
    assert main(["graph", str(bad), "--rmin", "0.5", "--out", str(tmp_path / "g.bin")]) == 1


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "scimap", "synth", "--blocks", "4,4", "--bridges", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("citing,cited,count\n")


def test_invariant_violation_exits_2(tmp_path, monkeypatch, capsys):
    import scimap.pipeline as pl
    from scimap import InvariantError

    def broken(tree):
        raise InvariantError("node 1 does not conserve its journals")

    monkeypatch.setattr(pl, "_verify_tree", broken)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("synth.blocks = 5,5\nladder = 0.8\nmin_size = 3\n")
    assert main(["pipeline", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "conserve" in capsys.readouterr().err
