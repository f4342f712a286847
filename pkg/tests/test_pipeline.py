import json

import pytest

from scimap import InputError, PipelineError, generate_synthetic, write_citation_csv
from scimap.pipeline import parse_config, run_pipeline

CONFIG = """# planted three-block run
synth.blocks = 15,15,15
synth.bridges = 2
ladder = 0.8
min_size = 10
"""


@pytest.fixture(scope="module")
def result(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    return run_pipeline(CONFIG, out_dir=out), out


def test_recovers_planted_blocks(result):
    res, _ = result
    assert [n.size for n in res.tree.roots] == [15, 15, 15]
    top = res.manifest["decomposition"]["top"]
    assert top["articulation_journals"] == ["X1", "X2"]
    assert top["bicomponents"] == 3 and top["journals_included"] == 43


def test_outputs_written(result):
    res, out = result
    for name in res.manifest["outputs"]:
        assert (out / name).read_text(encoding="utf-8") == res.files[name]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config_text"] == CONFIG
    assert manifest["parameters"]["ladder"] == [0.8]
    assert manifest["filter"] == {
        "input": 43, "min_citing": 12, "excluded": 0, "retained": 43,
        "excluded_journals": [], "nonzero_after": manifest["filter"]["nonzero_after"],
    }
    assert set(res.maps) == {"overview.svg", "cluster-1.svg", "cluster-2.svg", "cluster-3.svg"}


def test_csv_input_and_filter(tmp_path):
    m = generate_synthetic(blocks=(12, 12), bridge_journals=1, seed=2).matrix
    (tmp_path / "m.csv").write_text(write_citation_csv(m))
    cfg = tmp_path / "run.cfg"
    cfg.write_text("input = m.csv\nladder = 0.8\nmin_size = 5\nmin_citing = 1000000\n")
    with pytest.raises(PipelineError) as exc:
        run_pipeline(str(cfg))
    # everything filtered away: similarity needs two journals
    assert exc.value.stage == "similarity" and exc.value.exit_code == 1
    cfg.write_text("input = m.csv\nladder = 0.8\nmin_size = 5\n")
    res = run_pipeline(str(cfg))
    assert len(res.tree.roots) == 2


@pytest.mark.parametrize("text", [
    "ladder = 0.8\n",
    "input = a.csv\nsynth.blocks = 3,3\n",
    "synth.blocks = 5,5\nbogus = 1\n",
    "synth.blocks = 5,x\n",
])
def test_bad_configs(text):
    with pytest.raises(InputError):
        parse_config(text)


def test_missing_input_is_input_error(tmp_path):
    with pytest.raises(PipelineError) as exc:
        run_pipeline(f"input = {tmp_path / 'nope.csv'}\n")
    assert exc.value.stage == "ingest" and exc.value.exit_code == 1


def test_two_block_manifest():
    res = run_pipeline("synth.blocks = 15,15\nsynth.bridges = 1\nladder = 0.8\n")
    dec = res.manifest["decomposition"]
    assert dec["final_clusters"] == 2
    assert dec["top"]["articulation_journals"] == ["X1"]


def test_tiny_max_size_exhausts_ladder():
    res = run_pipeline("synth.blocks = 15,15\nsynth.bridges = 1\nladder = 0.8\nmax_size = 5\n")
    assert [n.status for n in res.tree.walk()] == ["ladder-exhausted"] * 2
    assert res.manifest["decomposition"]["ladder_exhausted"] == ["1", "2"]


def test_clu_matches_classification(result):
    from scimap import read_pajek_clu, read_pajek_net

    res, out = result
    net = read_pajek_net((out / "network.net").read_text())
    clu = read_pajek_clu((out / "clusters.clu").read_text())
    assert clu.n == len(res.tree.labels)
    top = res.classification.top_level()
    # every labelled vertex of the network carries its top-level cluster number
    by_label = dict(zip(res.tree.labels, clu.clusters))
    for lab in net.labels:
        assert by_label[lab] == top.get(lab, 0)
    assert set(clu.clusters) == {1, 2, 3}


def test_manifest_counts_consistent(result):
    res, _ = result
    m = res.manifest
    assert m["filter"]["excluded"] + m["filter"]["retained"] == m["filter"]["input"]
    for rung in m["thresholds"]:
        assert rung["connected"] + rung["unconnected"] == m["filter"]["retained"]
