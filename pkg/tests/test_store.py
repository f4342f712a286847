import numpy as np
import pytest

from scimap import InputError, bicomponents, generate_synthetic, pearson_similarity, threshold_graph, store
from scimap.store import load, load_labels, save


@pytest.fixture(scope="module")
def objects():
    m = generate_synthetic(blocks=(5, 5), bridge_journals=1).matrix
    s = pearson_similarity(m)
    g = threshold_graph(s, 0.5)
    return m, s, g, bicomponents(g)


def test_roundtrip_all_kinds(tmp_path, objects):
    m, s, g, d = objects
    for obj, kind in zip(objects, ("matrix", "similarity", "graph", "decomposition")):
        p = tmp_path / f"{kind}.bin"
        save(obj, p, labels=g.labels)
        back = load(p, expect=kind)
        assert back == obj
        assert store.is_container(p)
    assert load_labels(tmp_path / "decomposition.bin") == g.labels


def test_wrong_kind_and_garbage(tmp_path, objects):
    p = tmp_path / "m.bin"
    save(objects[0], p)
    with pytest.raises(InputError):
        load(p, expect="graph")
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"not a container at all")
    with pytest.raises(InputError):
        load(bad)
    trunc = tmp_path / "trunc.bin"
    trunc.write_bytes(p.read_bytes()[:-5])
    with pytest.raises(InputError):
        load(trunc)


def test_atomic_write_leaves_no_temp(tmp_path):
    store.write_atomic(tmp_path / "sub" / "x.txt", "hello")
    assert [f.name for f in (tmp_path / "sub").iterdir()] == ["x.txt"]
