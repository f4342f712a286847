import numpy as np
import pytest

from scimap import articulation_report, classify, decompose, generate_synthetic, pearson_similarity
from scimap.decompose import split_at

from oracles import dense_to_matrix, sparse_counts


@pytest.fixture(scope="module")
def planted():
    p = generate_synthetic(blocks=(15, 15, 15), bridge_journals=2, seed=3)
    return p, pearson_similarity(p.matrix)


def test_planted_single_rung(planted):
    p, s = planted
    tree = decompose(s, [0.8])
    assert sorted(tuple(n.vertices) for n in tree.roots) == sorted(p.blocks)
    assert [n.path for n in tree.roots] == ["1", "2", "3"]
    assert all(n.status == "leaf" for n in tree.roots)
    assert tree.top.articulation_points == tuple(p.bridges)
    assert articulation_report(tree, 0.8) == ["X1", "X2"]
    with pytest.raises(KeyError):
        articulation_report(tree, 0.9)


def test_children_sorted_by_size_then_label():
    p = generate_synthetic(blocks=(8, 12, 10), bridge_journals=0, seed=1)
    tree = decompose(pearson_similarity(p.matrix), [0.8], min_size=5)
    assert [n.size for n in tree.roots] == [12, 10, 8]
    assert tree.labels[tree.roots[0].vertices[0]].startswith("B2")


def test_oversized_recursion_and_exhaustion(planted):
    _, s = planted
    tree = decompose(s, [0.3, 0.8], min_size=10, max_component_size=20)
    # at 0.3 the whole planted structure is one component
    assert len(tree.roots) == 1 and tree.roots[0].size == 43
    root = tree.roots[0]
    assert root.status == "decomposed" and root.child_threshold == 0.8
    assert [c.path for c in root.children] == ["1.1", "1.2", "1.3"]
    assert tree.depth() == 2
    tight = decompose(s, [0.3], min_size=10, max_component_size=20)
    assert tight.roots[0].status == "ladder-exhausted"


def test_conservation_and_nesting():
    rng = np.random.default_rng(7)
    a = sparse_counts(rng, 80, 0.15)
    s = pearson_similarity(dense_to_matrix(a))
    tree = decompose(s, [0.05, 0.15, 0.3], min_size=3, max_component_size=10)
    for node in tree.walk():
        if node.split is None:
            continue
        parts = set(node.split.dropped) | set(node.split.unclustered)
        for c in node.children:
            assert set(c.vertices) <= set(node.vertices)
            parts |= set(c.vertices)
        assert parts == set(node.vertices)


def test_classification_rows(planted):
    p, s = planted
    tree = decompose(s, [0.8])
    cls = classify(tree)
    # 43 journals; each bridge gets a row in both of its clusters
    assert len(cls) == 45
    top = cls.top_level()
    assert top["X1"] == min(int(r.path) for r in cls.rows if r.journal == "X1")
    text = cls.to_csv()
    assert text.splitlines()[0] == "path,journal,threshold,component_size"
    assert text.splitlines()[1].endswith(",0.8,15")


def test_ladder_validation(planted):
    _, s = planted
    for bad in ([], [0.9, 0.8], [0.8, 0.8], [1.5]):
        with pytest.raises(ValueError):
            decompose(s, bad)
    with pytest.raises(ValueError):
        decompose(s, [0.8], min_size=2)


def test_split_at_global_ids(planted):
    p, s = planted
    sp_ = split_at(s, p.blocks[0], 0.8, 10)
    assert sp_.components == [p.blocks[0]]
    assert sp_.dropped == () and sp_.unclustered == ()


def test_tree_dict(planted):
    _, s = planted
    d = decompose(s, [0.8]).to_dict()
    assert d["ladder"] == [0.8] and d["n"] == 43
    assert [c["size"] for c in d["clusters"]] == [15, 15, 15]
    assert d["top"]["articulation_points"] == ["X1", "X2"]
    assert d["top"]["unclustered_tag"] == "unclustered-at-0.8"
