import numpy as np
import pytest

from scimap import SyntheticSpec, bicomponents, filter_components, generate_synthetic, pearson_similarity, threshold_graph
from scimap.synth import planted_layout


def test_layout_shares_bridges():
    labels, members, bridges = planted_layout(SyntheticSpec(blocks=(5, 6, 7), bridge_journals=2))
    assert len(labels) == 5 + 6 + 7 - 2
    assert [len(m) for m in members] == [5, 6, 7]
    assert bridges == [14, 15]
    assert set(members[0]) & set(members[1]) == {14}
    assert set(members[1]) & set(members[2]) == {15}


def test_same_seed_same_matrix():
    assert generate_synthetic(seed=4).matrix == generate_synthetic(seed=4).matrix
    assert generate_synthetic(seed=4).matrix != generate_synthetic(seed=5).matrix


@pytest.mark.parametrize("blocks", [(15, 15, 15), (10, 20), (8, 12, 15), (15, 15, 15, 15)])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_blocks_recoverable(blocks, seed):
    p = generate_synthetic(blocks=blocks, bridge_journals=len(blocks) - 1, seed=seed)
    d = filter_components(bicomponents(threshold_graph(pearson_similarity(p.matrix), 0.8)), 3)
    assert sorted(d.components) == sorted(p.blocks)
    assert d.articulation_points == set(p.bridges)


def test_no_bridges_hub_is_one():
    p = generate_synthetic(blocks=(5, 5), bridge_journals=0)
    assert p.hub_weight == 1.0 and p.bridges == ()


@pytest.mark.parametrize("bad", [dict(blocks=()), dict(blocks=(2, 5)), dict(bridge_journals=3),
                                 dict(intra_rate=0), dict(inter_rate=-1),
                                 dict(popularity_spread=1.0)])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        SyntheticSpec(**bad)


def test_single_block():
    p = generate_synthetic(blocks=(5,), bridge_journals=0)
    d = filter_components(bicomponents(threshold_graph(pearson_similarity(p.matrix), 0.8)), 3)
    assert d.components == (tuple(range(5)),)
    assert d.articulation_points == frozenset()
