import math
import random

import numpy as np
import pytest

from scimap import (
    Layout,
    LayoutParams,
    SimilarityGraph,
    layout_fruchterman_reingold,
    layout_graph,
    layout_kamada_kawai,
    stress,
)
from scimap.layout import hop_distances

from oracles import random_edges


def connected_graph(rng, n, p=0.2):
    # random spanning tree plus extra edges
    edges = {tuple(sorted((v, rng.randrange(v)))) for v in range(1, n)}
    edges |= set(random_edges(rng, n, p))
    return SimilarityGraph.unweighted(n, sorted(edges))


def test_hop_distances_path():
    g = SimilarityGraph.unweighted(4, [(0, 1), (1, 2), (2, 3)])
    d = hop_distances(g)
    assert d[0, 3] == 3 and d[1, 3] == 2 and d[2, 2] == 0


def test_kk_two_vertices_hits_ideal_length():
    g = SimilarityGraph.unweighted(2, [(0, 1)])
    lay = layout_kamada_kawai(g, LayoutParams(ideal_edge_length=0.3))
    assert abs(np.linalg.norm(lay.coords[0] - lay.coords[1]) - 0.3) < 1e-6
    assert lay.final_stress < 1e-12


@pytest.mark.parametrize("seed", range(8))
def test_kk_never_increases_stress(seed):
    rng = random.Random(seed)
    g = connected_graph(rng, rng.randint(3, 25))
    lay = layout_kamada_kawai(g, LayoutParams(seed=seed))
    assert lay.final_stress <= lay.initial_stress
    assert lay.final_stress == pytest.approx(stress(g, lay))
    assert np.all((lay.coords >= 0) & (lay.coords <= 1))


def test_kk_rejects_disconnected():
    with pytest.raises(ValueError):
        layout_kamada_kawai(SimilarityGraph.unweighted(3, [(0, 1)]))


def test_kk_single_vertex():
    lay = layout_kamada_kawai(SimilarityGraph.unweighted(1, []))
    assert lay.coords.tolist() == [[0.5, 0.5]]


def test_fr_step_bounded_by_temperature():
    g = connected_graph(random.Random(1), 30, 0.1)
    steps = []

    def watch(it, old, new, temp):
        steps.append(float(np.hypot(*(new - old).T).max()) - temp)

    lay = layout_fruchterman_reingold(g, LayoutParams(max_iterations=80), callback=watch)
    assert len(steps) == 80
    assert max(steps) <= 1e-15
    assert np.isfinite(lay.coords).all()


def test_fr_seed_reproducible():
    g = connected_graph(random.Random(2), 20)
    a = layout_fruchterman_reingold(g, LayoutParams(seed=9))
    b = layout_fruchterman_reingold(g, LayoutParams(seed=9))
    c = layout_fruchterman_reingold(g, LayoutParams(seed=10))
    assert a.coords.tobytes() == b.coords.tobytes()
    assert a.coords.tobytes() != c.coords.tobytes()


def test_fr_grid_repulsion_large_graph(monkeypatch):
    import scimap.layout as L

    monkeypatch.setattr(L, "EXACT_REPULSION_LIMIT", 10)
    g = connected_graph(random.Random(3), 60, 0.02)
    lay = layout_fruchterman_reingold(g, LayoutParams(max_iterations=30))
    assert np.isfinite(lay.coords).all()


def test_auto_dispatch_and_packing():
    g = SimilarityGraph.unweighted(6, [(0, 1), (1, 2), (0, 2), (3, 4)])
    lay = layout_graph(g, "auto")
    assert lay.algorithm == "kk-packed"
    assert np.isfinite(lay.coords).all() and lay.n == 6
    with pytest.raises(ValueError):
        layout_graph(g, "spring")


def test_layout_dict_roundtrip():
    g = connected_graph(random.Random(4), 10)
    lay = layout_kamada_kawai(g)
    d = lay.to_dict(seed=1)
    back = Layout.from_dict(d)
    assert back.labels == lay.labels
    assert np.array_equal(back.coords, lay.coords)
    assert d["metadata"]["seed"] == 1


def test_params_validation():
    for bad in (dict(cooling_factor=1.0), dict(initial_temperature=0), dict(max_iterations=0)):
        with pytest.raises(ValueError):
            LayoutParams(**bad)
