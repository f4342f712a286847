"""Connected components, bi-connected components and articulation points.

Everything here operates on undirected :class:`SimilarityGraph` objects and
returns vertex indices.  Bi-connected components are computed at the edge
level (every edge belongs to exactly one block); blocks with exactly two
vertices are reported separately as ``bigraph_pairs`` so that callers can
apply the three-journal minimum used for clustering.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from .similarity import SimilarityGraph

__all__ = [
    "BicomponentDecomposition",
    "ComponentStats",
    "connected_components",
    "bicomponents",
    "articulation_oracle",
    "filter_components",
    "size_distribution",
    "extract_subgraph",
]


@dataclass(frozen=True)
class BicomponentDecomposition:
    """Blocks of a graph.

    ``components`` holds blocks with at least ``min_size`` (>= 3) vertices as
    sorted tuples, ordered by their smallest vertex.  ``articulation_points``
    are the vertices that sit in two or more of the blocks this
    decomposition reports (``components`` plus ``bigraph_pairs``).
    """

    n: int
    components: tuple
    articulation_points: frozenset
    bigraph_pairs: tuple = ()
    isolates: frozenset = frozenset()
    min_size: int = 2

    def covered(self) -> frozenset:
        return frozenset(v for c in self.components for v in c)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "min_size": self.min_size,
            "components": [list(c) for c in self.components],
            "bigraph_pairs": [list(p) for p in self.bigraph_pairs],
            "articulation_points": sorted(self.articulation_points),
            "isolates": sorted(self.isolates),
        }

    @classmethod
    def from_dict(cls, d) -> "BicomponentDecomposition":
        return cls(
            n=d["n"],
            components=tuple(tuple(c) for c in d["components"]),
            articulation_points=frozenset(d["articulation_points"]),
            bigraph_pairs=tuple(tuple(p) for p in d["bigraph_pairs"]),
            isolates=frozenset(d["isolates"]),
            min_size=d["min_size"],
        )


@dataclass(frozen=True)
class ComponentStats:
    size_histogram: dict = field(default_factory=dict)
    n_components: int = 0
    n_articulation_points: int = 0
    n_journals_covered: int = 0
    largest: int = 0

    def to_dict(self) -> dict:
        return {
            "n_components": self.n_components,
            "n_journals_covered": self.n_journals_covered,
            "n_articulation_points": self.n_articulation_points,
            "largest": self.largest,
            "size_histogram": {str(k): v for k, v in self.size_histogram.items()},
        }


def connected_components(g: SimilarityGraph) -> list[list[int]]:
    """Connectivity partition, each part sorted, parts ordered by smallest vertex."""
    n = g.n
    if n == 0:
        return []
    e = g.edges
    adj = sp.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, lab = _cc(adj, directed=False)
    parts: dict[int, list[int]] = {}
    for v, c in enumerate(lab.tolist()):
        parts.setdefault(c, []).append(v)
    return sorted(parts.values(), key=lambda p: p[0])


def bicomponents(g: SimilarityGraph) -> BicomponentDecomposition:
    """Blocks and articulation points by one depth-first search.

    Hopcroft-Tarjan discovery/low-link bookkeeping with an explicit stack of
    tree and back edges, so the cost is linear in ``n + m`` and deep graphs do
    not hit the interpreter recursion limit.
    """
    n = g.n
    adj = g.adjacency()
    disc = [-1] * n
    low = [0] * n
    blocks: list[set] = []
    isolates = set()
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        if not adj[root]:
            isolates.add(root)
            continue
        stack = [(root, -1, iter(adj[root]))]
        edge_stack: list[tuple[int, int]] = []
        while stack:
            u, parent, it = stack[-1]
            descended = False
            for v in it:
                if v == parent:
                    continue
                if disc[v] == -1:
                    edge_stack.append((u, v))
                    disc[v] = low[v] = t
                    t += 1
                    stack.append((v, u, iter(adj[v])))
                    descended = True
                    break
                if disc[v] < disc[u]:
                    edge_stack.append((u, v))
                    if disc[v] < low[u]:
                        low[u] = disc[v]
            if descended:
                continue
            stack.pop()
            if parent == -1:
                continue
            if low[u] < low[parent]:
                low[parent] = low[u]
            if low[u] >= disc[parent]:
                block = set()
                while True:
                    a, b = edge_stack.pop()
                    block.add(a)
                    block.add(b)
                    if a == parent and b == u:
                        break
                blocks.append(block)
    return _assemble(n, blocks, isolates, min_size=2)


def _assemble(n, blocks, isolates, min_size) -> BicomponentDecomposition:
    big = sorted((tuple(sorted(b)) for b in blocks if len(b) >= 3), key=lambda c: c)
    pairs = sorted(tuple(sorted(b)) for b in blocks if len(b) == 2) if min_size <= 2 else []
    membership = Counter(v for b in big for v in b)
    membership.update(v for p in pairs for v in p)
    aps = frozenset(v for v, k in membership.items() if k >= 2)
    return BicomponentDecomposition(
        n=n,
        components=tuple(big),
        articulation_points=aps,
        bigraph_pairs=tuple(pairs),
        isolates=frozenset(isolates),
        min_size=min_size,
    )


def articulation_oracle(g: SimilarityGraph) -> set[int]:
    """Cut vertices by brute force: delete each vertex and recount.

    ``v`` is reported when the rest of its connected component falls apart
    into two or more pieces.  Quadratic; meant as a test oracle.
    """
    adj = g.adjacency()
    n = g.n
    result = set()
    for v in range(n):
        if len(adj[v]) < 2:
            continue
        seen = {v, adj[v][0]}
        queue = deque([adj[v][0]])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if any(w not in seen for w in adj[v]):
            result.add(v)
    return result


def filter_components(d: BicomponentDecomposition, min_size: int) -> BicomponentDecomposition:
    """Keep blocks with at least ``min_size`` vertices.

    Articulation points are recomputed as the vertices shared by two or more
    retained blocks, which is why their count shrinks as ``min_size`` grows.
    Two-vertex blocks never survive.
    """
    if min_size < 3:
        raise ValueError("min_size must be at least 3")
    kept = [set(c) for c in d.components if len(c) >= min_size]
    return _assemble(d.n, kept, d.isolates, min_size=min_size)


def size_distribution(d: BicomponentDecomposition) -> ComponentStats:
    sizes = [len(c) for c in d.components]
    hist = dict(sorted(Counter(sizes).items()))
    return ComponentStats(
        size_histogram=hist,
        n_components=len(sizes),
        n_articulation_points=len(d.articulation_points),
        n_journals_covered=len(d.covered()),
        largest=max(sizes, default=0),
    )


def extract_subgraph(g: SimilarityGraph, vertices) -> SimilarityGraph:
    """Induced subgraph on ``vertices``, re-indexed in ascending order.

    Labels and weights carry over; vertex ``k`` of the result is the
    ``k``-th smallest of ``vertices``.
    """
    vs = sorted(set(int(v) for v in vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} not in graph")
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[vs] = np.arange(len(vs))
    e = g.edges
    if len(e):
        keep = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
        sub_e = remap[e[keep]]
        sub_w = g.weights[keep]
    else:
        sub_e = np.zeros((0, 2), dtype=np.int64)
        sub_w = np.zeros(0)
    return SimilarityGraph(tuple(g.labels[v] for v in vs), sub_e, sub_w, g.threshold)
