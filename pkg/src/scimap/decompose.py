"""Hierarchical classification by a ladder of similarity thresholds.

The first rung splits the whole similarity graph into bi-connected
components.  Any component larger than ``max_component_size`` is cut again
at the next rung, using the same similarity values restricted to its own
journals, until the ladder runs out.

Components overlap at articulation points, so sibling nodes may share
vertices; each node's vertex set is exactly the union of its children,
its ``dropped`` journals (no edge left at the next rung) and its
``unclustered`` journals (edges left, but in no retained component).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import (
    ComponentStats,
    bicomponents,
    filter_components,
    size_distribution,
)
from .similarity import SimilarityMatrix, threshold_graph

__all__ = [
    "DEFAULT_LADDER",
    "ClusterNode",
    "LevelSplit",
    "ClusterTree",
    "ClassRow",
    "Classification",
    "split_at",
    "decompose",
    "articulation_report",
    "classify",
]

DEFAULT_LADDER = (0.8, 0.9, 0.95)


@dataclass
class LevelSplit:
    """Outcome of cutting one vertex set at one threshold."""

    threshold: float
    vertices: tuple
    components: list  # global vertex tuples, ordered for numbering
    articulation_points: tuple
    dropped: tuple
    unclustered: tuple
    connected_count: int
    stats: ComponentStats
    stats_min3: ComponentStats


@dataclass
class ClusterNode:
    threshold: float
    vertices: tuple
    children: list = field(default_factory=list)
    status: str = "leaf"
    split: LevelSplit | None = None
    path: str = ""

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def child_threshold(self):
        return self.split.threshold if self.split else None

    @property
    def dropped_vertices(self) -> tuple:
        return self.split.dropped if self.split else ()

    @property
    def unclustered_vertices(self) -> tuple:
        return self.split.unclustered if self.split else ()

    @property
    def stats(self):
        return self.split.stats if self.split else None

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class ClusterTree:
    labels: tuple
    ladder: tuple
    min_size: int
    max_component_size: int
    top: LevelSplit
    roots: list

    def walk(self):
        for r in self.roots:
            yield from r.walk()

    def depth(self) -> int:
        def d(node):
            return 1 + max((d(c) for c in node.children), default=0)

        return max((d(r) for r in self.roots), default=0)

    def find(self, path: str) -> ClusterNode:
        for node in self.walk():
            if node.path == path:
                return node
        raise KeyError(path)

    def to_dict(self) -> dict:
        lab = self.labels

        def names(vs):
            return [lab[v] for v in vs]

        def split_dict(s: LevelSplit):
            return {
                "threshold": s.threshold,
                "connected": s.connected_count,
                "components": s.stats.to_dict(),
                "components_min3": s.stats_min3.to_dict(),
                "articulation_points": sorted(names(s.articulation_points)),
                "dropped": sorted(names(s.dropped)),
                "unclustered": sorted(names(s.unclustered)),
                "unclustered_tag": f"unclustered-at-{_fmt(s.threshold)}",
            }

        def node_dict(node: ClusterNode):
            d = {
                "path": node.path,
                "threshold": node.threshold,
                "size": node.size,
                "status": node.status,
                "journals": sorted(names(node.vertices)),
            }
            if node.split is not None:
                d["split"] = split_dict(node.split)
            d["children"] = [node_dict(c) for c in node.children]
            return d

        return {
            "ladder": list(self.ladder),
            "min_size": self.min_size,
            "max_component_size": self.max_component_size,
            "n": len(lab),
            "top": split_dict(self.top),
            "clusters": [node_dict(r) for r in self.roots],
        }


def _fmt(r: float) -> str:
    return format(r, "g")


def split_at(s: SimilarityMatrix, vertices, threshold: float, min_size: int, labels=None) -> LevelSplit:
    """Cut ``vertices`` of ``s`` at ``threshold`` into bi-connected components.

    Returns global vertex ids.  Components smaller than ``min_size`` are not
    retained; retained ones are ordered by descending size, ties broken by
    the smallest member label.
    """
    vertices = tuple(sorted(int(v) for v in vertices))
    labels = s.labels if labels is None else labels
    sub = s if len(vertices) == s.n else s.restrict(vertices)
    g = threshold_graph(sub, threshold)
    deg = g.degrees()
    full = bicomponents(g)
    d3 = filter_components(full, 3)
    dk = filter_components(full, min_size) if min_size > 3 else d3

    def glob(vs):
        return tuple(vertices[v] for v in vs)

    comps = [glob(c) for c in dk.components]
    comps.sort(key=lambda c: (-len(c), min(labels[v] for v in c)))
    covered = set(v for c in comps for v in c)
    dropped = tuple(vertices[v] for v in range(len(vertices)) if deg[v] == 0)
    unclustered = tuple(
        vertices[v] for v in range(len(vertices)) if deg[v] > 0 and vertices[v] not in covered
    )
    return LevelSplit(
        threshold=float(threshold),
        vertices=vertices,
        components=comps,
        articulation_points=tuple(sorted(glob(dk.articulation_points))),
        dropped=dropped,
        unclustered=unclustered,
        connected_count=int((deg > 0).sum()),
        stats=size_distribution(dk),
        stats_min3=size_distribution(d3),
    )


def decompose(
    s: SimilarityMatrix,
    ladder=DEFAULT_LADDER,
    min_size: int = 10,
    max_component_size: int = 200,
) -> ClusterTree:
    """Build the cluster hierarchy.

    Parameters
    ----------
    s : SimilarityMatrix
    ladder : sequence of float
        Strictly ascending thresholds in (-1, 1].
    min_size : int
        Smallest component kept as a cluster (at least 3).
    max_component_size : int
        Components above this size are cut again at the next rung; once
        the ladder is exhausted they are marked ``ladder-exhausted``.
    """
    ladder = tuple(float(r) for r in ladder)
    if not ladder:
        raise ValueError("ladder must not be empty")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be strictly ascending")
    if any(not (-1.0 < r <= 1.0) for r in ladder):
        raise ValueError("ladder thresholds must lie in (-1, 1]")
    if min_size < 3:
        raise ValueError("min_size must be at least 3")
    if max_component_size < 1:
        raise ValueError("max_component_size must be positive")

    top = split_at(s, range(s.n), ladder[0], min_size)

    def grow(vertices, rung):
        node = ClusterNode(threshold=ladder[rung], vertices=vertices)
        if len(vertices) <= max_component_size:
            return node
        if rung + 1 >= len(ladder):
            node.status = "ladder-exhausted"
            return node
        node.split = split_at(s, vertices, ladder[rung + 1], min_size)
        node.status = "decomposed"
        node.children = [grow(c, rung + 1) for c in node.split.components]
        return node

    roots = [grow(c, 0) for c in top.components]
    tree = ClusterTree(s.labels, ladder, min_size, max_component_size, top, roots)
    _number(tree)
    return tree


def _number(tree: ClusterTree):
    def visit(node, path):
        node.path = path
        for k, c in enumerate(node.children, start=1):
            visit(c, f"{path}.{k}")

    for k, r in enumerate(tree.roots, start=1):
        visit(r, str(k))


def _levels(tree: ClusterTree) -> dict:
    levels = {tree.top.threshold: [tree.top]}
    for node in tree.walk():
        if node.split is not None:
            levels.setdefault(node.split.threshold, []).append(node.split)
    return levels


def articulation_report(tree: ClusterTree, level: float) -> list:
    """Articulation journals among the components retained at ``level``, label-sorted."""
    for r, splits in _levels(tree).items():
        if math.isclose(r, level, rel_tol=0.0, abs_tol=1e-12):
            aps = {v for sp_ in splits for v in sp_.articulation_points}
            return sorted(tree.labels[v] for v in aps)
    raise KeyError(f"no decomposition at level {level}")


class ClassRow(NamedTuple):
    path: str
    journal: str
    threshold: float
    component_size: int


@dataclass
class Classification:
    rows: list

    COLUMNS = ("path", "journal", "threshold", "component_size")

    def __len__(self):
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([r.path, r.journal, _fmt(r.threshold), r.component_size])
        return buf.getvalue()

    def top_level(self) -> dict:
        """Journal -> smallest top-level cluster number it belongs to."""
        out: dict[str, int] = {}
        for r in self.rows:
            k = int(r.path.split(".")[0])
            if r.journal not in out or k < out[r.journal]:
                out[r.journal] = k
        return out

    def partition(self, labels) -> list[int]:
        """Top-level cluster id per label; 0 marks unclassified journals."""
        top = self.top_level()
        return [top.get(lab, 0) for lab in labels]


def classify(tree: ClusterTree) -> Classification:
    """One row per (journal, deepest node containing it).

    Nodes are visited depth-first in numbering order; inside a node rows
    are sorted by journal label.  Articulation journals belong to several
    components and get one row for each.
    """
    rows = []
    lab = tree.labels
    for node in tree.walk():
        inner = {v for c in node.children for v in c.vertices}
        own = sorted((lab[v] for v in node.vertices if v not in inner))
        rows.extend(ClassRow(node.path, name, node.threshold, node.size) for name in own)
    return Classification(rows)

