"""Two-dimensional map coordinates for similarity graphs.

Coordinates live in the unit frame ``[0, 1]^2``.  Kamada-Kawai minimises the
spring stress between Euclidean and hop distances one vertex at a time with
Newton steps; Fruchterman-Reingold runs a cooled particle simulation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import connected_components, extract_subgraph
from .similarity import SimilarityGraph

__all__ = [
    "LayoutParams",
    "Layout",
    "hop_distances",
    "stress",
    "layout_kamada_kawai",
    "layout_fruchterman_reingold",
    "layout_graph",
    "KK_LIMIT",
    "EXACT_REPULSION_LIMIT",
]

KK_LIMIT = 100
EXACT_REPULSION_LIMIT = 2000


@dataclass(frozen=True)
class LayoutParams:
    """Tuning knobs; ``None`` picks a size-dependent default."""

    max_iterations: int | None = None
    ideal_edge_length: float | None = None
    initial_temperature: float = 0.1
    cooling_factor: float = 0.95
    convergence_epsilon: float = 1e-9
    seed: int = 1

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.ideal_edge_length is not None and self.ideal_edge_length <= 0:
            raise ValueError("ideal_edge_length must be positive")
        if self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.convergence_epsilon <= 0:
            raise ValueError("convergence_epsilon must be positive")


@dataclass(frozen=True, eq=False)
class Layout:
    labels: tuple
    coords: np.ndarray = field(repr=False)
    algorithm: str = "kk"
    final_stress: float | None = None
    initial_stress: float | None = None
    iterations_used: int = 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_dict(self, **metadata) -> dict:
        meta = {
            "algorithm": self.algorithm,
            "iterations_used": self.iterations_used,
            "final_stress": self.final_stress,
            "initial_stress": self.initial_stress,
        }
        meta.update(metadata)
        return {
            "layout": [
                {"label": lab, "x": float(x), "y": float(y)}
                for lab, (x, y) in zip(self.labels, self.coords.tolist())
            ],
            "metadata": meta,
        }

    @classmethod
    def from_dict(cls, d) -> "Layout":
        pts = d["layout"]
        meta = d.get("metadata", {})
        coords = np.array([[p["x"], p["y"]] for p in pts], dtype=np.float64).reshape(-1, 2)
        return cls(
            tuple(p["label"] for p in pts),
            coords,
            meta.get("algorithm", "kk"),
            meta.get("final_stress"),
            meta.get("initial_stress"),
            meta.get("iterations_used", 0),
        )


def hop_distances(g: SimilarityGraph) -> np.ndarray:
    """All-pairs hop counts by BFS; ``inf`` between components."""
    n = g.n
    adj = g.adjacency()
    dist = np.full((n, n), np.inf)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for v in adj[u]:
                if row[v] == np.inf:
                    row[v] = du
                    queue.append(v)
    return dist


def _default_length(dist) -> float:
    finite = dist[np.isfinite(dist)]
    diameter = float(finite.max()) if finite.size else 0.0
    return 0.9 / max(diameter, 1.0)


def _require_connected(g, dist):
    if g.n and not np.isfinite(dist).all():
        raise ValueError("Kamada-Kawai needs a connected graph")


def _stress(coords, dist, length) -> float:
    n = len(coords)
    if n < 2:
        return 0.0
    iu, ju = np.triu_indices(n, 1)
    d = dist[iu, ju]
    eu = np.hypot(*(coords[iu] - coords[ju]).T)
    return float(np.sum((eu - length * d) ** 2 / d**2))


def stress(g: SimilarityGraph, layout: Layout, ideal_edge_length: float | None = None) -> float:
    """Kamada-Kawai stress of ``layout``.

    ``sum_{i<j} (|p_i - p_j| - L d_ij)^2 / d_ij^2`` with ``d_ij`` the hop
    distance and ``L`` the ideal edge length (defaults to the one
    :func:`layout_kamada_kawai` would choose).
    """
    dist = hop_distances(g)
    _require_connected(g, dist)
    length = ideal_edge_length or _default_length(dist)
    return _stress(np.asarray(layout.coords, dtype=np.float64), dist, length)


def _initial(n, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(0.05, 0.95, size=(n, 2))


def _kk_gradient(coords, k, length_mat):
    diff = coords[:, None, :] - coords[None, :, :]
    eu = np.sqrt((diff**2).sum(-1))
    np.fill_diagonal(eu, 1.0)
    coef = k * (1.0 - length_mat / eu)
    np.fill_diagonal(coef, 0.0)
    return (coef[:, :, None] * diff).sum(axis=1)


def _pair_terms(coords, m, km, lm):
    # gradient contribution of the pair (i, m) to vertex i, for every i
    diff = coords - coords[m]
    eu = np.hypot(diff[:, 0], diff[:, 1])
    eu[m] = 1.0
    eu = np.maximum(eu, 1e-12)
    coef = km * (1.0 - lm / eu)
    coef[m] = 0.0
    return coef[:, None] * diff


def layout_kamada_kawai(g: SimilarityGraph, params: LayoutParams = LayoutParams()) -> Layout:
    """Kamada-Kawai spring layout of a connected graph.

    Ideal distances are hop counts times ``ideal_edge_length`` (default
    ``0.9 / diameter`` so the drawing fits the frame).  Each step moves the
    vertex with the largest energy gradient by one Newton step; the loop
    stops when every gradient norm is below ``convergence_epsilon`` or after
    ``max_iterations`` steps (default ``200 n + 100``).  The result is
    re-centred in the frame and never has more stress than the seeded
    starting placement.

    Raises
    ------
    ValueError
        If ``g`` is disconnected.
    """
    n = g.n
    dist = hop_distances(g)
    _require_connected(g, dist)
    if n == 0:
        return Layout((), np.zeros((0, 2)), "kk", 0.0, 0.0, 0)
    if n == 1:
        return Layout(g.labels, np.array([[0.5, 0.5]]), "kk", 0.0, 0.0, 0)
    length = params.ideal_edge_length or _default_length(dist)
    max_iter = params.max_iterations or 200 * n + 100
    eps = params.convergence_epsilon

    start = _initial(n, params.seed)
    coords = start.copy()
    safe = dist.copy()
    np.fill_diagonal(safe, 1.0)
    k = 1.0 / safe**2
    np.fill_diagonal(k, 0.0)
    lmat = length * dist
    np.fill_diagonal(lmat, 0.0)

    grad = _kk_gradient(coords, k, lmat)
    norms = np.hypot(grad[:, 0], grad[:, 1])
    it = 0
    while it < max_iter:
        m = int(np.argmax(norms))
        if norms[m] < eps:
            break
        diff = coords[m] - coords
        dx, dy = diff[:, 0], diff[:, 1]
        eu = np.hypot(dx, dy)
        eu[m] = 1.0
        eu = np.maximum(eu, 1e-12)
        km, lm = k[m], lmat[m]
        inv3 = lm / eu**3
        hxx = np.sum(km * (1.0 - lm / eu + dx * dx * inv3))
        hyy = np.sum(km * (1.0 - lm / eu + dy * dy * inv3))
        hxy = np.sum(km * dx * dy * inv3)
        gx, gy = grad[m]
        det = hxx * hyy - hxy * hxy
        if det > 1e-18 and hxx > 0:
            step = np.array([(hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det])
        else:
            # indefinite Hessian: fall back to a damped gradient step
            step = grad[m] / max(np.sum(km), 1e-12)
        before = _pair_terms(coords, m, k[m], lmat[m])
        coords[m] -= step
        after = _pair_terms(coords, m, k[m], lmat[m])
        # only the pairs involving m change
        grad += after - before
        grad[m] = -after.sum(axis=0)
        norms = np.hypot(grad[:, 0], grad[:, 1])
        it += 1

    coords = _fit_frame(coords)
    initial = _stress(start, dist, length)
    final = _stress(coords, dist, length)
    if final > initial:
        coords, final = start, initial
    return Layout(g.labels, coords, "kk", final, initial, it)


def _fit_frame(coords: np.ndarray) -> np.ndarray:
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    span = float((hi - lo).max())
    out = coords - (lo + hi) / 2
    if span > 1.0:
        out = out / span
    return out + 0.5


def _repulsion_exact(pos, k2):
    dx = pos[:, 0, None] - pos[None, :, 0]
    dy = pos[:, 1, None] - pos[None, :, 1]
    d2 = dx * dx + dy * dy
    np.fill_diagonal(d2, np.inf)
    np.maximum(d2, 1e-18, out=d2)
    f = k2 / d2
    return np.column_stack([(dx * f).sum(axis=1), (dy * f).sum(axis=1)])


def _repulsion_grid(pos, k2, k):
    # Only pairs within 2k interact; vertices are bucketed on a 2k grid.
    cell = 2.0 * k
    keys = np.floor(pos / cell).astype(np.int64)
    buckets: dict[tuple, list[int]] = {}
    for i, key in enumerate(map(tuple, keys.tolist())):
        buckets.setdefault(key, []).append(i)
    disp = np.zeros_like(pos)
    for (cx, cy), members in sorted(buckets.items()):
        idx = np.array(members)
        near = []
        for ox in (-1, 0, 1):
            for oy in (-1, 0, 1):
                near.extend(buckets.get((cx + ox, cy + oy), ()))
        near = np.array(sorted(near))
        diff = pos[idx][:, None, :] - pos[near][None, :, :]
        d2 = (diff**2).sum(-1)
        d2[idx[:, None] == near[None, :]] = np.inf
        d2[d2 > cell * cell] = np.inf
        d2 = np.maximum(d2, 1e-18)
        disp[idx] = (diff * (k2 / d2)[:, :, None]).sum(axis=1)
    return disp


def layout_fruchterman_reingold(g: SimilarityGraph, params: LayoutParams = LayoutParams(), callback=None) -> Layout:
    """Fruchterman-Reingold force simulation in the unit frame.

    Edges attract with ``d^2 / k`` and all pairs repel with ``k^2 / d``,
    where ``k = sqrt(1 / n)`` unless ``ideal_edge_length`` is given.  Each
    vertex moves at most the current temperature per iteration, positions
    are clamped to the frame and the temperature cools geometrically.
    Repulsion is exact up to 2000 vertices and grid-bucketed above.

    ``callback(iteration, old_positions, new_positions, temperature)`` is
    called after every iteration if given.
    """
    n = g.n
    rng_pos = _initial(n, params.seed)
    if n <= 1:
        return Layout(g.labels, rng_pos, "fr", None, None, 0)
    k = params.ideal_edge_length or math.sqrt(1.0 / n)
    k2 = k * k
    iters = params.max_iterations or 300
    temp = params.initial_temperature
    pos = rng_pos
    e = g.edges
    for it in range(iters):
        if n <= EXACT_REPULSION_LIMIT:
            disp = _repulsion_exact(pos, k2)
        else:
            disp = _repulsion_grid(pos, k2, k)
        if len(e):
            delta = pos[e[:, 0]] - pos[e[:, 1]]
            dist = np.hypot(delta[:, 0], delta[:, 1])
            pull = delta * (dist / k)[:, None]
            for ax in (0, 1):
                disp[:, ax] -= np.bincount(e[:, 0], pull[:, ax], minlength=n)
                disp[:, ax] += np.bincount(e[:, 1], pull[:, ax], minlength=n)
        length = np.hypot(disp[:, 0], disp[:, 1])
        scale = np.where(length > 0, np.minimum(length, temp) / np.where(length > 0, length, 1.0), 0.0)
        new = np.clip(pos + disp * scale[:, None], 0.0, 1.0)
        if callback is not None:
            callback(it, pos, new, temp)
        pos = new
        temp *= params.cooling_factor
    return Layout(g.labels, pos, "fr", None, None, iters)


def _pack(g, params, algo) -> Layout:
    parts = connected_components(g)
    parts.sort(key=lambda p: (-len(p), p[0]))
    side = math.ceil(math.sqrt(len(parts)))
    coords = np.zeros((g.n, 2))
    iters = 0
    for slot, part in enumerate(parts):
        sub = extract_subgraph(g, part)
        if algo == "kk":
            lay = layout_kamada_kawai(sub, params)
        else:
            lay = layout_fruchterman_reingold(sub, params)
        iters += lay.iterations_used
        row, col = divmod(slot, side)
        cell = 1.0 / side
        local = 0.1 + 0.8 * lay.coords if len(part) > 1 else lay.coords
        coords[part] = np.column_stack(
            [(col + local[:, 0]) * cell, 1.0 - (row + 1 - local[:, 1]) * cell]
        )
    return Layout(g.labels, coords, algo + "-packed", None, None, iters)


def layout_graph(g: SimilarityGraph, algo: str = "auto", params: LayoutParams = LayoutParams()) -> Layout:
    """Dispatch on ``algo`` in {"kk", "fr", "auto"}.

    ``auto`` picks Kamada-Kawai below 100 vertices and Fruchterman-Reingold
    otherwise.  Kamada-Kawai on a disconnected graph lays out each connected
    component separately and packs them on a grid.
    """
    if algo == "auto":
        algo = "kk" if g.n < KK_LIMIT else "fr"
    if algo == "kk":
        if g.n and len(connected_components(g)) > 1:
            return _pack(g, params, "kk")
        return layout_kamada_kawai(g, params)
    if algo == "fr":
        return layout_fruchterman_reingold(g, params)
    raise ValueError(f"unknown layout algorithm {algo!r}")

