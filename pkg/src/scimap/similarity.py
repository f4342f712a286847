"""Pairwise similarity of citing patterns and the graphs they induce.

Both measures work on the full-length citing rows of a
:class:`~scimap.ingest.CitationMatrix`.  All moments (sums, sums of squares
and cross products) are taken in exact integer arithmetic on the sparse
count matrix, so the only rounding happens in the final division.  A pair
whose Pearson r has a zero-variance operand is flagged undefined instead of
being forced to 1 or 0.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .ingest import CitationMatrix

__all__ = [
    "MEASURES",
    "DIAGONAL_POLICIES",
    "SimilarityMatrix",
    "SimilarityGraph",
    "DegreeSummary",
    "pearson_similarity",
    "cosine_similarity",
    "compute_similarity",
    "threshold_graph",
    "degree_summary",
    "worker_count",
]

MEASURES = ("pearson", "cosine")
DIAGONAL_POLICIES = ("include", "exclude_pair")

_BLOCK = 256
_INT_LIMIT = 2**62


def worker_count(workers=None) -> int:
    """Thread count: ``workers`` (default: CPU count), capped by ``SCIMAP_THREADS``."""
    if workers is None:
        workers = os.cpu_count() or 1
    env = os.environ.get("SCIMAP_THREADS", "").strip()
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"SCIMAP_THREADS must be an integer, got {env!r}") from None
        workers = min(workers, cap)
    return max(1, int(workers))


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric pairwise similarities with a definedness mask.

    ``values[i, j]`` is NaN wherever ``defined[i, j]`` is False.
    """

    labels: tuple
    measure: str
    values: np.ndarray = field(repr=False)
    defined: np.ndarray = field(repr=False)
    diagonal_policy: str = "include"

    @property
    def n(self) -> int:
        return len(self.labels)

    def restrict(self, vertices) -> "SimilarityMatrix":
        """Sub-matrix on ``vertices`` (ascending); values are reused, not recomputed."""
        idx = np.unique(np.asarray(list(vertices), dtype=np.int64))
        return SimilarityMatrix(
            tuple(self.labels[i] for i in idx),
            self.measure,
            self.values[np.ix_(idx, idx)],
            self.defined[np.ix_(idx, idx)],
            self.diagonal_policy,
        )

    def undefined_pairs(self) -> int:
        """Number of unordered off-diagonal pairs flagged undefined."""
        iu = np.triu_indices(self.n, 1)
        return int(np.count_nonzero(~self.defined[iu]))

    def __eq__(self, other):
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.measure == other.measure
            and self.diagonal_policy == other.diagonal_policy
            and np.array_equal(self.defined, other.defined)
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Undirected weighted graph on journals.

    ``edges`` is an ``(m, 2)`` int64 array with ``u < v`` in ascending
    lexicographic order; ``weights`` holds the similarity of each edge.
    """

    labels: tuple
    edges: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    threshold: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if len(e) != len(w):
            raise ValueError("edges and weights differ in length")
        if len(e):
            if (e < 0).any() or (e >= len(self.labels)).any():
                raise ValueError("edge endpoint out of range")
            if (e[:, 0] == e[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            order = np.lexsort((e[:, 1], e[:, 0]))
            e, w = e[order], w[order]
            if (np.diff(e, axis=0) == 0).all(axis=1).any():
                raise ValueError("parallel edges are not allowed")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "weights", w)

    @classmethod
    def unweighted(cls, n_or_labels, edges, threshold=None) -> "SimilarityGraph":
        labels = _labels(n_or_labels)
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(labels, edges, np.ones(len(edges)), threshold)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set:
        return {(int(u), int(v)) for u, v in self.edges}

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n).astype(np.int64)

    def adjacency(self) -> list[list[int]]:
        """Sorted neighbour lists."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges.tolist():
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def __eq__(self, other):
        if not isinstance(other, SimilarityGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def _labels(n_or_labels) -> tuple:
    if isinstance(n_or_labels, int):
        return tuple(str(i) for i in range(n_or_labels))
    return tuple(n_or_labels)


def _moments(m: CitationMatrix):
    x = m.counts.astype(np.int64)
    s = np.asarray(x.sum(axis=1)).ravel().astype(np.int64)
    d = x.diagonal().astype(np.int64)
    peak = int(x.data.max(initial=0))
    widest = int(np.diff(x.indptr).max(initial=0))
    if peak * peak * max(widest, 1) < _INT_LIMIT:
        q = np.asarray(x.multiply(x).sum(axis=1)).ravel().astype(np.int64)
    else:
        # sums of squares (and possibly sums) would overflow int64
        ip, data = x.indptr, x.data
        s = np.array([sum(int(v) for v in data[ip[i]:ip[i + 1]]) for i in range(m.n)], dtype=object)
        q = np.array([sum(int(v) ** 2 for v in data[ip[i]:ip[i + 1]]) for i in range(m.n)], dtype=object)
    return x, s, q, d


def _exact_int64_ok(n, s, q) -> bool:
    if n == 0:
        return True
    return int(q.max(initial=0)) * n < _INT_LIMIT and int(s.max(initial=0)) ** 2 < _INT_LIMIT


def _block(measure, policy, x, xt, s, q, d, n, rows, big):
    """Similarity rows ``rows`` against all columns.  Returns (values, defined)."""
    if big:
        # Python-int arithmetic; only reached when int64 could overflow.
        xb = x[rows].toarray().astype(object)
        g = xb @ x.toarray().astype(object).T
        xtb = xt[rows].toarray().astype(object)
        s, q, d = s.astype(object), q.astype(object), d.astype(object)
    else:
        xb = x[rows].toarray()
        g = (x[rows] @ xt).toarray()
        xtb = xt[rows].toarray()
    sb, qb, db = s[rows][:, None], q[rows][:, None], d[rows][:, None]
    if policy == "include":
        length = n
        sxy, sx, sy, sxx, syy = g, sb, s[None, :], qb, q[None, :]
    else:
        # pair (i, j): drop coordinates i and j from both rows
        length = n - 2
        sxy = g - db * xtb - xb * d[None, :]
        sx = sb - db - xb
        sy = s[None, :] - xtb - d[None, :]
        sxx = qb - db * db - xb * xb
        syy = q[None, :] - xtb * xtb - d[None, :] * d[None, :]

    if measure == "pearson":
        num = length * sxy - sx * sy
        vx = length * sxx - sx * sx
        vy = length * syy - sy * sy
        defined = (vx > 0) & (vy > 0)
        if length < 2:
            defined = np.zeros_like(defined, dtype=bool)
    else:
        num, vx, vy = sxy, sxx, syy
        defined = np.ones(np.broadcast(vx, vy).shape, dtype=bool)
    num = np.asarray(num, dtype=np.float64)
    den = np.sqrt(np.asarray(vx, dtype=np.float64) * np.asarray(vy, dtype=np.float64))
    den = np.broadcast_to(den, num.shape)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    vals = np.clip(vals, -1.0, 1.0) if measure == "pearson" else np.clip(vals, 0.0, 1.0)
    defined = np.asarray(defined, dtype=bool)
    vals = np.where(defined, vals, np.nan)
    return vals, defined


def _diagonal(measure, policy, x, s, q, d, n):
    if policy == "include":
        length, sx, sxx = n, s, q
    else:
        length, sx, sxx = n - 1, s - d, q - d * d
    if measure == "pearson":
        var = np.array([int(length) * int(a) - int(b) ** 2 for a, b in zip(sxx, sx)], dtype=object)
        defined = np.array([v > 0 for v in var], dtype=bool) & (length >= 2)
        return np.where(defined, 1.0, np.nan), defined
    nonzero = sxx > 0
    return np.where(nonzero, 1.0, 0.0), np.ones(n, dtype=bool)


def _compute(m: CitationMatrix, measure: str, policy: str, workers=None) -> SimilarityMatrix:
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if policy not in DIAGONAL_POLICIES:
        raise ValueError(f"unknown diagonal policy {policy!r}")
    n = m.n
    x, s, q, d = _moments(m)
    xt = sp.csr_matrix(x.T)
    big = not _exact_int64_ok(n, s, q)
    values = np.empty((n, n), dtype=np.float64)
    defined = np.empty((n, n), dtype=bool)
    blocks = [np.arange(a, min(a + _BLOCK, n)) for a in range(0, n, _BLOCK)]

    def run(rows):
        v, f = _block(measure, policy, x, xt, s, q, d, n, rows, big)
        values[rows] = v
        defined[rows] = f

    nw = min(worker_count(workers), max(1, len(blocks)))
    if nw == 1:
        for rows in blocks:
            run(rows)
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            list(pool.map(run, blocks))

    # one value per unordered pair, mirrored
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    values = np.where(upper, values, values.T)
    defined = np.where(upper, defined, defined.T)
    dv, df = _diagonal(measure, policy, x, s, q, d, n)
    values[np.diag_indices(n)] = dv
    defined[np.diag_indices(n)] = df
    values.setflags(write=False)
    defined.setflags(write=False)
    return SimilarityMatrix(m.labels, measure, values, defined, policy)


def pearson_similarity(m: CitationMatrix, diagonal_policy="include", workers=None) -> SimilarityMatrix:
    """Pearson r between every pair of citing rows.

    Parameters
    ----------
    m : CitationMatrix
        Needs at least two journals.
    diagonal_policy : {"include", "exclude_pair"}
        ``include`` correlates the full rows, self-citation cells included.
        ``exclude_pair`` drops coordinates ``i`` and ``j`` from both rows
        before correlating pair ``(i, j)``.
    workers : int, optional
        Thread count; defaults to ``SCIMAP_THREADS`` or the CPU count.
        The result does not depend on it.

    Pairs where either row has zero variance are left undefined (NaN with
    ``defined`` False).  Defined self-similarities are 1.
    """
    if m.n < 2:
        raise ValueError("Pearson similarity needs at least two journals")
    return _compute(m, "pearson", diagonal_policy, workers)


def cosine_similarity(m: CitationMatrix, diagonal_policy="include", workers=None) -> SimilarityMatrix:
    """Cosine between citing rows; any pair involving a zero row scores 0."""
    if m.n < 2:
        raise ValueError("cosine similarity needs at least two journals")
    return _compute(m, "cosine", diagonal_policy, workers)


def compute_similarity(m, measure="pearson", diagonal_policy="include", workers=None):
    if measure == "pearson":
        return pearson_similarity(m, diagonal_policy, workers)
    if measure == "cosine":
        return cosine_similarity(m, diagonal_policy, workers)
    raise ValueError(f"unknown measure {measure!r}")


def threshold_graph(s: SimilarityMatrix, r_min: float) -> SimilarityGraph:
    """Edges ``(i, j)``, ``i < j``, with a defined similarity ``>= r_min``."""
    r_min = float(r_min)
    if not np.isfinite(r_min):
        raise ValueError("r_min must be finite")
    with np.errstate(invalid="ignore"):
        keep = np.triu(s.defined & (s.values >= r_min), 1)
    iu, ju = np.nonzero(keep)
    edges = np.column_stack([iu, ju])
    return SimilarityGraph(s.labels, edges, s.values[iu, ju], r_min)


class DegreeSummary(NamedTuple):
    degrees: tuple
    connected_count: int


def degree_summary(g: SimilarityGraph) -> DegreeSummary:
    deg = g.degrees()
    return DegreeSummary(tuple(int(v) for v in deg), int(np.count_nonzero(deg)))
