"""Planted-block citation matrices for desk-scale experiments.

Each block is a group of journals citing one another heavily (Poisson
counts with mean ``intra_rate`` on average) and everybody else lightly
(mean ``inter_rate``).  Inside a block, journals are not equally popular:
the rate at which the block cites its ``k``-th own journal falls linearly
from ``(1 + popularity_spread)`` to ``(1 - popularity_spread)`` times
``intra_rate``.  That shared shape is what makes members of one block
correlate even when nothing outside the block is cited.  Bridge journal ``k`` belongs to both block ``k`` and block
``k + 1`` and cites the two blocks evenly: its expected row is the average
of the two blocks' expected rows.

Block members cite the bridge journals of their block more heavily than
ordinary members (``hub_weight`` times ``intra_rate``).  Without that the
two blocks would share no cited journals, their citing rows would be
anti-correlated, and no journal could correlate strongly with both.  By
default the weight is solved for so that the expected rows of adjacent
blocks correlate at ``target_overlap``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .ingest import CitationMatrix

__all__ = ["SyntheticSpec", "PlantedMatrix", "generate_synthetic", "planted_layout"]


@dataclass(frozen=True)
class SyntheticSpec:
    blocks: tuple = (15, 15, 15)
    intra_rate: float = 50.0
    inter_rate: float = 0.0
    bridge_journals: int = 2
    seed: int = 1
    hub_weight: float | None = None
    target_overlap: float = 0.55
    popularity_spread: float = 0.9

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if not self.blocks:
            raise ValueError("at least one block is needed")
        if any(b < 3 for b in self.blocks):
            raise ValueError("block sizes must be at least 3")
        if self.intra_rate <= 0:
            raise ValueError("intra_rate must be positive")
        if not 0 <= self.popularity_spread < 1:
            raise ValueError("popularity_spread must lie in [0, 1)")
        if self.inter_rate < 0:
            raise ValueError("inter_rate must be non-negative")
        if not 0 <= self.bridge_journals <= len(self.blocks) - 1:
            raise ValueError("bridge_journals must lie between 0 and len(blocks) - 1")
        for b, size in enumerate(self.blocks):
            shared = (b - 1 in range(self.bridge_journals)) + (b < self.bridge_journals)
            if size - shared < 1:
                raise ValueError(f"block {b + 1} has no room for its own journals")


@dataclass(frozen=True)
class PlantedMatrix:
    """Generated matrix with its ground truth (vertex indices)."""

    matrix: CitationMatrix
    blocks: tuple  # sorted member tuples, one per block
    bridges: tuple
    hub_weight: float


def planted_layout(spec: SyntheticSpec):
    """Labels, block memberships and bridge indices for ``spec``."""
    nb = spec.bridge_journals
    labels = []
    own = []
    for b, size in enumerate(spec.blocks):
        shared = (b - 1 in range(nb)) + (b < nb)
        start = len(labels)
        labels.extend(f"B{b + 1}-{j + 1:02d}" for j in range(size - shared))
        own.append(list(range(start, len(labels))))
    bridges = list(range(len(labels), len(labels) + nb))
    labels.extend(f"X{k + 1}" for k in range(nb))
    members = []
    for b in range(len(spec.blocks)):
        extra = [bridges[k] for k in (b - 1, b) if 0 <= k < nb]
        members.append(tuple(sorted(own[b] + extra)))
    return labels, members, bridges


def _rates(spec, members, bridges, n, hub):
    bset = set(bridges)
    profiles = np.full((len(members), n), float(spec.inter_rate))
    for b, mem in enumerate(members):
        own = [j for j in mem if j not in bset]
        spread = spec.popularity_spread if len(own) > 1 else 0.0
        profiles[b, own] = spec.intra_rate * np.linspace(1 + spread, 1 - spread, len(own))
        for j in mem:
            if j in bset:
                profiles[b, j] = spec.intra_rate * hub
    lam = np.zeros((n, n))
    for b, mem in enumerate(members):
        for i in mem:
            if i not in bset:
                lam[i] = profiles[b]
    for k, i in enumerate(bridges):
        lam[i] = 0.5 * (profiles[k] + profiles[k + 1])
    return lam, profiles


def _adjacent_overlap(spec, members, bridges, n, hub):
    _, prof = _rates(spec, members, bridges, n, hub)
    rs = [np.corrcoef(prof[k], prof[k + 1])[0, 1] for k in range(len(bridges))]
    return float(np.mean(rs))


def _solve_hub(spec, members, bridges, n) -> float:
    if not bridges:
        return 1.0
    f = lambda h: _adjacent_overlap(spec, members, bridges, n, h) - spec.target_overlap
    lo, hi = 1.0, 1000.0
    if f(lo) >= 0:
        return lo
    if f(hi) <= 0:
        return hi
    return float(brentq(f, lo, hi, xtol=1e-10))


def generate_synthetic(spec: SyntheticSpec | None = None, **kwargs) -> PlantedMatrix:
    """Draw a planted-block citation matrix; identical specs give identical matrices."""
    if spec is None:
        spec = SyntheticSpec(**kwargs)
    elif kwargs:
        raise TypeError("pass either a SyntheticSpec or keyword arguments")
    labels, members, bridges = planted_layout(spec)
    n = len(labels)
    hub = spec.hub_weight if spec.hub_weight is not None else _solve_hub(spec, members, bridges, n)
    lam, _ = _rates(spec, members, bridges, n, hub)
    rng = np.random.default_rng(spec.seed)
    counts = rng.poisson(lam)
    rows, cols = np.nonzero(counts)
    entries = {(int(i), int(j)): int(counts[i, j]) for i, j in zip(rows, cols)}
    m = CitationMatrix.from_entries(labels, entries)
    return PlantedMatrix(m, tuple(members), tuple(bridges), hub)
