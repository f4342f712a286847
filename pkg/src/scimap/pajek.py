"""Pajek ``.net`` and ``.clu`` interchange.

Canonical output: ``*Vertices n``, one ``i "label"`` line per vertex, then a
``*Edges`` (similarity graphs) or ``*Arcs`` (citation matrices) section of
``u v w`` lines sorted by ``(u, v)``.  Indices are 1-based in the file and
0-based in memory.  Weights print with at most 6 significant digits and no
trailing zeros; integer weights print as integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .ingest import CitationMatrix
from .similarity import SimilarityGraph

__all__ = [
    "PajekNetwork",
    "PajekPartition",
    "format_weight",
    "write_pajek_net",
    "read_pajek_net",
    "write_pajek_clu",
    "read_pajek_clu",
]


@dataclass
class PajekNetwork:
    """In-memory Pajek network; endpoints are 0-based ``(u, v, w)`` triples."""

    labels: list
    arcs: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    sections: tuple = ()  # section order as read, for byte-exact rewrites

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_graph(cls, g: SimilarityGraph) -> "PajekNetwork":
        return cls(
            list(g.labels),
            edges=[(int(u), int(v), float(w)) for (u, v), w in zip(g.edges.tolist(), g.weights.tolist())],
        )

    @classmethod
    def from_matrix(cls, m: CitationMatrix) -> "PajekNetwork":
        return cls(list(m.labels), arcs=[(i, j, c) for (i, j), c in m.entries().items()])

    def to_graph(self, threshold=None) -> SimilarityGraph:
        if self.arcs:
            raise ValueError("network has arcs; a similarity graph is undirected")
        e = np.array([(u, v) for u, v, _ in self.edges], dtype=np.int64).reshape(-1, 2)
        w = np.array([w for _, _, w in self.edges], dtype=np.float64)
        return SimilarityGraph(tuple(self.labels), e, w, threshold)

    def to_matrix(self) -> CitationMatrix:
        if self.edges:
            raise ValueError("network has undirected edges; a citation matrix needs arcs")
        return CitationMatrix.from_entries(self.labels, {(u, v): int(w) for u, v, w in self.arcs})

    def __eq__(self, other):
        if not isinstance(other, PajekNetwork):
            return NotImplemented
        return (
            list(self.labels) == list(other.labels)
            and sorted(self.arcs) == sorted(other.arcs)
            and sorted(self.edges) == sorted(other.edges)
        )


@dataclass
class PajekPartition:
    clusters: list

    @property
    def n(self) -> int:
        return len(self.clusters)


def format_weight(w) -> str:
    if isinstance(w, (int, np.integer)):
        return str(int(w))
    w = float(w)
    if w.is_integer() and abs(w) < 1e15:
        return str(int(w))
    text = f"{w:.6g}"
    if "e" in text:
        # keep plain decimal notation; Pajek readers vary on exponents
        text = np.format_float_positional(float(text), trim="-")
    return text


def _check_label(label):
    if '"' in label or "\n" in label or "\r" in label:
        raise ValueError(f"label {label!r} cannot be written to Pajek")


def write_pajek_net(obj) -> str:
    """Serialise a SimilarityGraph (``*Edges``), CitationMatrix (``*Arcs``) or PajekNetwork."""
    if isinstance(obj, SimilarityGraph):
        net = PajekNetwork.from_graph(obj)
    elif isinstance(obj, CitationMatrix):
        net = PajekNetwork.from_matrix(obj)
    elif isinstance(obj, PajekNetwork):
        net = obj
    else:
        raise TypeError(f"cannot write {type(obj).__name__} as Pajek")
    lines = [f"*Vertices {net.n}"]
    for i, lab in enumerate(net.labels, start=1):
        _check_label(lab)
        lines.append(f'{i} "{lab}"')
    if isinstance(obj, CitationMatrix):
        kinds = ["arcs"] if net.n else []
    elif isinstance(obj, SimilarityGraph):
        kinds = ["edges"] if net.n else []
    elif net.sections:
        kinds = list(net.sections)
    else:
        kinds = [k for k in ("arcs", "edges") if getattr(net, k)]
    for kind in kinds:
        lines.append("*Arcs" if kind == "arcs" else "*Edges")
        for u, v, w in sorted(getattr(net, kind), key=lambda t: (t[0], t[1])):
            lines.append(f"{u + 1} {v + 1} {format_weight(w)}")
    return "\n".join(lines) + "\n"


_VERTEX = re.compile(r'\s*(\d+)\s*(.*)$')


def _parse_weight(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise InputError(f"bad weight {tok!r}", lineno) from None


def read_pajek_net(text: str) -> PajekNetwork:
    """Parse Pajek network text.

    Accepts ``*Vertices``, ``*Arcs`` and ``*Edges`` sections (any case).
    Vertices without a label line get their number as label; a missing
    weight defaults to 1.  Lines starting with ``%`` are comments.

    Raises
    ------
    InputError
        Malformed header, unterminated quote, bad index or out-of-range
        endpoint, with the line number.
    """
    lines = text.splitlines()
    pos = 0
    while pos < len(lines) and (not lines[pos].strip() or lines[pos].lstrip().startswith("%")):
        pos += 1
    if pos == len(lines):
        raise InputError("missing *Vertices header", pos + 1 if lines else 1)
    head = lines[pos].split()
    if not head or head[0].lower() != "*vertices" or len(head) < 2:
        raise InputError(f"malformed header {lines[pos]!r}", pos + 1)
    try:
        n = int(head[1])
    except ValueError:
        raise InputError(f"malformed vertex count {head[1]!r}", pos + 1) from None
    if n < 0:
        raise InputError("negative vertex count", pos + 1)
    labels = [str(i) for i in range(1, n + 1)]
    net = PajekNetwork(labels)
    section = "vertices"
    for lineno in range(pos + 2, len(lines) + 1):
        raw = lines[lineno - 1]
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            key = line.split()[0].lower()
            if key == "*arcs":
                section = "arcs"
            elif key == "*edges":
                section = "edges"
            else:
                raise InputError(f"unsupported section {key!r}", lineno)
            net.sections += (section,)
            continue
        if section == "vertices":
            m = _VERTEX.match(line)
            if not m:
                raise InputError(f"malformed vertex line {raw!r}", lineno)
            idx = int(m.group(1))
            if not 1 <= idx <= n:
                raise InputError(f"vertex index {idx} out of range 1..{n}", lineno)
            rest = m.group(2).strip()
            if rest.startswith('"'):
                end = rest.find('"', 1)
                if end < 0:
                    raise InputError("unterminated quote", lineno)
                label = rest[1:end]
            elif rest:
                label = rest.split()[0]
            else:
                label = str(idx)
            labels[idx - 1] = label
            continue
        parts = line.split()
        if len(parts) < 2:
            raise InputError(f"malformed {section[:-1]} line {raw!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"malformed endpoints in {raw!r}", lineno) from None
        for x in (u, v):
            if not 1 <= x <= n:
                raise InputError(f"endpoint {x} out of range 1..{n}", lineno)
        w = _parse_weight(parts[2], lineno) if len(parts) > 2 else 1
        (net.arcs if section == "arcs" else net.edges).append((u - 1, v - 1, w))
    return net


def write_pajek_clu(partition, n: int | None = None) -> str:
    """``*Vertices n`` followed by one integer cluster id per line."""
    clusters = list(partition.clusters if isinstance(partition, PajekPartition) else partition)
    if n is not None and n != len(clusters):
        raise ValueError(f"partition has {len(clusters)} entries, expected {n}")
    return "".join([f"*Vertices {len(clusters)}\n"] + [f"{int(c)}\n" for c in clusters])


def read_pajek_clu(text: str) -> PajekPartition:
    lines = [ln.strip() for ln in text.splitlines()]
    body = [(i, ln) for i, ln in enumerate(lines, start=1) if ln and not ln.startswith("%")]
    if not body or body[0][1].split()[0].lower() != "*vertices":
        raise InputError("missing *Vertices header", body[0][0] if body else 1)
    try:
        n = int(body[0][1].split()[1])
    except (IndexError, ValueError):
        raise InputError("malformed vertex count", body[0][0]) from None
    clusters = []
    for lineno, ln in body[1:]:
        try:
            clusters.append(int(ln))
        except ValueError:
            raise InputError(f"bad cluster id {ln!r}", lineno) from None
    if len(clusters) != n:
        raise InputError(f"expected {n} cluster ids, found {len(clusters)}", body[-1][0])
    return PajekPartition(clusters)
