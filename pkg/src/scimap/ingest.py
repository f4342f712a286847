"""Citation matrix ingestion, database statistics and raw-citation filters.

A :class:`CitationMatrix` holds the aggregated journal-journal citation
counts: cell ``(i, j)`` is how often journal ``i`` cites journal ``j`` in
one year.  Rows are the citing dimension.
"""

from __future__ import annotations

import csv
import gzip
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import InputError

__all__ = [
    "JournalId",
    "CitationMatrix",
    "MatrixStats",
    "parse_citation_csv",
    "read_citation_csv",
    "write_citation_csv",
    "matrix_stats",
    "apply_citation_threshold",
    "filter_low_activity",
    "transpose",
]

HEADER = ("citing", "cited", "count")


class JournalId(NamedTuple):
    index: int
    label: str


@dataclass(frozen=True, eq=False)
class CitationMatrix:
    """Sparse directed citing -> cited count matrix with journal labels.

    ``counts`` is an ``n x n`` CSR matrix of int64 with sorted indices and no
    explicit zeros.  Treat instances as immutable.
    """

    labels: tuple
    counts: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if self.counts.shape != (n, n):
            raise InputError(f"count matrix shape {self.counts.shape} does not match {n} labels")
        if len(set(self.labels)) != n:
            raise InputError("journal labels must be unique")
        if any(not lab for lab in self.labels):
            raise InputError("journal labels must be non-empty")
        if self.counts.nnz and self.counts.data.min() < 1:
            raise InputError("stored counts must be >= 1")

    @classmethod
    def from_entries(cls, labels: Iterable[str], entries: dict) -> "CitationMatrix":
        labels = tuple(labels)
        n = len(labels)
        if entries:
            keys = np.array(list(entries.keys()), dtype=np.int64).reshape(-1, 2)
            vals = np.fromiter(entries.values(), dtype=np.int64, count=len(entries))
        else:
            keys = np.zeros((0, 2), dtype=np.int64)
            vals = np.zeros(0, dtype=np.int64)
        counts = sp.csr_matrix((vals, (keys[:, 0], keys[:, 1])), shape=(n, n), dtype=np.int64)
        return cls(labels, _canonical(counts))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def nnz(self) -> int:
        return self.counts.nnz

    def journals(self) -> list[JournalId]:
        return [JournalId(i, lab) for i, lab in enumerate(self.labels)]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def entries(self) -> dict:
        """Stored cells as ``{(citing, cited): count}`` in row-major order."""
        coo = self.counts.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return {
            (int(coo.row[k]), int(coo.col[k])): int(coo.data[k]) for k in order
        }

    def labelled_entries(self) -> dict:
        return {(self.labels[i], self.labels[j]): c for (i, j), c in self.entries().items()}

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel().astype(np.int64)

    def subset(self, keep) -> "CitationMatrix":
        """Induced sub-matrix on ``keep`` (indices), re-indexed ascending."""
        keep = np.unique(np.asarray(keep, dtype=np.int64))
        sub = self.counts[keep][:, keep]
        return CitationMatrix(tuple(self.labels[i] for i in keep), _canonical(sub))

    def __eq__(self, other):
        if not isinstance(other, CitationMatrix):
            return NotImplemented
        return self.labels == other.labels and self.entries() == other.entries()

    __hash__ = None


def _canonical(counts) -> sp.csr_matrix:
    counts = sp.csr_matrix(counts, dtype=np.int64)
    counts.eliminate_zeros()
    counts.sort_indices()
    return counts


@dataclass(frozen=True)
class MatrixStats:
    n: int
    nonzero_count: int
    density: float
    uncited_count: int
    non_citing_count: int
    self_citation_total: int
    citing_totals: tuple = field(repr=False)

    def to_dict(self, include_totals=False) -> dict:
        d = {
            "n": self.n,
            "nonzero_count": self.nonzero_count,
            "density": self.density,
            "uncited_count": self.uncited_count,
            "non_citing_count": self.non_citing_count,
            "self_citation_total": self.self_citation_total,
        }
        if include_totals:
            d["citing_totals"] = list(self.citing_totals)
        return d

    def format_text(self) -> str:
        rows = [
            ("journals", f"{self.n:,}"),
            ("non-zero cells", f"{self.nonzero_count:,}"),
            ("density", f"{self.density:.4f} ({100 * self.density:.1f}%)"),
            ("uncited journals", f"{self.uncited_count:,}"),
            ("non-citing journals", f"{self.non_citing_count:,}"),
            ("self-citations", f"{self.self_citation_total:,}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v:>14}" for k, v in rows)


def parse_citation_csv(stream) -> CitationMatrix:
    """Parse a ``citing,cited,count`` edge list.

    ``stream`` is a text stream or a string.  Labels get dense indices in
    order of first appearance.  An optional header ``citing,cited,count``
    may open the file; a record with a single field declares a journal
    without adding any citation (used to round-trip journals that have no
    stored cells).  Blank lines are ignored.

    Raises
    ------
    InputError
        On an empty label, a non-integer or non-positive count, a wrong
        field count or a repeated ``(citing, cited)`` pair.  The message
        carries the line number.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    index: dict[str, int] = {}
    entries: dict[tuple[int, int], int] = {}

    def intern(label, lineno):
        label = label.strip()
        if not label:
            raise InputError("empty journal label", lineno)
        if label not in index:
            index[label] = len(index)
        return index[label]

    for lineno, row in enumerate(csv.reader(stream), start=1):
        if not row or all(not f.strip() for f in row):
            continue
        if lineno == 1 and tuple(f.strip().lower() for f in row) == HEADER:
            continue
        if len(row) == 1:
            intern(row[0], lineno)
            continue
        if len(row) != 3:
            raise InputError(f"expected 3 fields, got {len(row)}", lineno)
        raw = row[2].strip()
        try:
            count = int(raw)
        except ValueError:
            raise InputError(f"count {raw!r} is not an integer", lineno) from None
        if count <= 0:
            raise InputError(f"non-positive count {count}", lineno)
        i = intern(row[0], lineno)
        j = intern(row[1], lineno)
        if (i, j) in entries:
            raise InputError(f"duplicate record {row[0].strip()!r} -> {row[1].strip()!r}", lineno)
        entries[(i, j)] = count
    return CitationMatrix.from_entries(index, entries)


def read_citation_csv(path) -> CitationMatrix:
    """Read a citation CSV from disk; ``.gz`` files are decompressed."""
    path = os.fspath(path)
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8", newline="") as fh:
        return parse_citation_csv(fh)


def write_citation_csv(m: CitationMatrix) -> str:
    """Serialise ``m`` so that ``parse_citation_csv`` restores it exactly.

    Every label is declared first, in index order, so journals without
    stored cells and the index order both survive the round trip.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for lab in m.labels:
        w.writerow([lab])
    for (i, j), c in m.entries().items():
        w.writerow([m.labels[i], m.labels[j], c])
    return buf.getvalue()


def matrix_stats(m: CitationMatrix) -> MatrixStats:
    n = m.n
    if n == 0:
        return MatrixStats(0, 0, 0.0, 0, 0, 0, ())
    counts = m.counts
    citing = m.row_sums()
    out_links = np.diff(counts.indptr)
    in_links = np.bincount(counts.indices, minlength=n)
    return MatrixStats(
        n=n,
        nonzero_count=int(counts.nnz),
        density=counts.nnz / (n * n),
        uncited_count=int(np.count_nonzero(in_links == 0)),
        non_citing_count=int(np.count_nonzero(out_links == 0)),
        self_citation_total=int(counts.diagonal().sum()),
        citing_totals=tuple(int(v) for v in citing),
    )


def apply_citation_threshold(m: CitationMatrix, min_count: int) -> CitationMatrix:
    """Drop cells with ``count < min_count``; every journal is kept."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if min_count == 1:
        return m
    counts = m.counts.copy()
    counts.data[counts.data < min_count] = 0
    return CitationMatrix(m.labels, _canonical(counts))


def filter_low_activity(m: CitationMatrix, min_total_citing: int = 12):
    """Remove journals that cite fewer than ``min_total_citing`` times in total.

    The row sum includes the self-citation cell.  Returns the re-indexed
    matrix (ascending original index) and the excluded journals as
    :class:`JournalId` with their original indices, sorted by label.
    """
    if min_total_citing < 0:
        raise ValueError("min_total_citing must be non-negative")
    totals = m.row_sums()
    keep = np.flatnonzero(totals >= min_total_citing)
    drop = np.flatnonzero(totals < min_total_citing)
    excluded = sorted((JournalId(int(i), m.labels[i]) for i in drop), key=lambda j: j.label)
    if drop.size == 0:
        return m, excluded
    return m.subset(keep), excluded


def transpose(m: CitationMatrix) -> CitationMatrix:
    """Swap to the cited dimension (rows become cited-by vectors)."""
    return CitationMatrix(m.labels, _canonical(m.counts.T.tocsr()))
