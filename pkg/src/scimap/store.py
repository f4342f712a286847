"""Versioned binary containers for intermediate results, plus atomic writes.

Layout of a ``.bin`` file::

    magic    8 bytes   b"SCIMAPB\\n"
    version  uint16    little-endian
    kind     uint16    1 matrix, 2 similarity, 3 graph, 4 decomposition
    hlen     uint32    length of the JSON header
    header   hlen bytes of UTF-8 JSON (labels, metadata, array directory)
    arrays   raw little-endian buffers in directory order

Similarity values are stored once per unordered pair (row-major upper
triangle including the diagonal) as IEEE-754 doubles.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile

import numpy as np
import scipy.sparse as sp

from .errors import InputError
from .graph import BicomponentDecomposition
from .ingest import CitationMatrix
from .similarity import SimilarityGraph, SimilarityMatrix

__all__ = ["MAGIC", "VERSION", "save", "load", "load_labels", "is_container", "write_atomic", "dump_json"]

MAGIC = b"SCIMAPB\n"
VERSION = 1
_PREFIX = struct.Struct("<8sHHI")
KINDS = {1: "matrix", 2: "similarity", 3: "graph", 4: "decomposition"}


def write_atomic(path, data) -> None:
    """Write ``data`` (str or bytes) to ``path`` via a temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _pack(kind, header, arrays) -> bytes:
    directory = []
    blobs = []
    for name, arr, dtype in arrays:
        arr = np.ascontiguousarray(arr, dtype=dtype)
        directory.append({"name": name, "dtype": np.dtype(dtype).str, "shape": list(arr.shape)})
        blobs.append(arr.tobytes())
    header = dict(header, arrays=directory)
    hbytes = json.dumps(header, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return _PREFIX.pack(MAGIC, VERSION, kind, len(hbytes)) + hbytes + b"".join(blobs)


def _to_bytes(obj, labels=None) -> bytes:
    if isinstance(obj, CitationMatrix):
        c = obj.counts
        return _pack(1, {"labels": list(obj.labels)}, [
            ("indptr", c.indptr, "<i8"),
            ("indices", c.indices, "<i8"),
            ("data", c.data, "<i8"),
        ])
    if isinstance(obj, SimilarityMatrix):
        iu = np.triu_indices(obj.n)
        return _pack(2, {
            "labels": list(obj.labels),
            "measure": obj.measure,
            "diagonal_policy": obj.diagonal_policy,
        }, [
            ("values", obj.values[iu], "<f8"),
            ("defined", obj.defined[iu], "|b1"),
        ])
    if isinstance(obj, SimilarityGraph):
        return _pack(3, {"labels": list(obj.labels), "threshold": obj.threshold}, [
            ("edges", obj.edges, "<i8"),
            ("weights", obj.weights, "<f8"),
        ])
    if isinstance(obj, BicomponentDecomposition):
        return _pack(4, {"decomposition": obj.to_dict(), "labels": list(labels or ())}, [])
    raise TypeError(f"cannot store {type(obj).__name__}")


def save(obj, path, labels=None) -> None:
    """Write ``obj`` atomically; ``labels`` names the vertices of a decomposition."""
    write_atomic(path, _to_bytes(obj, labels))


def is_container(path) -> bool:
    try:
        with open(path, "rb") as fh:
            return fh.read(len(MAGIC)) == MAGIC
    except OSError:
        return False


def load(path, expect: str | None = None):
    """Read a container; ``expect`` names the required kind."""
    return _load(path, expect)[0]


def load_labels(path) -> tuple:
    """Vertex labels stored in a container's header."""
    return _load(path, None)[1]


def _load(path, expect):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _PREFIX.size:
        raise InputError(f"{path}: truncated container")
    magic, version, kind, hlen = _PREFIX.unpack_from(raw)
    if magic != MAGIC:
        raise InputError(f"{path}: not a scimap container")
    if version != VERSION:
        raise InputError(f"{path}: unsupported container version {version}")
    if kind not in KINDS:
        raise InputError(f"{path}: unknown container kind {kind}")
    if expect is not None and KINDS[kind] != expect:
        raise InputError(f"{path}: expected {expect}, found {KINDS[kind]}")
    offset = _PREFIX.size
    header = json.loads(raw[offset:offset + hlen].decode("utf-8"))
    offset += hlen
    arrays = {}
    for entry in header["arrays"]:
        dt = np.dtype(entry["dtype"])
        count = int(np.prod(entry["shape"])) if entry["shape"] else 1
        nbytes = count * dt.itemsize
        if offset + nbytes > len(raw):
            raise InputError(f"{path}: truncated array {entry['name']!r}")
        arrays[entry["name"]] = np.frombuffer(raw, dtype=dt, count=count, offset=offset).reshape(entry["shape"]).copy()
        offset += nbytes
    labels = tuple(header.get("labels", ()))
    if kind == 1:
        n = len(labels)
        counts = sp.csr_matrix((arrays["data"], arrays["indices"], arrays["indptr"]), shape=(n, n))
        return CitationMatrix(labels, counts), labels
    if kind == 2:
        n = len(labels)
        iu = np.triu_indices(n)
        values = np.empty((n, n))
        defined = np.empty((n, n), dtype=bool)
        values[iu] = arrays["values"]
        defined[iu] = arrays["defined"]
        values.T[iu] = arrays["values"]
        defined.T[iu] = arrays["defined"]
        values.setflags(write=False)
        defined.setflags(write=False)
        return SimilarityMatrix(labels, header["measure"], values, defined, header["diagonal_policy"]), labels
    if kind == 3:
        return SimilarityGraph(labels, arrays["edges"].reshape(-1, 2), arrays["weights"], header["threshold"]), labels
    return BicomponentDecomposition.from_dict(header["decomposition"]), labels
