"""End-to-end run: ingest, filter, similarity, decomposition, maps, exports.

A run is described by a flat ``key = value`` config file (``#`` comments).
The manifest records every parameter, the config text verbatim and the
counts at each stage, so a rerun can be checked number for number.

Example config::

    # planted three-block test
    synth.blocks = 15,15,15
    synth.bridges = 2
    ladder = 0.8
    min_size = 10
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import __version__
from .decompose import Classification, ClusterTree, classify, decompose
from .errors import InputError, InvariantError, PipelineError
from .graph import extract_subgraph
from .ingest import (
    apply_citation_threshold,
    filter_low_activity,
    matrix_stats,
    read_citation_csv,
    transpose,
)
from .layout import LayoutParams, layout_graph
from .pajek import write_pajek_clu, write_pajek_net
from .render import render_svg
from .similarity import compute_similarity, degree_summary, threshold_graph
from .store import dump_json, write_atomic
from .synth import SyntheticSpec, generate_synthetic

__all__ = ["PipelineConfig", "PipelineResult", "parse_config", "load_config", "run_pipeline"]


def _floats(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


def _ints(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class PipelineConfig:
    input: str | None = None
    synth_blocks: tuple = ()
    synth_intra: float = 50.0
    synth_inter: float = 0.0
    synth_bridges: int = 0
    synth_seed: int = 1
    transpose: bool = False
    drop_ones: bool = False
    min_citing: int = 12
    min_count: int = 1
    measure: str = "pearson"
    diagonal: str = "include"
    ladder: tuple = (0.8, 0.9, 0.95)
    min_size: int = 10
    max_size: int = 200
    layout: str = "auto"
    layout_seed: int = 1
    layout_iterations: int | None = None
    labels: bool = False
    source_text: str = field(default="", compare=False, repr=False)
    base_dir: str = field(default=".", compare=False, repr=False)

    def params(self) -> dict:
        skip = {"source_text", "base_dir"}
        out = {}
        for f in fields(self):
            if f.name in skip:
                continue
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


_KEYS = {
    "input": ("input", str),
    "synth.blocks": ("synth_blocks", _ints),
    "synth.intra": ("synth_intra", float),
    "synth.inter": ("synth_inter", float),
    "synth.bridges": ("synth_bridges", int),
    "synth.seed": ("synth_seed", int),
    "transpose": ("transpose", _bool),
    "drop_ones": ("drop_ones", _bool),
    "min_citing": ("min_citing", int),
    "min_count": ("min_count", int),
    "measure": ("measure", str),
    "diagonal": ("diagonal", str),
    "ladder": ("ladder", _floats),
    "min_size": ("min_size", int),
    "max_size": ("max_size", int),
    "layout": ("layout", str),
    "layout_seed": ("layout_seed", int),
    "layout_iterations": ("layout_iterations", int),
    "labels": ("labels", _bool),
}


def parse_config(text: str, base_dir=".") -> PipelineConfig:
    """Parse flat ``key = value`` text into a :class:`PipelineConfig`."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise InputError(f"malformed config: {exc}") from None
    values = {}
    for key, raw in cp["run"].items():
        if key not in _KEYS:
            raise InputError(f"unknown config key {key!r}")
        name, conv = _KEYS[key]
        try:
            values[name] = conv(raw.strip())
        except ValueError as exc:
            raise InputError(f"bad value for {key!r}: {exc}") from None
    cfg = PipelineConfig(**values, source_text=text, base_dir=str(base_dir))
    if (cfg.input is None) == (not cfg.synth_blocks):
        raise InputError("config needs exactly one of 'input' or 'synth.blocks'")
    return cfg


def load_config(path) -> PipelineConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


@dataclass
class PipelineResult:
    classification: Classification
    tree: ClusterTree
    manifest: dict
    maps: dict
    files: dict


class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and not isinstance(exc, PipelineError):
            raise PipelineError(self.name, exc) from exc
        return False


def _check(cond, message):
    if not cond:
        raise InvariantError(message)


def run_pipeline(config, out_dir=None, workers=None) -> PipelineResult:
    """Run every stage; write outputs to ``out_dir`` when given.

    ``config`` is a :class:`PipelineConfig`, a path to a config file or
    config text.  Outputs: ``manifest.json``, ``classification.csv``,
    ``tree.json``, ``network.net``, ``clusters.clu`` and ``maps/*.svg``.
    """
    if not isinstance(config, PipelineConfig):
        if "\n" not in str(config) and os.path.exists(config):
            config = load_config(config)
        else:
            config = parse_config(str(config))

    manifest: dict = {"scimap_version": __version__, "config_text": config.source_text}
    manifest["parameters"] = config.params()

    with _Stage("ingest"):
        if config.input is not None:
            path = Path(config.input)
            if not path.is_absolute():
                path = Path(config.base_dir) / path
            m = read_citation_csv(path)
            source = {"kind": "csv", "path": config.input}
        else:
            spec = SyntheticSpec(
                blocks=config.synth_blocks,
                intra_rate=config.synth_intra,
                inter_rate=config.synth_inter,
                bridge_journals=config.synth_bridges,
                seed=config.synth_seed,
            )
            planted = generate_synthetic(spec)
            m = planted.matrix
            source = {"kind": "synthetic", "hub_weight": round(planted.hub_weight, 12)}
        if config.transpose:
            m = transpose(m)
        st = matrix_stats(m)
        manifest["ingest"] = dict(source, **st.to_dict())

    with _Stage("filter"):
        n_in = m.n
        if config.drop_ones:
            m = apply_citation_threshold(m, 2)
        m, excluded = filter_low_activity(m, config.min_citing)
        if config.min_count > 1:
            m = apply_citation_threshold(m, config.min_count)
        _check(len(excluded) + m.n == n_in, "filter lost journals")
        manifest["filter"] = {
            "input": n_in,
            "min_citing": config.min_citing,
            "excluded": len(excluded),
            "retained": m.n,
            "excluded_journals": [j.label for j in excluded],
            "nonzero_after": m.nnz,
        }

    with _Stage("similarity"):
        s = compute_similarity(m, config.measure, config.diagonal, workers)
        manifest["similarity"] = {
            "measure": s.measure,
            "diagonal_policy": s.diagonal_policy,
            "journals": s.n,
            "undefined_pairs": s.undefined_pairs(),
        }

    with _Stage("threshold"):
        rungs = []
        for r in config.ladder:
            g = threshold_graph(s, r)
            ds = degree_summary(g)
            rungs.append({
                "threshold": r,
                "edges": g.m,
                "connected": ds.connected_count,
                "unconnected": s.n - ds.connected_count,
            })
            _check(ds.connected_count <= s.n, "degree summary exceeds journal count")
        manifest["thresholds"] = rungs

    with _Stage("decompose"):
        tree = decompose(s, config.ladder, config.min_size, config.max_size)
        classification = classify(tree)
        _verify_tree(tree)
        manifest["decomposition"] = _tree_summary(tree)
        manifest["classification"] = {
            "rows": len(classification),
            "journals": len({r.journal for r in classification.rows}),
            "top_level_clusters": len(tree.roots),
        }

    with _Stage("layout"):
        params = LayoutParams(max_iterations=config.layout_iterations, seed=config.layout_seed)
        maps = {}
        g0 = threshold_graph(s, config.ladder[0])
        connected = [v for v, d in enumerate(g0.degrees()) if d > 0]
        overview = extract_subgraph(g0, connected)
        top = classification.partition(s.labels)
        part = [top[v] for v in connected]
        aps = set(tree.top.articulation_points)
        hl = [k for k, v in enumerate(connected) if v in aps]
        lay = layout_graph(overview, config.layout, params)
        maps["overview.svg"] = render_svg(
            overview, lay, part, highlight=hl, labels=config.labels,
            title=f"{overview.n} journals at r >= {config.ladder[0]:g}",
        )
        layouts = {"overview": lay.algorithm}
        for node in tree.walk():
            g = threshold_graph(s.restrict(node.vertices), node.threshold)
            local_part = [1] * g.n
            highlight = []
            if node.split is not None:
                index = {v: k for k, v in enumerate(node.vertices)}
                local_part = [0] * g.n
                for ci, child in enumerate(node.children, start=1):
                    for v in child.vertices:
                        if local_part[index[v]] == 0:
                            local_part[index[v]] = ci
                highlight = [index[v] for v in node.split.articulation_points]
            lay = layout_graph(g, config.layout, params)
            layouts[node.path] = lay.algorithm
            maps[f"cluster-{node.path}.svg"] = render_svg(
                g, lay, local_part, highlight=highlight, labels=config.labels,
                title=f"cluster {node.path}: {node.size} journals at r >= {node.threshold:g}",
            )
        manifest["maps"] = {"count": len(maps), "algorithms": layouts}

    files = {
        "manifest.json": None,
        "classification.csv": classification.to_csv(),
        "tree.json": dump_json(tree.to_dict()),
        "network.net": write_pajek_net(g0),
        "clusters.clu": write_pajek_clu(classification.partition(s.labels)),
    }
    files.update({f"maps/{k}": v for k, v in maps.items()})
    manifest["outputs"] = sorted(files)
    files["manifest.json"] = dump_json(manifest)

    if out_dir is not None:
        with _Stage("export"):
            out = Path(out_dir)
            for name, text in files.items():
                write_atomic(out / name, text)
    return PipelineResult(classification, tree, manifest, maps, files)


def _verify_tree(tree: ClusterTree):
    for node in tree.walk():
        if node.split is None:
            continue
        parts = set(node.split.dropped) | set(node.split.unclustered)
        for c in node.children:
            _check(set(c.vertices) <= set(node.vertices), f"node {c.path} escapes its parent")
            _check(c.threshold > node.threshold, f"node {c.path} does not raise the threshold")
            parts |= set(c.vertices)
        _check(parts == set(node.vertices), f"node {node.path} does not conserve its journals")


def _tree_summary(tree: ClusterTree) -> dict:
    lab = tree.labels

    def split(sp_):
        return {
            "threshold": sp_.threshold,
            "journals": len(sp_.vertices),
            "connected": sp_.connected_count,
            "dropped": len(sp_.dropped),
            "unclustered": len(sp_.unclustered),
            "bicomponents_min3": sp_.stats_min3.n_components,
            "journals_min3": sp_.stats_min3.n_journals_covered,
            "articulation_points_min3": sp_.stats_min3.n_articulation_points,
            "bicomponents": sp_.stats.n_components,
            "journals_included": sp_.stats.n_journals_covered,
            "articulation_points": sp_.stats.n_articulation_points,
            "articulation_journals": sorted(lab[v] for v in sp_.articulation_points),
            "largest": sp_.stats.largest,
            "size_histogram": {str(k): v for k, v in sp_.stats_min3.size_histogram.items()},
        }

    nodes = []
    for node in tree.walk():
        entry = {"path": node.path, "threshold": node.threshold, "size": node.size, "status": node.status}
        if node.split is not None:
            entry["split"] = split(node.split)
        nodes.append(entry)
    return {
        "ladder": list(tree.ladder),
        "min_size": tree.min_size,
        "max_component_size": tree.max_component_size,
        "top": split(tree.top),
        "depth": tree.depth(),
        "final_clusters": sum(1 for n in tree.walk() if not n.children),
        "ladder_exhausted": [n.path for n in tree.walk() if n.status == "ladder-exhausted"],
        "nodes": nodes,
    }
