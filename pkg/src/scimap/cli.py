"""Journal clusters and maps from citation matrices.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import store
from .decompose import DEFAULT_LADDER, classify, decompose
from .errors import InputError, ScimapError
from .graph import bicomponents, filter_components, size_distribution
from .ingest import (
    CitationMatrix,
    apply_citation_threshold,
    filter_low_activity,
    matrix_stats,
    read_citation_csv,
    transpose,
    write_citation_csv,
)
from .layout import Layout, LayoutParams, layout_graph
from .pajek import read_pajek_clu, write_pajek_clu, write_pajek_net
from .pipeline import run_pipeline
from .render import render_svg
from .similarity import SimilarityGraph, compute_similarity, threshold_graph
from .synth import SyntheticSpec, generate_synthetic

log = logging.getLogger("scimap")


def _floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_matrix(path) -> CitationMatrix:
    if store.is_container(path):
        return store.load(path, expect="matrix")
    return read_citation_csv(path)


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        store.write_atomic(path, text)


def cmd_ingest(args):
    m = read_citation_csv(args.file)
    if args.transpose:
        m = transpose(m)
    if args.drop_ones:
        m = apply_citation_threshold(m, 2)
    if args.min_citing:
        m, excluded = filter_low_activity(m, args.min_citing)
        log.info("excluded %d journals citing fewer than %d times", len(excluded), args.min_citing)
    if args.min_count > 1:
        m = apply_citation_threshold(m, args.min_count)
    store.save(m, args.out)
    log.info("%d journals, %d cells -> %s", m.n, m.nnz, args.out)


def cmd_stats(args):
    st = matrix_stats(_read_matrix(args.file))
    if args.json:
        print(json.dumps(st.to_dict(), indent=2))
    else:
        print(st.format_text())


def cmd_similarity(args):
    m = _read_matrix(args.matrix)
    s = compute_similarity(m, args.measure, args.diagonal, args.threads)
    store.save(s, args.out)
    log.info("%s similarity over %d journals (%d undefined pairs)", s.measure, s.n, s.undefined_pairs())


def cmd_graph(args):
    s = store.load(args.similarity, expect="similarity")
    g = threshold_graph(s, args.rmin)
    store.save(g, args.out)
    log.info("%d edges at r >= %g", g.m, args.rmin)


def _table(g: SimilarityGraph, min_size: int | None):
    full = bicomponents(g)
    cols = [("three or more", filter_components(full, 3))]
    if min_size and min_size != 3:
        cols.append((f"{min_size} or more", filter_components(full, min_size)))
    stats = [(name, size_distribution(d)) for name, d in cols]
    rows = [
        ("Nr of bi-components", [s.n_components for _, s in stats]),
        ("Nr of journals included", [s.n_journals_covered for _, s in stats]),
        ("Nr of articulation points", [s.n_articulation_points for _, s in stats]),
    ]
    width = max(len(r[0]) for r in rows)
    header = " " * width + "".join(f"  {name:>16}" for name, _ in stats)
    lines = [f"{g.n} journals, r >= {g.threshold:g}" if g.threshold is not None else f"{g.n} journals", header]
    lines += [f"{label:<{width}}" + "".join(f"  {v:>16}" for v in vals) for label, vals in rows]
    payload = {name: s.to_dict() for name, s in stats}
    return "\n".join(lines), payload, cols[-1][1]


def cmd_components(args):
    g = store.load(args.graph, expect="graph")
    text, payload, dec = _table(g, args.min_size)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)
    if args.out:
        store.save(dec, args.out, labels=g.labels)


def cmd_decompose(args):
    s = store.load(args.similarity, expect="similarity")
    tree = decompose(s, args.ladder, args.min_size, args.max_size)
    store.write_atomic(args.out, store.dump_json(tree.to_dict()))
    if args.classification:
        store.write_atomic(args.classification, classify(tree).to_csv())
    log.info("%d top-level clusters, depth %d", len(tree.roots), tree.depth())


def cmd_layout(args):
    g = store.load(args.graph, expect="graph")
    params = LayoutParams(max_iterations=args.iters, seed=args.seed)
    lay = layout_graph(g, args.algo, params)
    meta = {"seed": args.seed, "requested": args.algo, "n": g.n}
    store.write_atomic(args.out, store.dump_json(lay.to_dict(**meta)))


def cmd_render(args):
    g = store.load(args.graph, expect="graph")
    lay = Layout.from_dict(json.loads(Path(args.layout).read_text(encoding="utf-8")))
    partition = None
    if args.partition:
        partition = read_pajek_clu(Path(args.partition).read_text(encoding="utf-8")).clusters
    highlight = []
    if args.highlight_articulation:
        highlight = sorted(filter_components(bicomponents(g), args.min_size).articulation_points)
    svg = render_svg(g, lay, partition, vertex_radius=args.radius, highlight=highlight, labels=args.labels)
    _write_text(args.out, svg)


def cmd_export_pajek(args):
    obj = store.load(args.input) if store.is_container(args.input) else read_citation_csv(args.input)
    if not isinstance(obj, (CitationMatrix, SimilarityGraph)):
        raise InputError(f"{args.input}: only citation matrices and graphs export to Pajek")
    _write_text(args.out, write_pajek_net(obj))
    if args.clu:
        if not args.classification:
            raise InputError("--clu needs --classification")
        with open(args.classification, encoding="utf-8", newline="") as fh:
            top: dict[str, int] = {}
            for row in csv.DictReader(fh):
                k = int(row["path"].split(".")[0])
                top[row["journal"]] = min(k, top.get(row["journal"], k))
        store.write_atomic(args.clu, write_pajek_clu([top.get(lab, 0) for lab in obj.labels]))


def cmd_synth(args):
    spec = SyntheticSpec(
        blocks=args.blocks,
        intra_rate=args.intra,
        inter_rate=args.inter,
        bridge_journals=args.bridges,
        seed=args.seed,
    )
    planted = generate_synthetic(spec)
    if args.out and args.out.endswith(".bin"):
        store.save(planted.matrix, args.out)
    else:
        _write_text(args.out, write_citation_csv(planted.matrix))


def cmd_pipeline(args):
    res = run_pipeline(args.config, out_dir=args.out, workers=args.threads)
    dec = res.manifest["decomposition"]
    print(
        f"{res.manifest['filter']['retained']} journals, "
        f"{len(res.tree.roots)} top-level clusters, {dec['final_clusters']} final clusters, "
        f"{dec['top']['articulation_points']} articulation points at r >= {dec['ladder'][0]:g}"
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scimap", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("ingest", help="parse a citation CSV into matrix.bin")
    a.add_argument("file")
    a.add_argument("--drop-ones", action="store_true", help="discard cells with count 1")
    a.add_argument("--min-citing", type=int, default=0, help="drop journals citing fewer times")
    a.add_argument("--min-count", type=int, default=1, help="drop cells below this count")
    a.add_argument("--transpose", action="store_true", help="analyse the cited dimension")
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_ingest)

    a = sub.add_parser("stats", help="database statistics of a matrix")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_stats)

    a = sub.add_parser("similarity", help="pairwise similarity of citing patterns")
    a.add_argument("matrix")
    a.add_argument("--measure", choices=("pearson", "cosine"), default="pearson")
    a.add_argument("--diagonal", choices=("include", "exclude_pair"), default="include")
    a.add_argument("--threads", type=int, default=None)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_similarity)

    a = sub.add_parser("graph", help="threshold a similarity matrix")
    a.add_argument("similarity")
    a.add_argument("--rmin", type=float, required=True)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_graph)

    a = sub.add_parser("components", help="bi-connected components report")
    a.add_argument("graph")
    a.add_argument("--min-size", type=int, default=None)
    a.add_argument("--json", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_components)

    a = sub.add_parser("decompose", help="threshold-ladder classification")
    a.add_argument("similarity")
    a.add_argument("--ladder", type=_floats, default=DEFAULT_LADDER)
    a.add_argument("--min-size", type=int, default=10)
    a.add_argument("--max-size", type=int, default=200)
    a.add_argument("--out", required=True)
    a.add_argument("--classification")
    a.set_defaults(func=cmd_decompose)

    a = sub.add_parser("layout", help="2D coordinates for a graph")
    a.add_argument("graph")
    a.add_argument("--algo", choices=("kk", "fr", "auto"), default="auto")
    a.add_argument("--seed", type=int, default=1)
    a.add_argument("--iters", type=int, default=None)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_layout)

    a = sub.add_parser("render", help="draw a laid-out graph as SVG")
    a.add_argument("graph")
    a.add_argument("layout")
    a.add_argument("--partition", help="Pajek .clu file for vertex colours")
    a.add_argument("--highlight-articulation", action="store_true")
    a.add_argument("--min-size", type=int, default=3)
    a.add_argument("--radius", type=float, default=4.0)
    a.add_argument("--labels", action="store_true")
    a.add_argument("--out", default="-")
    a.set_defaults(func=cmd_render)

    a = sub.add_parser("export-pajek", help="write a matrix or graph as Pajek .net")
    a.add_argument("input")
    a.add_argument("--out", default="-")
    a.add_argument("--classification", help="classification CSV for --clu")
    a.add_argument("--clu", help="also write top-level clusters as a .clu partition")
    a.set_defaults(func=cmd_export_pajek)

    a = sub.add_parser("synth", help="generate a planted-block citation matrix")
    a.add_argument("--blocks", type=_ints, default=(15, 15, 15))
    a.add_argument("--intra", type=float, default=50.0)
    a.add_argument("--inter", type=float, default=0.0)
    a.add_argument("--bridges", type=int, default=2)
    a.add_argument("--seed", type=int, default=1)
    a.add_argument("--out", default="-")
    a.set_defaults(func=cmd_synth)

    a = sub.add_parser("pipeline", help="run the whole analysis from a config file")
    a.add_argument("--config", required=True)
    a.add_argument("--out", default="scimap-out")
    a.add_argument("--threads", type=int, default=None)
    a.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        args.func(args)
    except ScimapError as exc:
        print(f"scimap: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"scimap: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
