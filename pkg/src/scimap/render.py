"""Static SVG maps of laid-out similarity graphs."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .layout import Layout
from .similarity import SimilarityGraph

__all__ = ["PALETTE", "HIGHLIGHT_FILL", "render_svg"]

# no white in the palette: white is reserved for highlighted vertices
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
UNASSIGNED = "#c7c7c7"
HIGHLIGHT_FILL = "#ffffff"
HIGHLIGHT_STROKE = "#000000"


def _color(cluster) -> str:
    if cluster is None or cluster <= 0:
        return UNASSIGNED
    return PALETTE[(cluster - 1) % len(PALETTE)]


def render_svg(
    g: SimilarityGraph,
    layout: Layout,
    partition=None,
    vertex_radius: float = 4.0,
    highlight=(),
    labels: bool = False,
    size: int = 800,
    margin: int = 24,
    title: str | None = None,
) -> str:
    """Draw ``g`` at ``layout`` as an SVG document.

    Edges are drawn first as ``<line>`` elements, then one ``<circle>`` per
    vertex coloured by ``partition`` (cluster ids, 0 = unassigned), then
    optional ``<text>`` labels.  Vertices in ``highlight`` are filled white
    with a black outline.  Output depends only on the inputs.
    """
    if layout.n != g.n or tuple(layout.labels) != tuple(g.labels):
        missing = set(g.labels) - set(layout.labels)
        raise ValueError(f"layout does not cover the graph (missing {sorted(missing)[:5]})")
    if partition is not None and len(partition) != g.n:
        raise ValueError("partition length does not match the graph")
    coords = np.asarray(layout.coords, dtype=np.float64)
    if coords.shape != (g.n, 2) or not np.isfinite(coords).all():
        raise ValueError("layout has missing or non-finite coordinates")
    highlight = set(int(v) for v in highlight)
    span = size - 2 * margin
    px = margin + coords[:, 0] * span
    py = margin + (1.0 - coords[:, 1]) * span

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g class="edges" stroke="#9a9a9a" stroke-width="0.6" stroke-opacity="0.7">')
    for u, v in g.edges.tolist():
        out.append(f'<line x1="{px[u]:.2f}" y1="{py[u]:.2f}" x2="{px[v]:.2f}" y2="{py[v]:.2f}"/>')
    out.append("</g>")
    out.append('<g class="vertices" stroke-width="0.8">')
    for v in range(g.n):
        if v in highlight:
            fill, stroke = HIGHLIGHT_FILL, HIGHLIGHT_STROKE
        else:
            fill, stroke = _color(partition[v] if partition is not None else 1), "#333333"
        out.append(
            f'<circle cx="{px[v]:.2f}" cy="{py[v]:.2f}" r="{vertex_radius:g}" '
            f'fill="{fill}" stroke="{stroke}"><title>{escape(g.labels[v])}</title></circle>'
        )
    out.append("</g>")
    if labels:
        out.append('<g class="labels" font-family="sans-serif" font-size="9" fill="#222222">')
        for v in range(g.n):
            out.append(
                f'<text x="{px[v] + vertex_radius + 1:.2f}" y="{py[v] + 3:.2f}">'
                f"{escape(g.labels[v])}</text>"
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

