"""Journal clusters and maps from aggregated citation matrices.

Pipeline: citation matrix -> Pearson (or cosine) similarity of citing
patterns -> threshold graph -> bi-connected components and articulation
points -> threshold-ladder hierarchy -> layouts and SVG maps.
"""

__version__ = "0.1.0"

from .errors import InputError, InvariantError, PipelineError, ScimapError
from .ingest import (
    CitationMatrix,
    JournalId,
    MatrixStats,
    apply_citation_threshold,
    filter_low_activity,
    matrix_stats,
    parse_citation_csv,
    read_citation_csv,
    transpose,
    write_citation_csv,
)
from .similarity import (
    SimilarityGraph,
    SimilarityMatrix,
    cosine_similarity,
    degree_summary,
    pearson_similarity,
    threshold_graph,
)
from .graph import (
    BicomponentDecomposition,
    ComponentStats,
    articulation_oracle,
    bicomponents,
    connected_components,
    extract_subgraph,
    filter_components,
    size_distribution,
)
from .decompose import ClusterTree, Classification, articulation_report, classify, decompose
from .layout import Layout, LayoutParams, layout_fruchterman_reingold, layout_graph, layout_kamada_kawai, stress
from .pajek import read_pajek_clu, read_pajek_net, write_pajek_clu, write_pajek_net
from .render import render_svg
from .synth import SyntheticSpec, generate_synthetic
from .pipeline import run_pipeline
