"""
Two bi-components sharing one journal
=====================================

The smallest picture of what the decomposition looks for: two triangles
of journals that touch in a single vertex.  Deleting that vertex splits
the network, so it is an articulation point, and each triangle is a
bi-connected component on its own.
"""

from scimap import SimilarityGraph, bicomponents, layout_kamada_kawai, render_svg

g = SimilarityGraph.unweighted(
    ["Acta A", "Acta B", "Bridge J", "Chem C", "Chem D"],
    [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
)

d = bicomponents(g)
for comp in d.components:
    print("component:", [g.labels[v] for v in comp])
print("articulation points:", [g.labels[v] for v in sorted(d.articulation_points)])

# draw it with the articulation point in white, as on the printed maps
layout = layout_kamada_kawai(g)
partition = [1, 1, 0, 2, 2]
svg = render_svg(g, layout, partition, highlight=sorted(d.articulation_points), labels=True)
with open("butterfly.svg", "w", encoding="utf-8") as fh:
    fh.write(svg)
print("wrote butterfly.svg")
