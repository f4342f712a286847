"""
Kamada-Kawai and Fruchterman-Reingold on one cluster
====================================================

Kamada-Kawai places vertices so that drawn distances follow shortest-path
distances; the stress it minimises is reported before and after.
Fruchterman-Reingold simulates springs and repulsion under a cooling
temperature; a callback can watch every step.
"""

import numpy as np

from scimap import (
    LayoutParams,
    generate_synthetic,
    layout_fruchterman_reingold,
    layout_kamada_kawai,
    pearson_similarity,
    render_svg,
    threshold_graph,
)

planted = generate_synthetic(blocks=(15, 15), bridge_journals=1, seed=2)
g = threshold_graph(pearson_similarity(planted.matrix), 0.8)

kk = layout_kamada_kawai(g, LayoutParams(seed=3))
print(f"Kamada-Kawai stress {kk.initial_stress:.3f} -> {kk.final_stress:.3f} in {kk.iterations_used} moves")

largest = []


def watch(it, old, new, temp):
    largest.append(float(np.hypot(*(new - old).T).max()))


fr = layout_fruchterman_reingold(g, LayoutParams(seed=3), callback=watch)
print(f"Fruchterman-Reingold: largest move {largest[0]:.4f} at the start, {largest[-1]:.2e} at the end")

for name, lay in (("kk", kk), ("fr", fr)):
    part = [1 if v in planted.blocks[0] else 2 for v in range(g.n)]
    with open(f"layout-{name}.svg", "w", encoding="utf-8") as fh:
        fh.write(render_svg(g, lay, part, highlight=planted.bridges))
    print(f"wrote layout-{name}.svg")
