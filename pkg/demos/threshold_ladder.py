"""
Splitting oversized clusters with a threshold ladder
====================================================

Journal groups are often nested: two specialties that cite each other
merge into one large component at a moderate correlation and separate
only at a stricter one.  The ladder re-cuts every component above
``max_component_size`` at the next, higher threshold.
"""

import numpy as np

from scimap import CitationMatrix, articulation_report, classify, decompose, pearson_similarity

# four sub-fields of 15 journals; fields 1+2 and 3+4 cite each other too
rng = np.random.default_rng(0)
field = np.repeat(np.arange(4), 15)
same = field[:, None] == field[None, :]
sibling = (field[:, None] // 2 == field[None, :] // 2) & ~same
counts = rng.poisson(np.where(same, 100, np.where(sibling, 65, 0)))

labels = [f"F{f + 1}-{k:02d}" for f in range(4) for k in range(15)]
rows, cols = np.nonzero(counts)
m = CitationMatrix.from_entries(labels, {(int(i), int(j)): int(counts[i, j]) for i, j in zip(rows, cols)})

s = pearson_similarity(m)
tree = decompose(s, ladder=[0.8, 0.9], min_size=10, max_component_size=20)

for node in tree.walk():
    indent = "  " * node.path.count(".")
    print(f"{indent}{node.path}  r>={node.threshold:g}  {node.size} journals  [{node.status}]")

print("articulation journals at 0.8:", articulation_report(tree, 0.8))

# first lines of the classification table
print("\n".join(classify(tree).to_csv().splitlines()[:6]))
