"""Minimal rigidity, calligraphs and splits on small graphs."""
from scount.calligraph import is_calligraph
from scount.corpus import laman_graphs, seventeen_vertex_graph
from scount.rigidity import brute_force_laman, is_minimally_rigid
from scount.splits import find_nontrivial_split

# How many minimally rigid graphs there are, up to isomorphism
for n in range(2, 8):
    print(n, "vertices:", len(laman_graphs(n)), "minimally rigid graphs")

# The pebble game agrees with the counting definition
g = laman_graphs(6)[5]
print("pebble game:", is_minimally_rigid(g), " brute force:", brute_force_laman(g))

# Deleting an edge u-v leaves a calligraph with apex u and any base edge at v
u, v = g.sorted_edges()[0]
rest = g.subgraph(range(g.n), [e for e in g.sorted_edges() if e != (u, v)])[0]
x = next(y for y in g.adjacency()[v] if y != u)
print("calligraph after deleting", (u, v), ":", is_calligraph(rest, (v, x), u))

# The 17-vertex graph splits into two 10-vertex calligraphs
big = seventeen_vertex_graph()
split = find_nontrivial_split(big)
print("split sizes:", split.sizes(), " base:", split.base, " apex:", split.apex)
print("left is a calligraph:", is_calligraph(split.left.graph, split.left.base, split.left.apex))
