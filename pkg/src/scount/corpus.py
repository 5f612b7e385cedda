"""Small graph corpora: Laman graphs by Henneberg moves, named examples."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .graph import Graph, canonical_key, new_graph
from .rigidity import is_minimally_rigid


@lru_cache(maxsize=None)
def laman_graphs(n: int) -> tuple[Graph, ...]:
    """All minimally rigid graphs on ``n`` vertices up to isomorphism.

    Every Laman graph arises from a smaller one by a Henneberg move: a new
    vertex joined to two old ones, or joined to three old ones after
    deleting an edge between two of them.
    """
    if n < 2:
        raise ValueError("Laman graphs need at least two vertices")
    if n == 2:
        return (new_graph(2, [(0, 1)]),)
    found: dict[bytes, Graph] = {}

    def add(g: Graph):
        k = canonical_key(g).key
        if k not in found:
            found[k] = g

    for g in laman_graphs(n - 1):
        for u, v in combinations(range(n - 1), 2):
            add(g.with_vertex([u, v]))
        for u, v in g.sorted_edges():
            rest = Graph(g.n, g.edges - {(u, v)})
            for w in range(n - 1):
                if w not in (u, v):
                    add(rest.with_vertex([u, v, w]))
    out = tuple(found[k] for k in sorted(found))
    assert all(is_minimally_rigid(g) for g in out)
    return out


def k4_minus_edge() -> Graph:
    return new_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


def double_centred() -> Graph:
    """Two centred gadgets glued along base and apex: 5 vertices, 7 edges."""
    return new_graph(5, [(1, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)])


def triangular_prism() -> Graph:
    return new_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


def k33() -> Graph:
    return new_graph(6, [(u, v) for u in range(3) for v in range(3, 6)])


# 17 vertices, 31 edges; splits into two 10-vertex calligraphs at base (1, 2), apex 0.
SEVENTEEN_EDGES = [
    (3, 4), (3, 0), (3, 6), (4, 6), (4, 7), (5, 0), (5, 7), (5, 8), (6, 1), (6, 0), (0, 9), (7, 2), (7, 8),
    (2, 9), (9, 8), (0, 15), (0, 16), (1, 12), (1, 10), (1, 11), (2, 12), (2, 11), (10, 15), (10, 13),
    (11, 14), (12, 13), (13, 14), (14, 15), (14, 16), (16, 15), (1, 2),
]


def seventeen_vertex_graph() -> Graph:
    return new_graph(17, SEVENTEEN_EDGES)
