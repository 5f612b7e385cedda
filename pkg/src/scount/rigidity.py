"""Laman rigidity via the (2,3)-pebble game, with a brute-force oracle."""
from __future__ import annotations

from itertools import combinations

from .graph import Graph


class RigidityError(ValueError):
    pass


def _require_nontrivial(g: Graph) -> None:
    if g.n < 2:
        raise RigidityError("rigidity is undefined for trivial graphs (fewer than 2 vertices)")


def pebble_game(g: Graph, k: int = 2, l: int = 3, order=None) -> list[tuple[int, int]]:
    """Run the (k, l)-pebble game and return the accepted (independent) edges.

    Edges are inserted in ``order`` (default: sorted).  An edge ``uv`` is
    accepted when ``l + 1`` pebbles can be gathered on ``u`` and ``v``.
    """
    pebbles = [k] * g.n
    out: list[set[int]] = [set() for _ in range(g.n)]

    def fetch(root: int, keep: int) -> bool:
        # DFS along pebble directions for a free pebble away from root/keep
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in out[x]:
                if y in parent or y == keep:
                    continue
                parent[y] = x
                if pebbles[y] > 0:
                    pebbles[y] -= 1
                    pebbles[root] += 1
                    while parent[y] is not None:
                        px = parent[y]
                        out[px].discard(y)
                        out[y].add(px)
                        y = px
                    return True
                stack.append(y)
        return False

    accepted = []
    for u, v in (order if order is not None else g.sorted_edges()):
        while pebbles[u] < k and fetch(u, v):
            pass
        while pebbles[v] < k and fetch(v, u):
            pass
        if pebbles[u] + pebbles[v] >= l + 1:
            if pebbles[u] > 0:
                pebbles[u] -= 1
                out[u].add(v)
            else:
                pebbles[v] -= 1
                out[v].add(u)
            accepted.append((u, v))
    return accepted


def rigidity_rank(g: Graph) -> int:
    """Size of a maximal (2,3)-sparse edge subset."""
    return len(pebble_game(g))


def is_tight_2_3(g: Graph) -> bool:
    _require_nontrivial(g)
    if len(g.edges) != 2 * g.n - 3:
        return False
    return rigidity_rank(g) == len(g.edges)


def is_minimally_rigid(g: Graph) -> bool:
    """Laman's characterization: (2,3)-tight."""
    return is_tight_2_3(g)


def is_rigid_spanning(g: Graph) -> bool:
    """True iff ``g`` contains a spanning minimally rigid subgraph."""
    _require_nontrivial(g)
    return rigidity_rank(g) == 2 * g.n - 3


def brute_force_laman(g: Graph, max_vertices: int = 8) -> bool:
    """Check Laman's counts over every vertex subset (exponential)."""
    _require_nontrivial(g)
    if g.n > max_vertices:
        raise RigidityError(f"brute force refused for {g.n} > {max_vertices} vertices")
    if len(g.edges) != 2 * g.n - 3:
        return False
    adj = g.adjacency()
    for size in range(2, g.n):
        for sub in combinations(range(g.n), size):
            s = set(sub)
            induced = sum(1 for x in sub for y in adj[x] if y in s) // 2
            if induced > 2 * size - 3:
                return False
    return True
