"""Enumeration of calligraphic splits."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .calligraph import MarkedCalligraph, is_calligraph
from .graph import Edge, Graph
from .rigidity import is_minimally_rigid


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class SplitCandidate:
    """Two calligraphs sharing exactly the base edge and the apex.

    ``left``/``right`` are relabeled to ``0..k-1``; ``left_vertices[i]`` is
    the original label of vertex ``i`` of ``left`` (likewise for the right).
    ``base`` and ``apex`` use the original labels.
    """
    left: MarkedCalligraph
    right: MarkedCalligraph
    base: tuple[int, int]
    apex: int
    left_vertices: tuple[int, ...]
    right_vertices: tuple[int, ...]

    @property
    def shared_base(self) -> tuple[int, int]:
        return self.base

    @property
    def shared_apex(self) -> int:
        return self.apex

    def sizes(self) -> tuple[int, int]:
        return self.left.n, self.right.n

    def side_edges(self, side: str) -> set[Edge]:
        h, verts = (self.left, self.left_vertices) if side == "left" else (self.right, self.right_vertices)
        return {tuple(sorted((verts[a], verts[b]))) for a, b in h.graph.edges}

    def to_json(self) -> dict:
        return {
            "base": list(self.base),
            "apex": self.apex,
            "left": {"vertices": list(self.left_vertices), "edges": sorted(map(list, self.side_edges("left")))},
            "right": {"vertices": list(self.right_vertices), "edges": sorted(map(list, self.side_edges("right")))},
        }


def _mark(g: Graph, verts: set[int], edges: set[Edge], base, apex):
    sub, old = g.subgraph(verts, edges)
    idx = {v: i for i, v in enumerate(old)}
    return sub, (idx[base[0]], idx[base[1]]), idx[apex], tuple(old)


def enumerate_splits(g: Graph, min_side: int = 3, limit: int = 2 ** 20) -> Iterator[SplitCandidate]:
    """Yield every calligraphic split of ``g``, each unordered pair once.

    Sides with fewer than ``min_side`` vertices are skipped before
    validation.  ``limit`` caps the number of assignments tried per anchor.
    """
    if g.n < 4:
        raise SplitError("split search needs at least 4 vertices")
    if not g.is_connected():
        raise SplitError("split search needs a connected graph")
    adj = g.adjacency()
    seen = set()
    for u, v in g.sorted_edges():
        for w in range(g.n):
            if w in (u, v):
                continue
            triple = {u, v, w}
            comps = g.components(removed=triple)
            loose = [e for e in ((min(u, w), max(u, w)), (min(v, w), max(v, w))) if e in g.edges]
            total = 2 ** len(comps) * 2 ** len(loose)
            if total > limit:
                raise SplitError(f"split enumeration for anchor ({u},{v};{w}) needs {total} > {limit} assignments")
            comp_edges = []
            for comp in comps:
                cs = set(comp)
                comp_edges.append({tuple(sorted((x, y))) for x in comp for y in adj[x] if y in cs or y in triple})
            sizes = [len(c) for c in comps]
            nedges = [len(e) for e in comp_edges]
            for sides in product((0, 1), repeat=len(comps)):
                nv = [3, 3]
                ne = [1, 1]
                for s, k, m in zip(sides, sizes, nedges):
                    nv[s] += k
                    ne[s] += m
                if min(nv) < min_side:
                    continue
                for loose_sides in product((0, 1), repeat=len(loose)):
                    ne2 = list(ne)
                    for s in loose_sides:
                        ne2[s] += 1
                    if ne2[0] != 2 * nv[0] - 4 or ne2[1] != 2 * nv[1] - 4:
                        continue
                    verts = [set(triple), set(triple)]
                    edges = [{(u, v)}, {(u, v)}]
                    for s, comp, ce in zip(sides, comps, comp_edges):
                        verts[s].update(comp)
                        edges[s].update(ce)
                    for s, e in zip(loose_sides, loose):
                        edges[s].add(e)
                    ident = frozenset((frozenset(edges[0]), frozenset(edges[1]))), (u, v), w
                    if ident in seen:
                        continue
                    marked = [_mark(g, verts[s], edges[s], (u, v), w) for s in (0, 1)]
                    if not all(is_calligraph(sub, b, a) for sub, b, a, _ in marked):
                        continue
                    seen.add(ident)
                    (g0, b0, a0, v0), (g1, b1, a1, v1) = marked
                    yield SplitCandidate(MarkedCalligraph(g0, b0, a0), MarkedCalligraph(g1, b1, a1),
                                         (u, v), w, v0, v1)


def _split_rank(s: SplitCandidate):
    k = sorted([s.left.key().key, s.right.key().key])
    return abs(s.left.n - s.right.n), k[0], k[1], s.base, s.apex, sorted(s.left_vertices)


def nontrivial_splits(g: Graph, min_side: int = 5, limit: int = 2 ** 20) -> list[SplitCandidate]:
    """All splits whose sides both have at least ``min_side`` vertices."""
    if g.n < 2 * min_side - 3:
        return []
    return list(enumerate_splits(g, min_side=min_side, limit=limit))


def find_nontrivial_split(g: Graph, min_side: int = 5, limit: int = 2 ** 20) -> SplitCandidate | None:
    """Most balanced non-trivial calligraphic split, or ``None``.

    Ties are broken by the canonical keys of the two sides so that the
    choice does not depend on vertex labels.
    """
    if not is_minimally_rigid(g):
        raise SplitError("graph is not minimally rigid")
    splits = nontrivial_splits(g, min_side, limit)
    if not splits:
        return None
    return min(splits, key=_split_rank)
