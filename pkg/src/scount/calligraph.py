"""Marked calligraphs, the three basic gadgets and graph augmentation."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, canonical_key, new_graph
from .rigidity import is_rigid_spanning


class CalligraphError(ValueError):
    pass


class EdgeCountError(CalligraphError):
    pass


class MissingBaseEdgeError(CalligraphError):
    pass


class ApexError(CalligraphError):
    pass


class NotRigidError(CalligraphError):
    pass


@dataclass(frozen=True)
class MarkedCalligraph:
    """A graph with an ordered base edge and an apex vertex.

    ``base[0]`` and ``base[1]`` carry the second and third class entries
    respectively, so swapping them exchanges ``b`` and ``c``.
    """
    graph: Graph
    base: tuple[int, int]
    apex: int

    @property
    def n(self) -> int:
        return self.graph.n

    def mirrored(self) -> "MarkedCalligraph":
        return MarkedCalligraph(self.graph, (self.base[1], self.base[0]), self.apex)

    def key(self):
        return canonical_key(self.graph, self.apex, self.base)

    def marks(self) -> dict:
        return {"edge": list(self.base), "apex": self.apex}


def validate_calligraph(g: Graph, base, apex: int) -> MarkedCalligraph:
    u, v = int(base[0]), int(base[1])
    if not (0 <= apex < g.n):
        raise ApexError(f"apex {apex} is not a vertex")
    if apex in (u, v):
        raise ApexError(f"apex {apex} coincides with a base endpoint")
    if not g.has_edge(u, v):
        raise MissingBaseEdgeError(f"base edge ({u}, {v}) is not in the graph")
    if len(g.edges) != 2 * g.n - 4:
        raise EdgeCountError(f"edge-count mismatch: {len(g.edges)} edges, expected {2 * g.n - 4}")
    if not (_rigid_with(g, apex, u) or _rigid_with(g, apex, v)):
        raise NotRigidError("adding an apex edge to either base vertex does not give a rigid graph")
    return MarkedCalligraph(g, (u, v), apex)


def is_calligraph(g: Graph, base, apex: int) -> bool:
    try:
        validate_calligraph(g, base, apex)
    except CalligraphError:
        return False
    return True


def _rigid_with(g: Graph, a: int, b: int) -> bool:
    if g.has_edge(a, b):
        return False
    return is_rigid_spanning(g.with_edges([(a, b)]))


def basic_L() -> MarkedCalligraph:
    return MarkedCalligraph(new_graph(3, [(1, 2), (0, 1)]), (1, 2), 0)


def basic_R() -> MarkedCalligraph:
    return MarkedCalligraph(new_graph(3, [(1, 2), (0, 2)]), (1, 2), 0)


def basic_C() -> MarkedCalligraph:
    return MarkedCalligraph(new_graph(4, [(1, 2), (0, 3), (1, 3), (2, 3)]), (1, 2), 0)


def augment(h: MarkedCalligraph, gadget: str) -> Graph:
    """Glue a basic calligraph onto ``h`` along its base edge and apex.

    ``L`` adds the edge apex-base[0], ``R`` adds apex-base[1], and ``C`` adds
    a new vertex joined to the apex and both base vertices.
    """
    u, v = h.base
    if gadget == "L":
        return h.graph.with_edges([(h.apex, u)])
    if gadget == "R":
        return h.graph.with_edges([(h.apex, v)])
    if gadget == "C":
        return h.graph.with_vertex([h.apex, u, v])
    raise ValueError(f"unknown gadget {gadget!r}")
