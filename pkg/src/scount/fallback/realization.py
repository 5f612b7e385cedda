"""Edge lengths and the gauge-fixed polynomial system of sphere realizations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Edge, Graph
from ..rigidity import is_minimally_rigid
from .polysys import QuadraticSystem


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeLengthAssignment:
    """Squared edge lengths ``lam[e]`` in (0, 4) and the seed that drew them."""
    lengths: dict[Edge, float]
    seed: int | None = None

    def inner(self, e: Edge) -> float:
        """Inner product of the endpoints on the unit sphere, ``1 - lam / 2``."""
        return 1.0 - self.lengths[e] / 2.0


def sample_lengths(g: Graph, seed=None, interval: tuple[float, float] = (0.5, 3.5)) -> EdgeLengthAssignment:
    lo, hi = interval
    if not (0 < lo < hi < 4):
        raise ValueError("length interval must lie inside (0, 4)")
    rng = np.random.default_rng(seed)
    vals = rng.uniform(lo, hi, size=len(g.edges))
    return EdgeLengthAssignment(dict(zip(g.sorted_edges(), map(float, vals))), seed)


@dataclass
class RealizationSystem:
    """Polynomial system for realizations of a graph on the complex sphere.

    ``gauge = (p, q)``: vertex ``p`` sits at (0, 0, 1) and vertex ``q`` in the
    plane y = 0.  ``coords[v]`` lists the variable index of x, y, z of ``v``
    (``None`` where a coordinate is pinned).
    """
    graph: Graph
    lengths: EdgeLengthAssignment
    gauge: tuple[int, int]
    polys: QuadraticSystem
    coords: dict[int, tuple[int | None, int | None, int | None]]

    @property
    def n_unknowns(self) -> int:
        return self.polys.n_vars

    @property
    def n_equations(self) -> int:
        return self.polys.n_eqs

    def bezout_number(self) -> int:
        return self.polys.total_degree()

    def vertex_groups(self) -> list[list[int]]:
        """Variable indices grouped by vertex (the multi-homogeneous structure)."""
        return [[i for i in self.coords[v] if i is not None] for v in sorted(self.coords)]

    def symmetry_signs(self) -> np.ndarray:
        """Diagonal of the residual half-turn about the z-axis: (x, y, z) -> (-x, -y, z)."""
        s = np.ones(self.polys.n_vars)
        for xyz in self.coords.values():
            for i in xyz[:2]:
                if i is not None:
                    s[i] = -1
        return s

    def points(self, sol: np.ndarray) -> np.ndarray:
        """Vertex positions ``(n, 3)`` of one solution vector."""
        P = np.zeros((self.graph.n, 3), dtype=complex)
        P[self.gauge[0]] = (0, 0, 1)
        for v, xyz in self.coords.items():
            for k, i in enumerate(xyz):
                if i is not None:
                    P[v, k] = sol[i]
        return P


def choose_gauge(g: Graph) -> tuple[int, int]:
    """Gauge edge: ``p`` of maximal degree, ``q`` its neighbour of maximal degree."""
    deg = [g.degree(v) for v in g.vertices]
    p = max(g.vertices, key=lambda v: (deg[v], -v))
    nbrs = [v for v in g.vertices if g.has_edge(p, v)]
    q = max(nbrs, key=lambda v: (deg[v], -v))
    return p, q


def build_system(g: Graph, lengths: EdgeLengthAssignment, gauge: tuple[int, int] | None = None) -> RealizationSystem:
    if not is_minimally_rigid(g):
        raise RealizationError("realization system requires a minimally rigid graph")
    p, q = gauge if gauge is not None else choose_gauge(g)
    if not g.has_edge(p, q):
        raise RealizationError(f"gauge pair ({p}, {q}) is not an edge")
    coords: dict[int, tuple] = {}
    names = []
    for v in g.vertices:
        if v == p:
            continue
        base = len(names)
        if v == q:
            coords[v] = (base, None, base + 1)
            names += [f"x{v}", f"z{v}"]
        else:
            coords[v] = (base, base + 1, base + 2)
            names += [f"x{v}", f"y{v}", f"z{v}"]
    eqs = []
    for v in sorted(coords):
        eq = {(i, i): 1.0 for i in coords[v] if i is not None}
        eq[(-1, -1)] = -1.0
        eqs.append(eq)
    for e in g.sorted_edges():
        u, v = e
        c = lengths.inner(e)
        if p in e:
            w = v if u == p else u
            eqs.append({(-1, coords[w][2]): 1.0, (-1, -1): -c})
            continue
        eq = {(-1, -1): -c}
        for a, b in zip(coords[u], coords[v]):
            if a is not None and b is not None:
                eq[(a, b)] = 1.0
        eqs.append(eq)
    polys = QuadraticSystem(len(names), eqs, names)
    if not (polys.n_vars == polys.n_eqs == 3 * g.n - 4):
        raise RealizationError("gauge accounting failed")  # cannot happen for Laman graphs
    return RealizationSystem(g, lengths, (p, q), polys, coords)
