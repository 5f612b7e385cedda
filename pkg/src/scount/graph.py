"""Simple undirected graphs, canonical keys and (de)serialization.

Graphs are immutable and always carry the vertex set ``0..n-1``.  Edges are
stored as sorted pairs ``(u, v)`` with ``u < v``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for invalid graph data (loops, duplicates, bad endpoints)."""


class ParseError(ValueError):
    """Malformed serialized graph; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]

    @property
    def vertex_count(self) -> int:
        return self.n

    def __len__(self) -> int:
        return self.n

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        """Return the graph with ``extra`` edges added (set union)."""
        edges = set(self.edges)
        for u, v in extra:
            _check_edge(self.n, u, v)
            edges.add(_norm(u, v))
        return Graph(self.n, frozenset(edges))

    def with_vertex(self, neighbours: Iterable[int]) -> "Graph":
        """Append a new vertex ``n`` joined to ``neighbours``."""
        new = self.n
        edges = set(self.edges)
        for u in neighbours:
            _check_edge(self.n + 1, u, new)
            edges.add(_norm(u, new))
        return Graph(self.n + 1, frozenset(edges))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under the vertex bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the vertices")
        return Graph(self.n, frozenset(_norm(perm[u], perm[v]) for u, v in self.edges))

    def subgraph(self, vertices: Iterable[int], edges: Iterable[Edge] | None = None):
        """Subgraph on ``vertices`` relabeled to ``0..k-1`` in sorted order.

        Uses the induced edges unless ``edges`` is given.  Returns the new
        graph and the list mapping new labels to old ones.
        """
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        if edges is None:
            edges = [e for e in self.edges if e[0] in index and e[1] in index]
        new_edges = frozenset(_norm(index[u], index[v]) for u, v in edges)
        return Graph(len(old), new_edges), old

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        """Connected components (sorted vertex lists) after deleting ``removed``."""
        gone = set(removed)
        adj = self.adjacency()
        seen = set(gone)
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def _check_edge(n: int, u: int, v: int) -> None:
    if u == v:
        raise GraphError(f"loop at vertex {u}: edge ({u}, {v})")
    for x in (u, v):
        if not (0 <= x < n):
            raise GraphError(f"endpoint out of range: edge ({u}, {v}) with {n} vertices")


def new_graph(vertex_count: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validate and build a :class:`Graph`.

    >>> new_graph(3, [(0, 1), (1, 2), (0, 2)])
    Graph(n=3, edges=[(0, 1), (0, 2), (1, 2)])
    """
    if vertex_count < 0:
        raise GraphError("vertex count must be non-negative")
    edges: set[Edge] = set()
    for pair in edge_list:
        if len(pair) != 2:
            raise GraphError(f"edge {tuple(pair)} is not a pair")
        u, v = int(pair[0]), int(pair[1])
        _check_edge(vertex_count, u, v)
        e = _norm(u, v)
        if e in edges:
            raise GraphError(f"duplicate edge ({u}, {v})")
        edges.add(e)
    return Graph(vertex_count, frozenset(edges))


# --- canonical form ---------------------------------------------------------


@dataclass(frozen=True)
class CanonicalKey:
    key: bytes
    swap: bool = False


def _refine(adj: list[set[int]], colors: list[int]) -> list[int]:
    """Iterate color refinement until stable; colors are ranks 0..k-1."""
    n = len(colors)
    ncolors = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == ncolors:
            return new
        colors, ncolors = new, len(ranks)


def canonical_labeling(g: Graph, initial: Sequence[int] | None = None) -> list[int]:
    """Return ``perm`` with ``perm[v]`` the canonical label of ``v``.

    Color refinement plus individualization; among all leaves of the search
    tree the labeling giving the lexicographically smallest edge list wins.
    ``initial`` is an isomorphism-invariant vertex coloring to respect.
    """
    adj = g.adjacency()
    start = list(initial) if initial is not None else [0] * g.n
    # rank the initial colors so only their order matters
    order = {c: i for i, c in enumerate(sorted(set(start)))}
    colors = _refine(adj, [order[c] for c in start])

    best: tuple[list[Edge], list[int]] | None = None
    auts: list[list[int]] = []

    def orbits(prefix: list[int]) -> list[int]:
        # orbits of the group generated by found automorphisms fixing ``prefix``
        parent = list(range(g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gam in auts:
            if all(gam[p] == p for p in prefix):
                for x, y in enumerate(gam):
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        return [find(x) for x in range(g.n)]

    def search(colors: list[int], prefix: list[int]) -> None:
        nonlocal best
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        cells = [c for c in sorted(counts) if counts[c] > 1]
        if not cells:
            cert = sorted(_norm(colors[u], colors[v]) for u, v in g.edges)
            if best is None or cert < best[0]:
                best = (cert, list(colors))
            elif cert == best[0]:
                inv = {lab: x for x, lab in enumerate(best[1])}
                auts.append([inv[colors[x]] for x in range(g.n)])
            return
        target = cells[0]
        done: list[int] = []
        for v in range(g.n):
            if colors[v] != target:
                continue
            if done:
                orb = orbits(prefix)
                if any(orb[v] == orb[u] for u in done):
                    continue  # an automorphism fixing the prefix maps an explored branch here
            done.append(v)
            # individualize v: it sorts just before the rest of its cell
            tweaked = [2 * c + (0 if (c == target and u == v) else 1) for u, c in enumerate(colors)]
            search(_refine(adj, tweaked), prefix + [v])

    search(colors, [])
    assert best is not None
    return best[1]


def canonical_key(g: Graph, apex: int | None = None,
                  base: tuple[int, int] | None = None) -> CanonicalKey:
    """Isomorphism-invariant key of ``g``.

    With ``apex`` and ``base`` given, the apex is pinned exactly and the base
    pair is pinned as a set; ``swap`` then tells whether the canonical labels
    of ``base[0]`` and ``base[1]`` come in reversed order.
    """
    if (apex is None) != (base is None):
        raise GraphError("apex and base must be pinned together")
    if apex is None:
        perm = canonical_labeling(g)
        head = b"U"
        swap = False
    else:
        pins = [apex, *base]
        for x in pins:
            if not (0 <= x < g.n):
                raise GraphError(f"pinned label {x} not in graph")
        if len(set(pins)) != 3:
            raise GraphError("apex and base endpoints must be distinct")
        init = [2] * g.n
        init[apex] = 0
        init[base[0]] = init[base[1]] = 1
        perm = canonical_labeling(g, init)
        head = b"P"
        swap = perm[base[0]] > perm[base[1]]
    body = b"".join(u.to_bytes(2, "big") + v.to_bytes(2, "big")
                    for u, v in sorted(_norm(perm[a], perm[b]) for a, b in g.edges))
    return CanonicalKey(head + g.n.to_bytes(2, "big") + body, swap)


def are_isomorphic_bruteforce(g: Graph, h: Graph) -> bool:
    """Exhaustive permutation check; only for tiny graphs (test oracle)."""
    from itertools import permutations

    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if sorted(g.degree(v) for v in g.vertices) != sorted(h.degree(v) for v in h.vertices):
        return False
    return any(g.relabel(p).edges == h.edges for p in permutations(range(g.n)))


# --- serialization ----------------------------------------------------------


def _g6_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise ParseError("empty graph6 string", 0)
    c = data[0]
    if c == 126:
        raise ParseError("graph6 strings with more than 62 vertices are not supported", 0)
    if not (63 <= c <= 125):
        raise ParseError(f"invalid graph6 size byte {c!r}", 0)
    return c - 63, 1


def parse_graph6(text: str | bytes) -> Graph:
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    shift = 0
    if data.startswith(b">>graph6<<"):
        shift = 10
        data = data[10:]
    data = data.rstrip(b"\r\n")
    n, pos = _g6_size(data)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ParseError(f"expected {need} data bytes for {n} vertices, got {len(body)}",
                         shift + pos + min(len(body), need))
    bits = []
    for i, c in enumerate(body):
        if not (63 <= c <= 126):
            raise ParseError(f"invalid graph6 data byte {c!r}", shift + pos + i)
        v = c - 63
        bits.extend((v >> k) & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits in graph6 data", shift + pos + need - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return new_graph(n, edges)


def to_graph6(g: Graph) -> str:
    if g.n > 62:
        raise GraphError("graph6 writer supports at most 62 vertices")
    bits = [1 if (i, j) in g.edges else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(63 + v))
    return "".join(out)


def parse_marked_graph(text: str, fmt: str = "json") -> tuple[Graph, dict | None]:
    """Parse a graph plus optional calligraph marks ``{"edge": [a, b], "apex": c}``."""
    if fmt == "graph6":
        return parse_graph6(text), None
    if fmt != "json":
        raise ValueError(f"unknown graph format {fmt!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise ParseError("JSON graph needs 'vertices' and 'edges'", 0)
    n, edges = doc["vertices"], doc["edges"]
    if not isinstance(n, int) or not isinstance(edges, list):
        raise ParseError("'vertices' must be an integer and 'edges' a list", 0)
    g = new_graph(n, edges)
    marks = doc.get("marks")
    if marks is not None:
        try:
            marks = {"edge": (int(marks["edge"][0]), int(marks["edge"][1])),
                     "apex": int(marks["apex"])}
        except (KeyError, TypeError, IndexError, ValueError):
            raise ParseError("'marks' must be {'edge': [a, b], 'apex': c}", 0) from None
    return g, marks


def parse_graph(text: str, fmt: str = "json") -> Graph:
    return parse_marked_graph(text, fmt)[0]


def serialize_graph(g: Graph, fmt: str = "json", marks: dict | None = None) -> str:
    if fmt == "graph6":
        if marks is not None:
            raise ValueError("graph6 cannot carry calligraph marks")
        return to_graph6(g)
    if fmt != "json":
        raise ValueError(f"unknown graph format {fmt!r}")
    doc: dict = {"vertices": g.n, "edges": [list(e) for e in g.sorted_edges()]}
    if marks is not None:
        doc["marks"] = {"edge": list(marks["edge"]), "apex": marks["apex"]}
    return json.dumps(doc)


def detect_format(text: str) -> str:
    return "json" if text.lstrip().startswith("{") else "graph6"


def complete_graph(n: int) -> Graph:
    return new_graph(n, combinations(range(n), 2))
