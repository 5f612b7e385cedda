"""Realization counts by calligraphic splits, classes of calligraphs, memoization.

A minimally rigid graph with a non-trivial split ``(G1, G2)`` has count
``quad_form([G1], [G2])``.  The class of a calligraph ``H`` is recovered
from the counts of the three graphs obtained by gluing the basic gadgets
onto it, which re-enter the counter; graphs with no non-trivial split go
to the numerical fallback.
"""
from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cache import CLASS, COUNT, CacheStore
from .calligraph import MarkedCalligraph, augment, basic_C, basic_L, basic_R
from .fallback.counter import FallbackConfig, run_fallback
from .graph import Graph, canonical_key, canonical_labeling
from .rigidity import is_minimally_rigid
from .splits import SplitCandidate, find_nontrivial_split

log = logging.getLogger(__name__)

GADGETS = ("L", "R", "C")


class EngineError(RuntimeError):
    pass


class NotMinimallyRigidError(ValueError):
    pass


class ClassIntegralityError(EngineError):
    pass


class DepthLimitError(EngineError):
    pass


@dataclass(frozen=True)
class S2Class:
    a: int
    b: int
    c: int

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def swapped(self) -> "S2Class":
        return S2Class(self.a, self.c, self.b)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


def _triple(x) -> tuple[int, int, int]:
    a, b, c = x
    return int(a), int(b), int(c)


def quad_form(x, y) -> int:
    """``2 (a1 a2 - b1 b2 - c1 c2)``."""
    a1, b1, c1 = _triple(x)
    a2, b2, c2 = _triple(y)
    return 2 * (a1 * a2 - b1 * b2 - c1 * c2)


# The form is 0.5 * x^T A y; O is an isometry of it swapping the two
# possible choices of class for the centred gadget.
O = np.array([[3, -2, -2], [2, -1, -2], [2, -2, -1]], dtype=np.int64)
A = np.diag(np.array([2, -2, -2], dtype=np.int64))


def transform(x) -> S2Class:
    return S2Class(*(int(v) for v in O @ np.array(_triple(x), dtype=np.int64)))


BASE_CLASSES = {"L": S2Class(1, 1, 0), "R": S2Class(1, 0, 1), "C": S2Class(2, 0, 0)}


def solve_class(r_L: int, r_R: int, r_C: int) -> S2Class:
    """Solve ``2(a-b) = r_L``, ``2(a-c) = r_R``, ``4a = r_C`` over the integers."""
    if r_C % 4 or r_L % 2 or r_R % 2:
        raise ClassIntegralityError(
            f"class integrality violated: r_L={r_L}, r_R={r_R}, r_C={r_C} has no integral solution")
    a = r_C // 4
    return S2Class(a, a - r_L // 2, a - r_R // 2)


def _builtin_classes() -> dict[bytes, S2Class]:
    table = {}
    for h, cls in ((basic_L(), BASE_CLASSES["L"]), (basic_C(), BASE_CLASSES["C"])):
        k = h.key()
        table[k.key] = cls.swapped() if k.swap else cls
    return table


_BUILTIN = _builtin_classes()


def base_class(h: MarkedCalligraph) -> S2Class | None:
    """Class of ``h`` if it is one of the basic gadgets (up to marked isomorphism)."""
    k = h.key()
    cls = _BUILTIN.get(k.key)
    if cls is None:
        return None
    return cls.swapped() if k.swap else cls


@dataclass
class EngineConfig:
    fallback: FallbackConfig = field(default_factory=FallbackConfig)
    min_side: int = 5
    max_depth: int = 64
    split_limit: int = 2 ** 20
    jobs: int = 1
    check_monotone: bool = True


@dataclass
class CountResult:
    count: int
    method: str  # "split" | "fallback" | "cache"
    trace: dict


@dataclass
class ClassResult:
    cls: S2Class
    equations: list[dict]
    trace: dict


def _graph_json(g: Graph) -> dict:
    return {"vertices": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def canonical_form(g: Graph) -> Graph:
    return g.relabel(canonical_labeling(g))


def _derived_seed(master: int, key: bytes) -> int:
    digest = hashlib.sha256(master.to_bytes(8, "big", signed=True) + key).digest()
    return int.from_bytes(digest[:8], "big")


class Engine:
    """Recursive counter with a shared cache.

    Fallback runs use the canonical relabeling of the graph and a seed derived
    from the configured seed and the canonical key, so results do not depend
    on input labels, call order or thread scheduling.
    """

    def __init__(self, cfg: EngineConfig | None = None, cache: CacheStore | None = None):
        self.cfg = cfg or EngineConfig()
        self.cache = cache if cache is not None else CacheStore()

    # -- counts -----------------------------------------------------------------

    def count(self, g: Graph) -> CountResult:
        return self._count(g, 0, None)

    def count_with_split(self, g: Graph, split: SplitCandidate) -> CountResult:
        """Count through the given split, bypassing the cache for ``g`` itself."""
        if not is_minimally_rigid(g):
            raise NotMinimallyRigidError("graph is not minimally rigid")
        return self._split_count(g, split, 0)

    def _enter(self, g: Graph, depth: int, bound: int | None):
        if depth > self.cfg.max_depth:
            raise DepthLimitError(f"recursion depth exceeded {self.cfg.max_depth}")
        if self.cfg.check_monotone and bound is not None and g.n >= bound:
            raise EngineError(f"recursion did not shrink: {g.n} vertices under a {bound}-vertex parent")

    def _count(self, g: Graph, depth: int, bound: int | None) -> CountResult:
        self._enter(g, depth, bound)
        if g.n < 2 or not is_minimally_rigid(g):
            raise NotMinimallyRigidError("graph is not minimally rigid")
        key = canonical_key(g)
        hit = self.cache.get(COUNT, key)
        if hit is not None:
            return CountResult(hit.value, "cache", {"kind": "count", "graph": _graph_json(g), "count": hit.value,
                                                    "method": "cache", "provenance": hit.provenance})
        split = None
        if g.n >= 2 * self.cfg.min_side - 3:
            split = find_nontrivial_split(g, self.cfg.min_side, self.cfg.split_limit)
        if split is not None:
            res = self._split_count(g, split, depth)
            prov = {"method": "split", "sizes": list(split.sizes())}
        else:
            res = self._fallback_count(g, key)
            prov = {"method": "fallback", "certificate": res.trace["certificate"]}
        self.cache.put(COUNT, key, res.count, prov)
        return res

    def _split_count(self, g: Graph, split: SplitCandidate, depth: int) -> CountResult:
        left = self._class(split.left, depth + 1, g.n, True)
        right = self._class(split.right, depth + 1, g.n, True)
        value = quad_form(left.cls, right.cls)
        trace = {"kind": "count", "graph": _graph_json(g), "count": value, "method": "split",
                 "split": split.to_json(), "classes": [left.trace, right.trace]}
        return CountResult(value, "split", trace)

    def _fallback_count(self, g: Graph, key) -> CountResult:
        fcfg = self.cfg.fallback
        seed = _derived_seed(fcfg.seed, key.key)
        cfg = FallbackConfig(**{**fcfg.__dict__, "seed": seed})
        cert = run_fallback(canonical_form(g), cfg)
        value = cert.agreed_count
        trace = {"kind": "count", "graph": _graph_json(g), "count": value, "method": "fallback",
                 "certificate": cert.to_json()}
        return CountResult(value, "fallback", trace)

    # -- classes ----------------------------------------------------------------

    def s2_class(self, h: MarkedCalligraph, use_base_cases: bool = True) -> ClassResult:
        """Class of ``h``; ``use_base_cases=False`` forces the defining equations."""
        return self._class(h, 0, None, use_base_cases)

    def _class(self, h: MarkedCalligraph, depth: int, bound: int | None, base_cases: bool) -> ClassResult:
        self._enter(h.graph, depth, bound)
        head = {"kind": "class", "graph": _graph_json(h.graph), "base": list(h.base), "apex": h.apex}
        if base_cases:
            cls = base_class(h)
            if cls is not None:
                return ClassResult(cls, [], {**head, **cls.to_json(), "method": "basic"})
            key = h.key()
            hit = self.cache.get(CLASS, key)
            if hit is not None:
                cls = S2Class(*hit.value)
                return ClassResult(cls, [], {**head, **cls.to_json(), "method": "cache"})
        graphs = [augment(h, f) for f in GADGETS]

        def one(hf: Graph):
            if not is_minimally_rigid(hf):
                return 0, None
            sub_bound = bound if bound is not None else hf.n + 1
            r = self._count(hf, depth + 1, sub_bound)
            return r.count, r.trace

        if self.cfg.jobs > 1:
            with ThreadPoolExecutor(min(3, self.cfg.jobs)) as pool:
                outs = list(pool.map(one, graphs))
        else:
            outs = [one(hf) for hf in graphs]
        r = {f: o[0] for f, o in zip(GADGETS, outs)}
        cls = solve_class(r["L"], r["R"], r["C"])
        equations = [
            {"gadget": f, "lhs": lhs, "rhs": r[f], "minimally_rigid": o[1] is not None, "count": o[1]}
            for f, lhs, o in zip(GADGETS, ("2(a-b)", "2(a-c)", "4a"), outs)
        ]
        if base_cases:
            self.cache.put(CLASS, h.key(), tuple(cls), {"r_L": r["L"], "r_R": r["R"], "r_C": r["C"]})
        return ClassResult(cls, equations, {**head, **cls.to_json(), "method": "equations", "equations": equations})


# -- functional front-ends ----------------------------------------------------------


def count_realizations(g: Graph, cfg: EngineConfig | None = None, cache: CacheStore | None = None) -> int:
    return Engine(cfg, cache).count(g).count


def s2_class(h: MarkedCalligraph, cfg: EngineConfig | None = None, cache: CacheStore | None = None,
             use_base_cases: bool = True) -> S2Class:
    return Engine(cfg, cache).s2_class(h, use_base_cases).cls


def class_equations(cls: S2Class) -> Iterable[tuple[str, int]]:
    """The three gadget products of ``cls``: the counts its augmentations must have."""
    for f in GADGETS:
        yield f, quad_form(BASE_CLASSES[f], cls)
