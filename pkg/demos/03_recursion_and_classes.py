"""Classes of calligraphs and counts through calligraphic splits."""
from scount.cache import CacheStore
from scount.calligraph import basic_C, validate_calligraph
from scount.corpus import k33, laman_graphs
from scount.fallback.counter import FallbackConfig, run_fallback
from scount.recursion import Engine, EngineConfig, class_equations, quad_form
from scount.splits import find_nontrivial_split

engine = Engine(EngineConfig(fallback=FallbackConfig(multihom=True)), CacheStore())

# The centred gadget through its defining equations instead of the lookup table
res = engine.s2_class(basic_C(), use_base_cases=False)
print("centred gadget:", tuple(res.cls), [(e["gadget"], e["lhs"], e["rhs"]) for e in res.equations])

# K3,3 minus an edge, based at the remaining edge of the deleted vertex pair
g = k33()
h = validate_calligraph(g.subgraph(range(6), [e for e in g.sorted_edges() if e != (0, 3)])[0], (0, 4), 3)
cls = engine.s2_class(h).cls
print("K3,3 minus an edge:", tuple(cls), "gadget products:", dict(class_equations(cls)))

# A 7-vertex graph counted twice: through a split and directly
g = next(g for g in laman_graphs(7) if find_nontrivial_split(g) is not None)
split = find_nontrivial_split(g)
via_split = engine.count_with_split(g, split)
left, right = via_split.trace["classes"]
print("classes:", (left["a"], left["b"], left["c"]), (right["a"], right["b"], right["c"]))
direct = run_fallback(g, FallbackConfig(multihom=True)).agreed_count
print("split count:", via_split.count, " direct:", direct)
print("cache entries:", engine.cache.stats()["entries"])
