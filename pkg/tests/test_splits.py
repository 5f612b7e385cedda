import random
from itertools import product

import pytest

from scount.calligraph import is_calligraph
from scount.corpus import double_centred, k4_minus_edge, laman_graphs, seventeen_vertex_graph
from scount.graph import Graph, new_graph
from scount.splits import SplitError, enumerate_splits, find_nontrivial_split, nontrivial_splits


def _ident(s):
    return frozenset((frozenset(s.side_edges("left")), frozenset(s.side_edges("right")))), s.base, s.apex


def naive_splits(g: Graph):
    """Every 2-colouring of the non-base edges, kept when the sides meet exactly in the anchor."""
    out = set()
    for u, v in g.sorted_edges():
        rest = [e for e in g.sorted_edges() if e != (u, v)]
        for w in range(g.n):
            if w in (u, v):
                continue
            triple = {u, v, w}
            for colours in product((0, 1), repeat=len(rest)):
                sides = [{(u, v)}, {(u, v)}]
                for e, c in zip(rest, colours):
                    sides[c].add(e)
                if any(len(s) != 2 * len(triple | {x for e in s for x in e}) - 4 for s in sides):
                    continue
                verts = [triple | {x for e in s for x in e} for s in sides]
                if verts[0] & verts[1] != triple or verts[0] | verts[1] != set(range(g.n)):
                    continue
                ok = True
                for vs, es in zip(verts, sides):
                    sub, old = g.subgraph(vs, es)
                    idx = {x: i for i, x in enumerate(old)}
                    ok &= is_calligraph(sub, (idx[u], idx[v]), idx[w])
                if ok:
                    out.add((frozenset(map(frozenset, sides)), (u, v), w))
    return out


def _check_invariants(g, s):
    lv, rv = set(s.left_vertices), set(s.right_vertices)
    le, re_ = s.side_edges("left"), s.side_edges("right")
    assert lv | rv == set(range(g.n))
    assert lv & rv == {s.apex, *s.base}
    assert le | re_ == set(g.edges)
    assert le & re_ == {tuple(sorted(s.base))}


def test_seventeen_vertex_graph_balanced_split():
    g = seventeen_vertex_graph()
    found = nontrivial_splits(g)
    assert any(s.sizes() == (10, 10) and set(s.base) == {1, 2} and s.apex == 0 for s in found)
    best = find_nontrivial_split(g)
    assert best.sizes() == (10, 10)
    for s in found:
        _check_invariants(g, s)


def test_k4_minus_edge_has_only_small_sides():
    splits = list(enumerate_splits(k4_minus_edge()))
    assert splits and all(min(s.sizes()) == 3 for s in splits)
    assert not nontrivial_splits(k4_minus_edge(), min_side=4)
    assert find_nontrivial_split(k4_minus_edge()) is None


def test_double_centred_splits_into_two_centred_gadgets():
    g = double_centred()
    sizes = [s.sizes() for s in enumerate_splits(g) if s.base in ((1, 2), (2, 1)) and s.apex == 0]
    assert (4, 4) in sizes


@pytest.mark.parametrize("n", [5, 6])
def test_small_graphs_have_no_nontrivial_split(n):
    for g in laman_graphs(n):
        assert find_nontrivial_split(g) is None


def test_disconnected_rejected():
    with pytest.raises(SplitError, match="connected"):
        list(enumerate_splits(new_graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])))


def test_not_rigid_rejected():
    with pytest.raises(SplitError):
        find_nontrivial_split(new_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]))


def test_enumeration_cap():
    with pytest.raises(SplitError, match="assignments"):
        list(enumerate_splits(seventeen_vertex_graph(), limit=4))


def _corpus():
    graphs = list(laman_graphs(5)) + list(laman_graphs(6))
    rng = random.Random(7)
    graphs += rng.sample(laman_graphs(7), 6) + rng.sample(laman_graphs(8), 2)
    return graphs


@pytest.mark.parametrize("g", _corpus(), ids=lambda g: f"n{g.n}")
def test_enumeration_matches_naive_oracle(g):
    ours = list(enumerate_splits(g))
    ids = [_ident(s) for s in ours]
    assert len(ids) == len(set(ids)), "a split was yielded twice"
    assert set(ids) == naive_splits(g)
    for s in ours:
        _check_invariants(g, s)


def test_selection_is_label_independent():
    g = laman_graphs(8)[100]
    base = find_nontrivial_split(g)
    rng = random.Random(0)
    for _ in range(5):
        perm = list(range(g.n))
        rng.shuffle(perm)
        other = find_nontrivial_split(g.relabel(perm))
        assert (base is None) == (other is None)
        if base is not None:
            assert sorted([base.left.key().key, base.right.key().key]) == \
                sorted([other.left.key().key, other.right.key().key])
