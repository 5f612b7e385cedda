import json
import logging

from scount.cache import CLASS, COUNT, CacheStore
from scount.calligraph import basic_L, basic_R
from scount.corpus import k4_minus_edge, triangular_prism
from scount.graph import canonical_key


def test_cold_lookup(tmp_path):
    store = CacheStore(tmp_path / "c.jsonl")
    assert store.get_count(canonical_key(k4_minus_edge())) is None
    assert store.stats()["misses"] == 1


def test_class_swap_rule():
    store = CacheStore()
    store.put(CLASS, basic_L().key(), (1, 1, 0))
    assert store.get_class(basic_R().key()) == (1, 0, 1)
    assert store.get_class(basic_L().key()) == (1, 1, 0)


def test_count_roundtrip_through_file(tmp_path):
    path = tmp_path / "c.jsonl"
    g = triangular_prism()
    CacheStore(path).put(COUNT, canonical_key(g), 32, {"method": "fallback"})
    again = CacheStore(path)
    assert again.get_count(canonical_key(g.relabel([5, 4, 3, 2, 1, 0]))) == 32
    assert again.get(COUNT, canonical_key(g)).provenance == {"method": "fallback"}


def test_class_roundtrip_through_file(tmp_path):
    path = tmp_path / "c.jsonl"
    CacheStore(path).put(CLASS, basic_R().key(), (1, 0, 1))
    assert CacheStore(path).get_class(basic_L().key()) == (1, 1, 0)


def test_corrupt_lines_skipped_with_warning(tmp_path, caplog):
    path = tmp_path / "c.jsonl"
    g = k4_minus_edge()
    CacheStore(path).put(COUNT, canonical_key(g), 4)
    with open(path, "a") as fh:
        fh.write("{not json\n")
        fh.write(json.dumps({"key": "zz", "kind": "count", "value": 1}) + "\n")
        fh.write(json.dumps({"key": "00", "kind": "bogus", "value": 1}) + "\n")
    with caplog.at_level(logging.WARNING):
        store = CacheStore(path)
    assert store.get_count(canonical_key(g)) == 4
    assert store.skipped_lines == 3
    assert sum("corrupt" in r.message for r in caplog.records) == 3


def test_first_value_wins_on_conflict(caplog):
    store = CacheStore()
    k = canonical_key(k4_minus_edge())
    store.put(COUNT, k, 4)
    with caplog.at_level(logging.WARNING):
        store.put(COUNT, k, 6)
    assert store.get_count(k) == 4
    assert "conflict" in caplog.text


def test_env_path_and_clear(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("SCOUNT_CACHE", str(path))
    store = CacheStore.from_env()
    store.put(COUNT, canonical_key(k4_minus_edge()), 4)
    assert path.exists() and len(CacheStore.from_env()) == 1
    store.clear()
    assert not path.exists() and len(store) == 0
    assert CacheStore.from_env(tmp_path / "other.jsonl").path.name == "other.jsonl"
