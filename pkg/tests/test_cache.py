import json

from refscissors.abgrp import FpAbelianGroup, set_snf_cache
from refscissors.cache import ALGORITHM_VERSION, DiskCache, default_cache_dir, presentation_key


def test_default_dir_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RSC_CACHE_DIR", str(tmp_path / "x"))
    assert default_cache_dir() == tmp_path / "x"
    monkeypatch.delenv("RSC_CACHE_DIR")
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path))
    assert default_cache_dir() == tmp_path / "refscissors"


def test_key_ignores_relation_order():
    a = presentation_key(3, [{0: 2}, {1: 3, 2: 1}])
    b = presentation_key(3, [{2: 1, 1: 3}, {0: 2}])
    assert a == b
    assert a != presentation_key(4, [{0: 2}, {1: 3, 2: 1}])


def test_cached_and_fresh_agree(tmp_path):
    rels = [{0: 4, 1: 6}, {1: 10, 2: 4}, {0: 2, 2: 2}]
    fresh = FpAbelianGroup(3, rels).invariants
    cache = DiskCache(tmp_path)
    set_snf_cache(cache)
    first = FpAbelianGroup(3, rels).invariants
    second = FpAbelianGroup(3, rels).invariants
    assert first == second == fresh
    assert cache.hits >= 1
    files = list(tmp_path.rglob("*.json"))
    assert len(files) >= 1
    body = json.loads(files[0].read_text())
    assert body["version"] == ALGORITHM_VERSION
    assert not list(tmp_path.rglob(".tmp-*"))


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = DiskCache(tmp_path)
    cache.put(2, [{0: 2}], ([2], 1))
    assert cache.get(2, [{0: 2}]) == ([2], 1)
    for f in tmp_path.rglob("*.json"):
        f.write_text("{not json")
    assert cache.get(2, [{0: 2}]) is None
    assert cache.misses == 1
