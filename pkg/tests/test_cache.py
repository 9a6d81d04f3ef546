import json

from mzbranch.cache import (
    CACHE_ENV,
    SubspaceCache,
    canonical_json,
    default_cache_dir,
    entry_key,
    harmonic_space,
)
from mzbranch.kernels import simplicial_harmonics


def only_entry(directory):
    files = [p for p in directory.iterdir() if p.suffix == ".json"]
    assert len(files) == 1
    return files[0]


def test_second_lookup_is_a_hit(tmp_path):
    cache = SubspaceCache(tmp_path)
    first = harmonic_space(cache, "simplicial", 3, (2, 1, 0))
    second = harmonic_space(cache, "simplicial", 3, (2, 1, 0))
    assert cache.stats.misses == 1 and cache.stats.hits == 1
    assert first.to_json() == second.to_json() == simplicial_harmonics(3, (2, 1, 0)).to_json()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


def test_keys_separate_dimensions_and_kinds():
    keys = {
        entry_key("harmonics", 3, "simplicial", (1, 1, 0)),
        entry_key("harmonics", 4, "simplicial", (1, 1, 0)),
        entry_key("harmonics", 3, "howe", (1, 1, 0)),
        entry_key("harmonics", 3, "simplicial", (1, 0, 1)),
    }
    assert len(keys) == 4


def test_tampered_payload_is_recomputed(tmp_path):
    cache = SubspaceCache(tmp_path)
    good = harmonic_space(cache, "simplicial", 3, (1, 1, 0))
    path = only_entry(tmp_path)
    entry = json.loads(path.read_text())
    entry["payload"]["basis"][0]["terms"][0]["coeff"] = "7/1"
    path.write_text(json.dumps(entry))
    again = harmonic_space(cache, "simplicial", 3, (1, 1, 0))
    assert cache.stats.recomputed == 1
    assert again.to_json() == good.to_json()
    # the entry was overwritten with a valid one
    fresh = SubspaceCache(tmp_path)
    harmonic_space(fresh, "simplicial", 3, (1, 1, 0))
    assert fresh.stats.hits == 1


def test_tamper_with_matching_digest_fails_annihilation(tmp_path):
    import hashlib

    cache = SubspaceCache(tmp_path)
    harmonic_space(cache, "simplicial", 3, (1, 1, 0))
    path = only_entry(tmp_path)
    entry = json.loads(path.read_text())
    entry["payload"]["basis"][0]["terms"][0]["coeff"] = "7/1"
    entry["digest"] = hashlib.sha256(canonical_json(entry["payload"]).encode()).hexdigest()
    path.write_text(json.dumps(entry))
    harmonic_space(cache, "simplicial", 3, (1, 1, 0))
    assert cache.stats.recomputed == 1


def test_truncated_file_is_recomputed(tmp_path):
    cache = SubspaceCache(tmp_path)
    harmonic_space(cache, "howe", 2, (1, 1, 0))
    path = only_entry(tmp_path)
    path.write_text(path.read_text()[:20])
    assert harmonic_space(cache, "howe", 2, (1, 1, 0)).dim == 3
    assert cache.stats.recomputed == 1


def test_unusable_directory_degrades(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cache = SubspaceCache(blocker / "sub")
    assert not cache.enabled
    assert harmonic_space(cache, "z", 3, (2, 0, 0)).dim == 5
    assert "computing without cache" in caplog.text


def test_default_directory_from_environment(monkeypatch, tmp_path):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    assert default_cache_dir() is None
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert default_cache_dir() == tmp_path
