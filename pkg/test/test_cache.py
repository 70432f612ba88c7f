import logging

import pytest

from src.cache import DeficiencyCache


@pytest.fixture
def cache_path(tmp_path):
    """Fixture for a cache file location that does not exist yet"""
    return tmp_path / "nested" / "deficiency.cache"


def test_put_and_get(cache_path):
    """Test verdicts round through memory and the file"""
    cache = DeficiencyCache(cache_path)
    assert cache.get(6, (17, 15, 4)) is None
    cache.put(6, (17, 15, 4), True)
    cache.put(4, (8, 8), False)
    assert cache.get(6, (17, 15, 4)) is True
    assert cache.get(4, (8, 8)) is False
    assert len(cache) == 2
    assert cache_path.read_text().splitlines() == ["3;6;17,15,4;deficient", "2;4;8,8;burnable"]


def test_put_is_idempotent(cache_path):
    """Test a known verdict is not appended twice"""
    cache = DeficiencyCache(cache_path)
    cache.put(4, (8, 8), False)
    cache.put(4, (8, 8), False)
    assert len(cache_path.read_text().splitlines()) == 1


def test_reload(cache_path):
    """Test a new cache reads the verdicts left by an earlier one"""
    DeficiencyCache(cache_path).put(2, (2, 2), True)
    reloaded = DeficiencyCache(cache_path)
    assert reloaded.get(2, (2, 2)) is True


def test_malformed_lines_skipped(tmp_path, caplog):
    """Test malformed lines are skipped with a warning"""
    path = tmp_path / "deficiency.cache"
    path.write_text("2;2;2,2;deficient\nnot a line\n3;4;8,8;burnable\n2;4;8,8;maybe\n\n")
    with caplog.at_level(logging.WARNING):
        cache = DeficiencyCache(path)
    assert len(cache) == 1
    assert cache.get(2, (2, 2)) is True
    assert "line 2" in caplog.text
    assert "line 3" in caplog.text
    assert "line 4" in caplog.text


def test_memory_only():
    """Test a cache without a path keeps verdicts in memory"""
    cache = DeficiencyCache(None)
    cache.put(2, (2, 2), True)
    assert cache.get(2, (2, 2)) is True
    assert cache.path is None
