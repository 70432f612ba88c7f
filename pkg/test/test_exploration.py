import orjson
import pytest

from src.exploration import explore_step, load_state, state_path
from src.utils import Settings


@pytest.fixture
def settings(tmp_path):
    """Fixture for exploration settings writing under a temporary directory"""
    return Settings(cache_path=str(tmp_path / "c.cache"), explore_n=2)


def test_fresh_state(settings):
    """Test exploration starts at L=1 with no verdict"""
    state = load_state(settings)
    assert state == {"n": 2, "L": 1, "witness": None, "verdict": None, "frontier": []}
    assert state_path(settings).name == "explore-n2.json"


def test_steps_resume_from_state_file(settings):
    """Test each step picks up where the previous one stopped"""
    first = explore_step(settings)
    assert first["verdict"] == "counterexample"
    assert first["L"] == 3
    assert first["witness"] == [2, 2]
    saved = orjson.loads(state_path(settings).read_bytes())
    assert saved == first

    second = explore_step(settings)
    assert second["verdict"] == "certified"
    assert second["L"] == 3
    assert second["witness"] == [2, 2]

    # certified scans are not repeated
    assert explore_step(settings) == second


def test_verdicts_are_cached(settings):
    """Test the deficiency cache file is written alongside the state"""
    explore_step(settings)
    lines = (state_path(settings).parent / "c.cache").read_text().splitlines()
    assert "2;2;2,2;deficient" in lines
