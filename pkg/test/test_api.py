import pytest
from fastapi.testclient import TestClient

import main
from main import app
from src.cache import DeficiencyCache
from src.utils import Settings


@pytest.fixture
def client(monkeypatch):
    """Fixture to create FastAPI test client with an in-memory deficiency cache"""
    monkeypatch.setattr(main, "cache", DeficiencyCache(None))
    return TestClient(app)


def test_health_check(client):
    """Test health check endpoint"""
    response = client.get("/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["cached_verdicts"] == 0
    assert "thread_pool_info" in data


def test_burn(client):
    """Test burning number endpoint"""
    response = client.post("/burn", json={"graph": "path:16"})
    assert response.status_code == 200
    data = response.json()
    assert data["burning_number"] == 4
    assert len(data["witness"]) == 4
    assert "processing_time" in data


def test_burn_with_m(client):
    """Test m-burnability endpoint"""
    response = client.post("/burn", json={"graph": "spider:5,5,6", "m": 3})
    assert response.status_code == 200
    data = response.json()
    assert data["burnable"] is False
    assert data["witness"] is None


def test_burn_invalid_spec(client):
    """Test unparseable graph specs are rejected"""
    response = client.post("/burn", json={"graph": "nosuch:spec"})
    assert response.status_code == 422


def test_burn_out_of_budget(client, monkeypatch):
    """Test an exhausted node budget maps to 503"""
    monkeypatch.setattr(main, "settings", Settings(node_budget=1))
    response = client.post("/burn", json={"graph": "path:30"})
    assert response.status_code == 503
    assert response.json()["detail"].startswith("inconclusive")


def test_path_forest_decide(client):
    """Test path forest decision with its exceptional clause"""
    response = client.post("/path-forest/decide", json={"lengths": [13, 1, 1], "m": 4})
    assert response.status_code == 200
    data = response.json()
    assert data["burnable"] is False
    assert data["clause"] == "I"
    assert data["assignment"] is None


def test_path_forest_decide_assignment(client):
    """Test burnable forests come with a radii assignment"""
    response = client.post("/path-forest/decide", json={"lengths": [7, 5, 2], "m": 4})
    data = response.json()
    assert data["burnable"] is True
    assert data["assignment"] == [[7], [5], [3]]


def test_path_forest_single_path_has_no_clause(client):
    """Test the clause is only reported for 2 <= n <= m"""
    response = client.post("/path-forest/decide", json={"lengths": [16], "m": 4})
    data = response.json()
    assert data["burnable"] is True
    assert data["clause"] is None


def test_path_forest_invalid_lengths(client):
    """Test nonpositive lengths are rejected"""
    response = client.post("/path-forest/decide", json={"lengths": [3, 0], "m": 2})
    assert response.status_code == 422


def test_path_forest_predict(client):
    """Test prediction endpoint"""
    response = client.post("/path-forest/predict", json={"lengths": [5, 1, 1], "m": 3})
    assert response.status_code == 200
    assert response.json()["burnable_by"] == "unit-tail-3n"


def test_double_spider_hard(client):
    """Test double spider decision through a hard subspider"""
    response = client.post(
        "/double-spider/decide", json={"arms_a": [3, 3], "arms_b": [2], "m": 3}
    )
    assert response.status_code == 200
    data = response.json()
    assert data["spider"] == "3,3/2"
    assert data["burnable"] is False
    assert data["reason"] == "hard-subspider"


def test_double_spider_deadline_witness(client):
    """Test head-deadline witness is attached on request"""
    response = client.post(
        "/double-spider/decide", json={"arms_a": [7], "arms_b": [7], "m": 4, "witness": True}
    )
    assert response.status_code == 200
    data = response.json()
    assert data["burnable"] is True
    assert data["rounds_after_heads"] == 2
    assert len(data["deadline_witness"]) == 4


def test_double_spider_invalid_m(client):
    """Test request validation"""
    response = client.post("/double-spider/decide", json={"arms_a": [3], "m": 1})
    assert response.status_code == 422


def test_chain(client):
    """Test extension tree endpoint"""
    response = client.post("/chain", json={"lengths": [12, 2, 2], "max_m": 5})
    assert response.status_code == 200
    data = response.json()
    assert data["open_count"] > 0
    assert data["root"]["forest"]["m"] == 4
    children = [child["forest"]["forest"]["lengths"] for child in data["root"]["children"]]
    assert children == [[21, 2, 2], [12, 11, 2]]


def test_chain_not_square(client):
    """Test non-square forest orders are rejected"""
    response = client.post("/chain", json={"lengths": [5, 5]})
    assert response.status_code == 422


def test_threshold(client):
    """Test threshold scan endpoint"""
    response = client.post("/threshold", json={"n": 2})
    assert response.status_code == 200
    data = response.json()
    assert data["verdict"] == "certified"
    assert data["L"] == 3
    assert data["witness"]["forest"]["lengths"] == [2, 2]
