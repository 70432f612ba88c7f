import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from models.domain import BurningSequence, DoubleSpider, Graph, PathForest
from src.errors import GraphParseError, InvalidPlacement, VertexOutOfRange
from src.graph import (
    build_double_spider,
    build_path,
    build_path_forest,
    build_spider,
    components,
    distances,
    parse_edge_list,
    parse_graph_spec,
    simulate,
)
from test.strategies import trees


@pytest.fixture
def path5():
    """Fixture for the path on five vertices"""
    return build_path(5)


def test_graph_normalizes_edges():
    """Test edges are stored with the smaller endpoint first"""
    g = Graph(vertex_count=3, edges=[(1, 0), (2, 1)])
    assert g.edges == frozenset({(0, 1), (1, 2)})
    assert g.order == 3


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 1)]])
def test_graph_rejects_bad_edges(edges):
    """Test loops and out-of-range endpoints are rejected"""
    with pytest.raises(ValueError):
        Graph(vertex_count=3, edges=edges)


def test_simulate_single_source(path5):
    """Test fire spreads one hop per round from the middle of a path"""
    outcome = simulate(path5, BurningSequence(sources=(2,)))
    assert outcome.fully_burned
    assert outcome.rounds_elapsed == 3
    assert outcome.burned_at_round == (3, 2, 1, 2, 3)


def test_simulate_rejects_burned_source(path5):
    """Test a source placed on a burning vertex is an invalid placement"""
    with pytest.raises(InvalidPlacement) as exc_info:
        simulate(path5, BurningSequence(sources=(2, 4, 3)))
    assert exc_info.value.round_number == 3
    assert exc_info.value.vertex == 3


def test_simulate_non_strict_records_invalid_round(path5):
    """Test non-strict replay skips the bad source and reports its round"""
    outcome = simulate(path5, BurningSequence(sources=(2, 4, 3)), strict=False)
    assert outcome.invalid_round == 3
    assert outcome.fully_burned
    assert outcome.rounds_elapsed == 3


def test_simulate_placement_before_spread(path5):
    """Test a source may land on a vertex the fire would reach in the same round"""
    outcome = simulate(path5, BurningSequence(sources=(2, 3)))
    assert outcome.burned_at_round[3] == 2


def test_simulate_vertex_out_of_range(path5):
    """Test sources outside the vertex range are rejected"""
    with pytest.raises(VertexOutOfRange):
        simulate(path5, BurningSequence(sources=(5,)))


def test_simulate_disconnected_graph():
    """Test an unreachable vertex never burns"""
    g = Graph(vertex_count=3, edges=[(0, 1)])
    outcome = simulate(g, BurningSequence(sources=(0,)))
    assert not outcome.fully_burned
    assert outcome.burned_at_round == (1, 2, None)
    assert outcome.rounds_elapsed is None


def test_distances_unreachable_sentinel():
    """Test unreachable pairs hold the vertex count"""
    g = Graph(vertex_count=3, edges=[(0, 1)])
    matrix = distances(g)
    assert matrix[0, 1] == 1
    assert matrix[0, 2] == 3
    assert not matrix.flags.writeable


def test_build_path_forest_offsets():
    """Test path forests are laid out path after path"""
    g, offsets = build_path_forest(PathForest(lengths=(2, 3)))
    assert offsets == [0, 3]
    assert g.vertex_count == 5
    assert g.edges == frozenset({(0, 1), (1, 2), (3, 4)})


def test_build_spider_layout():
    """Test spider arms are laid out longest first from the head"""
    g = build_spider([1, 2])
    assert g.vertex_count == 4
    assert g.edges == frozenset({(0, 1), (1, 2), (0, 3)})


def test_build_double_spider_heads():
    """Test double spider heads are vertices 0 and 1"""
    g = build_double_spider(DoubleSpider(arms_a=(2,), arms_b=(1,)))
    assert g.vertex_count == 5
    assert g.edges == frozenset({(0, 1), (0, 2), (2, 3), (1, 4)})


@pytest.mark.parametrize(
    "spec, order",
    [("path:16", 16), ("spider:5,5,6", 17), ("dspider:5,5/6", 18), ("dspider:3/", 5)],
)
def test_parse_graph_spec(spec, order):
    """Test short graph specs build graphs of the right order"""
    assert parse_graph_spec(spec).order == order


@pytest.mark.parametrize("spec", ["tree:3", "path:1,2", "path:x", "spider:0"])
def test_parse_graph_spec_errors(spec):
    """Test unknown or malformed specs raise GraphParseError"""
    with pytest.raises(GraphParseError):
        parse_graph_spec(spec)


def test_parse_graph_spec_file(tmp_path):
    """Test a spec naming a file reads an edge list"""
    path = tmp_path / "triangle.txt"
    path.write_text("# triangle\nn 3\n0 1\n1 2\n2 0\n")
    g = parse_graph_spec(str(path))
    assert g.order == 3
    assert len(g.edges) == 3


def test_parse_edge_list_comments():
    """Test comments and blank lines are ignored"""
    g = parse_edge_list("n 3\n\n0 1  # first\n1 2\n")
    assert g.edges == frozenset({(0, 1), (1, 2)})


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 1\n", 1),
        ("n 3\n0 1\n1 0\n", 3),
        ("n 2\n1 1\n", 2),
        ("n 2\n0 2\n", 2),
        ("n 2\n0 a\n", 2),
        ("n 2\n0 1 2\n", 2),
    ],
)
def test_parse_edge_list_errors(text, line):
    """Test edge-list errors report the offending line"""
    with pytest.raises(GraphParseError) as exc_info:
        parse_edge_list(text)
    assert exc_info.value.line == line


def test_parse_edge_list_empty():
    """Test an empty file is rejected"""
    with pytest.raises(GraphParseError):
        parse_edge_list("# nothing\n")


def test_components():
    """Test connected components are listed with sorted members"""
    g = Graph(vertex_count=5, edges=[(0, 3), (1, 4)])
    assert sorted(components(g)) == [[0, 3], [1, 4], [2]]


@given(trees(), st.data())
@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
def test_simulate_matches_distance_formula(g, data):
    """Test each vertex burns at min over sources of round + distance"""
    sources = data.draw(
        st.lists(st.integers(0, g.vertex_count - 1), unique=True, min_size=1, max_size=4)
    )
    try:
        outcome = simulate(g, BurningSequence(sources=tuple(sources)))
    except InvalidPlacement:
        assume(False)
    dist = distances(g)
    for v in range(g.vertex_count):
        expected = min(j + int(dist[x, v]) for j, x in enumerate(sources, start=1))
        assert outcome.burned_at_round[v] == expected
    assert outcome.fully_burned
