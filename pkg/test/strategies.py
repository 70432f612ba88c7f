from hypothesis import strategies as st

from models.domain import Graph


@st.composite
def trees(draw, min_order: int = 1, max_order: int = 9) -> Graph:
    """Random labelled trees: vertex i > 0 hangs from a lower-numbered parent."""
    n = draw(st.integers(min_order, max_order))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return Graph(vertex_count=n, edges=frozenset(edges))


def path_forests(max_paths: int = 4, max_length: int = 12):
    return st.lists(st.integers(1, max_length), min_size=1, max_size=max_paths).map(tuple)
