import logging
from functools import lru_cache
from pathlib import Path

import networkx as nx
import numpy as np

from models.domain import BurningSequence, BurnOutcome, DoubleSpider, Graph, PathForest
from src.errors import GraphParseError, InvalidPlacement, VertexOutOfRange

logger = logging.getLogger(__name__)


def to_networkx(g: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.vertex_count))
    nx_graph.add_edges_from(g.edges)
    return nx_graph


@lru_cache(maxsize=256)
def distances(g: Graph) -> np.ndarray:
    """
    All-pairs hop distances as a read-only int matrix.

    Unreachable pairs hold vertex_count, which exceeds every finite distance.
    """
    n = g.vertex_count
    matrix = np.full((n, n), n, dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(to_networkx(g)):
        for target, hops in lengths.items():
            matrix[source, target] = hops
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=256)
def adjacency(g: Graph) -> tuple[tuple[int, ...], ...]:
    neighbours = [[] for _ in range(g.vertex_count)]
    for u, v in g.edges:
        neighbours[u].append(v)
        neighbours[v].append(u)
    return tuple(tuple(sorted(row)) for row in neighbours)


def simulate(g: Graph, seq: BurningSequence, strict: bool = True) -> BurnOutcome:
    """
    Replay a burning sequence round by round.

    Each round first places the next source, then spreads fire from every
    vertex that was burning at the end of the previous round. Rounds keep
    going after the sequence is exhausted until nothing new burns.

    Args:
        g: the graph
        seq: sources in round order
        strict: raise InvalidPlacement when a source lands on a burned vertex;
            otherwise record the round in invalid_round and skip the placement

    Returns:
        BurnOutcome with the burn round of each vertex (None if never burned).
        rounds_elapsed is the round the last vertex burned, and None unless
        every vertex burned.
    """
    n = g.vertex_count
    for vertex in seq.sources:
        if not 0 <= vertex < n:
            raise VertexOutOfRange(f"vertex {vertex} outside 0..{n - 1}")

    neighbours = adjacency(g)
    burned_at: list[int | None] = [None] * n
    frontier: list[int] = []
    invalid_round = None
    round_number = 0
    burned_count = 0

    while burned_count < n:
        round_number += 1
        placed = False
        new_frontier = []
        if round_number <= len(seq.sources):
            source = seq.sources[round_number - 1]
            if burned_at[source] is not None:
                if strict:
                    raise InvalidPlacement(round_number, source)
                if invalid_round is None:
                    invalid_round = round_number
            else:
                burned_at[source] = round_number
                burned_count += 1
                new_frontier.append(source)
                placed = True
        for vertex in frontier:
            for neighbour in neighbours[vertex]:
                if burned_at[neighbour] is None:
                    burned_at[neighbour] = round_number
                    burned_count += 1
                    new_frontier.append(neighbour)
        frontier = new_frontier
        if not frontier and not placed and round_number >= len(seq.sources):
            break

    fully_burned = burned_count == n
    return BurnOutcome(
        rounds_elapsed=max(burned_at, default=0) if fully_burned else None,
        fully_burned=fully_burned,
        burned_at_round=tuple(burned_at),
        invalid_round=invalid_round,
    )


def build_path(length: int) -> Graph:
    return Graph(vertex_count=length, edges=frozenset((i, i + 1) for i in range(length - 1)))


def build_path_forest(forest: PathForest) -> tuple[Graph, list[int]]:
    """Disjoint union of paths; also returns the first vertex of each path."""
    edges = []
    offsets = []
    offset = 0
    for length in forest.lengths:
        offsets.append(offset)
        edges.extend((offset + i, offset + i + 1) for i in range(length - 1))
        offset += length
    return Graph(vertex_count=offset, edges=frozenset(edges)), offsets


def _attach_arms(edges: list, head: int, arms, next_vertex: int) -> int:
    for arm in arms:
        previous = head
        for _ in range(arm):
            edges.append((previous, next_vertex))
            previous = next_vertex
            next_vertex += 1
    return next_vertex


def build_spider(arms) -> Graph:
    """Head is vertex 0; arms are laid out one after another, head side first."""
    edges: list[tuple[int, int]] = []
    count = _attach_arms(edges, 0, sorted(arms, reverse=True), 1)
    return Graph(vertex_count=count, edges=frozenset(edges))


def build_double_spider(spider: DoubleSpider) -> Graph:
    """Heads are vertices 0 (A) and 1 (B); arms of A come before arms of B."""
    edges: list[tuple[int, int]] = [(0, 1)]
    count = _attach_arms(edges, 0, spider.arms_a, 2)
    count = _attach_arms(edges, 1, spider.arms_b, count)
    return Graph(vertex_count=count, edges=frozenset(edges))


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise GraphParseError(f"not a comma list of integers: {text!r}") from e
    if any(value < 1 for value in values):
        raise GraphParseError(f"lengths must be positive: {text!r}")
    return values


def parse_graph_spec(spec: str) -> Graph:
    """
    Build a graph from a short spec or an edge-list file.

    Accepted forms: `path:16`, `spider:5,5,6`, `dspider:5,5/6`, or a path to a
    file whose first data line is `n <count>` followed by `u v` edge lines.
    """
    kind, _, body = spec.partition(":")
    if body:
        if kind == "path":
            lengths = _parse_int_list(body)
            if len(lengths) != 1:
                raise GraphParseError(f"path takes one length: {spec!r}")
            return build_path(lengths[0])
        if kind == "spider":
            return build_spider(_parse_int_list(body))
        if kind == "dspider":
            side_a, _, side_b = body.partition("/")
            return build_double_spider(
                DoubleSpider(arms_a=_parse_int_list(side_a), arms_b=_parse_int_list(side_b))
            )
    path = Path(spec)
    if not path.is_file():
        raise GraphParseError(f"unknown graph spec or missing file: {spec!r}")
    return parse_edge_list(path.read_text())


def parse_edge_list(text: str) -> Graph:
    vertex_count = None
    edges: set[tuple[int, int]] = set()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if vertex_count is None:
            if len(fields) != 2 or fields[0] != "n" or not fields[1].isdigit():
                raise GraphParseError("expected header `n <count>`", line_number)
            vertex_count = int(fields[1])
            continue
        if len(fields) != 2:
            raise GraphParseError(f"expected `u v`, got {line!r}", line_number)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError as e:
            raise GraphParseError(f"non-integer vertex in {line!r}", line_number) from e
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", line_number)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphParseError(f"vertex outside 0..{vertex_count - 1}", line_number)
        edge = (min(u, v), max(u, v))
        if edge in edges:
            raise GraphParseError(f"duplicate edge {edge}", line_number)
        edges.add(edge)
    if vertex_count is None:
        raise GraphParseError("empty graph file")
    logger.debug("parsed graph with %d vertices and %d edges", vertex_count, len(edges))
    return Graph(vertex_count=vertex_count, edges=frozenset(edges))


def components(g: Graph) -> list[list[int]]:
    return [sorted(part) for part in nx.connected_components(to_networkx(g))]
