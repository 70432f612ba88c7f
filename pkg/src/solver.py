import logging

import numpy as np

from models.domain import BurnDecision, BurningSequence, Graph
from src.budget import SearchBudget, unlimited
from src.errors import BudgetExceeded, DomainError, VertexOutOfRange
from src.graph import components, distances
from src.utils import ceil_sqrt

logger = logging.getLogger(__name__)

_FAR = 1 << 30


class BurningSolver:
    """
    Exact m-burnability search for small graphs.

    G is m-burnable iff there are centers x_1..x_k (k <= m) whose balls
    B(x_i, m - i) cover every vertex. The search places centers in round order,
    branching only on distinct, non-dominated sets of newly covered vertices,
    and memoizes (round, covered) states that are known to fail. A covering is
    turned into a valid burning sequence afterwards by replacing centers that
    would land on an already burning vertex.

    Args:
        g: graph to burn
        budget: node allowance shared by every call on this solver
    """

    def __init__(self, g: Graph, budget: SearchBudget | None = None):
        self.g = g
        self.budget = budget or unlimited()
        n = g.vertex_count
        dist = distances(g).astype(np.int64)
        dist[dist >= max(n, 1)] = _FAR
        self._dist = dist
        self._full = (1 << n) - 1
        self._balls: dict[int, list[int]] = {}

    @property
    def distance_matrix(self) -> np.ndarray:
        return self._dist

    def ball_masks(self, radius: int) -> list[int]:
        """Bitmask of B(x, radius) for every vertex x."""
        if radius not in self._balls:
            self._balls[radius] = [
                sum(1 << int(v) for v in np.flatnonzero(row <= radius)) for row in self._dist
            ]
        return self._balls[radius]

    def is_m_burnable(self, m: int, deadlines: dict[int, int] | None = None) -> BurnDecision:
        """
        Decide whether the graph burns within m rounds.

        Args:
            m: number of rounds, at least 1
            deadlines: optional {vertex: round} constraints; each vertex must be
                burning by the end of the given round

        Returns:
            BurnDecision with a replayable witness when burnable

        Raises:
            BudgetExceeded: when the node budget runs out before a verdict
        """
        if m < 1:
            raise DomainError(f"m must be positive, got {m}")
        n = self.g.vertex_count
        if n == 0:
            return BurnDecision(m=m, burnable=True, witness=BurningSequence(sources=()))

        targets = sorted((deadlines or {}).items())
        for vertex, deadline in targets:
            if not 0 <= vertex < n:
                raise VertexOutOfRange(f"deadline vertex {vertex} outside 0..{n - 1}")
            if deadline < 1:
                return BurnDecision(m=m, burnable=False)

        # round i (1-based) contributes masks[i][x]; deadline k owns bit n + k
        masks: list[list[int]] = [[]]
        late: list[int] = [0]
        for i in range(1, m + 1):
            row = list(self.ball_masks(m - i))
            late_bits = 0
            for k, (vertex, deadline) in enumerate(targets):
                bit = 1 << (n + k)
                if deadline < i:
                    late_bits |= bit
                    continue
                reach = deadline - i
                for x in range(n):
                    if self._dist[x, vertex] <= reach:
                        row[x] |= bit
            masks.append(row)
            late.append(late_bits)

        reach_cap = [0] * (m + 2)
        for i in range(m, 0, -1):
            reach_cap[i] = reach_cap[i + 1] + max(
                (ball & self._full).bit_count() for ball in masks[i]
            )

        target = (1 << (n + len(targets))) - 1
        failed: set[tuple[int, int]] = set()
        start = self.budget.used

        def search(i: int, covered: int) -> list[int] | None:
            if covered == target:
                return []
            if i > m or (i, covered) in failed:
                return None
            if covered & late[i] != late[i] or n - (covered & self._full).bit_count() > reach_cap[i]:
                failed.add((i, covered))
                return None

            gains: dict[int, int] = {}
            for x, ball in enumerate(masks[i]):
                gain = ball & ~covered
                if gain and gain not in gains:
                    gains[gain] = x
            kept: list[int] = []
            for gain in sorted(gains, key=int.bit_count, reverse=True):
                if not any(gain & bigger == gain for bigger in kept):
                    kept.append(gain)

            for gain in kept:
                self.budget.tick()
                rest = search(i + 1, covered | gain)
                if rest is not None:
                    return [gains[gain], *rest]
            failed.add((i, covered))
            return None

        try:
            centers = search(1, 0)
        except BudgetExceeded:
            logger.warning("budget exhausted deciding %d-burnability of order %d graph", m, n)
            raise
        nodes = self.budget.used - start
        if centers is None:
            logger.debug("order %d graph is not %d-burnable (%d nodes)", n, m, nodes)
            return BurnDecision(m=m, burnable=False, nodes=nodes)
        return BurnDecision(m=m, burnable=True, witness=self._repair(centers), nodes=nodes)

    def _repair(self, centers: list[int]) -> BurningSequence:
        # a center already burning at its round has its ball inside an earlier one
        times = np.full(self.g.vertex_count, _FAR, dtype=np.int64)
        sources: list[int] = []
        for j, x in enumerate(centers, start=1):
            if times.max() <= j - 1:
                break
            if times[x] <= j - 1:
                x = int(np.flatnonzero(times > j - 1)[0])
            sources.append(int(x))
            times = np.minimum(times, j + self._dist[x])
        return BurningSequence(sources=tuple(sources))


def is_m_burnable(
    g: Graph,
    m: int,
    budget: SearchBudget | None = None,
    deadlines: dict[int, int] | None = None,
) -> BurnDecision:
    return BurningSolver(g, budget).is_m_burnable(m, deadlines=deadlines)


def lower_bound(g: Graph) -> int:
    """Each component needs a source, and b(G) >= ceil(sqrt(diam + 1)) per component."""
    dist = distances(g)
    bound = 1
    parts = components(g)
    for part in parts:
        diameter = int(dist[np.ix_(part, part)].max())
        bound = max(bound, ceil_sqrt(diameter + 1))
    return max(bound, len(parts))


def burning_number(g: Graph, budget: SearchBudget | None = None) -> BurnDecision:
    """Least m with g m-burnable, searched upward from lower_bound."""
    if g.vertex_count == 0:
        raise DomainError("burning number of the empty graph is undefined")
    solver = BurningSolver(g, budget)
    m = lower_bound(g)
    while True:
        try:
            decision = solver.is_m_burnable(m)
        except BudgetExceeded as e:
            raise BudgetExceeded(
                f"{e}; burning number lies in {m}..{g.vertex_count}",
                nodes=e.nodes,
                lower=m,
                upper=g.vertex_count,
            ) from e
        if decision.burnable:
            return decision
        m += 1


def enumerate_optimal_sequences(g: Graph, budget: SearchBudget | None = None) -> list[BurningSequence]:
    """Every valid burning sequence of length b(g) that burns g within b(g) rounds."""
    b = burning_number(g, budget).m
    solver = BurningSolver(g, budget)
    dist = solver.distance_matrix
    n = g.vertex_count
    balls = [solver.ball_masks(b - i) for i in range(1, b + 1)]
    reach_cap = [0] * (b + 2)
    for i in range(b, 0, -1):
        reach_cap[i] = reach_cap[i + 1] + max(ball.bit_count() for ball in balls[i - 1])

    found: list[BurningSequence] = []

    def extend(prefix: list[int], covered: int):
        i = len(prefix) + 1
        if i > b:
            if covered == solver._full:
                found.append(BurningSequence(sources=tuple(prefix)))
            return
        if n - covered.bit_count() > reach_cap[i]:
            return
        for x in range(n):
            # x must still be unburned when placed in round i
            if any(dist[p, x] < i - k for k, p in enumerate(prefix, start=1)):
                continue
            solver.budget.tick()
            extend([*prefix, x], covered | balls[i - 1][x])

    extend([], 0)
    return sorted(found, key=lambda seq: seq.sources)
