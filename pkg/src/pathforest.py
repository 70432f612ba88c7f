import logging
import threading
from functools import partial

from models.domain import (
    BurningSequence,
    ExceptionClause,
    Graph,
    PathForest,
    PathForestDecision,
    Prediction,
    RadiiAssignment,
)
from models.schemas import VerificationReport, Violation
from src.budget import SearchBudget, unlimited
from src.errors import DomainError
from src.graph import build_path_forest
from src.utils import ceil_sqrt, map_jobs, partitions

logger = logging.getLogger(__name__)

# decisions keyed by (odds left, residual demands); cleared when it grows past the limit
_MEMO: dict[tuple[int, tuple[int, ...]], bool] = {}
_MEMO_LIMIT = 4_000_000
_MEMO_LOCK = threading.Lock()


def path_burning_number(length: int) -> int:
    if length < 1:
        raise DomainError(f"path order must be positive, got {length}")
    return ceil_sqrt(length)


def t_value(forest: PathForest) -> int:
    """Number of order-2 paths when the shortest path has order 2, else 0."""
    if forest.shortest != 2:
        return 0
    return forest.lengths.count(2)


def exceptional_clause(forest: PathForest, m: int) -> ExceptionClause:
    """
    Which exceptional family, if any, the forest belongs to at m rounds.

    Clauses II and III only exist for m > n. Matching is exact on the sorted
    path orders and the lowest-numbered matching clause wins.
    """
    n = forest.path_count
    if n < 2:
        raise DomainError("exceptional families need at least two paths")
    if m < n:
        raise DomainError(f"exceptional families need m >= n, got m={m}, n={n}")
    head, tail = forest.lengths[0], forest.lengths[1:]
    if head == m * m - (n - 1) ** 2 + 1 and all(length == 1 for length in tail):
        return ExceptionClause.I
    if m > n:
        if head == m * m - n * n + 2 and all(2 <= length <= 3 for length in tail):
            return ExceptionClause.II
        if head == m * m - (n - 1) * (n + 3) + 1 and all(length == 5 for length in tail):
            return ExceptionClause.III
    return ExceptionClause.NONE


def exceptional_family(n: int, m: int) -> list[PathForest]:
    """Every member of the exceptional family for n paths and m rounds."""
    if n < 2 or m < n:
        raise DomainError(f"exceptional families need m >= n >= 2, got n={n}, m={m}")
    members = [PathForest(lengths=(m * m - (n - 1) ** 2 + 1,) + (1,) * (n - 1))]
    if m > n:
        for threes in range(n):
            tail = (3,) * threes + (2,) * (n - 1 - threes)
            members.append(PathForest(lengths=(m * m - n * n + 2, *tail)))
        members.append(PathForest(lengths=(m * m - (n - 1) * (n + 3) + 1,) + (5,) * (n - 1)))
    return members


def _moves(k: int, demands: tuple[int, ...], slack: int):
    """Ways to spend the odd 2k-1: on one of the distinct demands, or not at all."""
    odd = 2 * k - 1
    seen = set()
    for index, demand in enumerate(demands):
        if demand in seen:
            continue
        seen.add(demand)
        if odd - demand > slack:
            continue
        rest = demands[:index] + demands[index + 1 :]
        if demand > odd:
            rest = tuple(sorted((*rest, demand - odd), reverse=True))
        yield demand, rest
    if odd <= slack:
        yield None, demands


def _coverable(k: int, demands: tuple[int, ...], budget: SearchBudget) -> bool:
    """Can disjoint subsets of {1, 3, ..., 2k-1} reach every (descending) demand?"""
    if not demands:
        return True
    if len(demands) == 1:
        return demands[0] <= k * k
    if len(demands) > k:
        return False
    slack = k * k - sum(demands)
    if slack < 0:
        return False
    key = (k, demands)
    with _MEMO_LOCK:
        known = _MEMO.get(key)
    if known is not None:
        return known
    budget.tick()
    result = any(_coverable(k - 1, rest, budget) for _, rest in _moves(k, demands, slack))
    with _MEMO_LOCK:
        if len(_MEMO) >= _MEMO_LIMIT:
            _MEMO.clear()
        _MEMO[key] = result
    return result


def _assignment(forest: PathForest, m: int, budget: SearchBudget) -> RadiiAssignment:
    remaining = [(length, index) for index, length in enumerate(forest.lengths)]
    sets: list[list[int]] = [[] for _ in forest.lengths]
    for k in range(m, 0, -1):
        if not remaining:
            break
        demands = tuple(sorted((demand for demand, _ in remaining), reverse=True))
        slack = k * k - sum(demands)
        choice = next(d for d, rest in _moves(k, demands, slack) if _coverable(k - 1, rest, budget))
        if choice is None:
            continue
        odd = 2 * k - 1
        position = next(p for p, (demand, _) in enumerate(remaining) if demand == choice)
        _, index = remaining.pop(position)
        sets[index].append(odd)
        if choice > odd:
            remaining.append((choice - odd, index))
    return RadiiAssignment(m=m, lengths=forest.lengths, sets=tuple(map(tuple, sets)))


def decide(forest: PathForest, m: int, budget: SearchBudget | None = None) -> PathForestDecision:
    """
    Exact m-burnability of a path forest.

    T is m-burnable iff |T| <= m^2 and {1, 3, ..., 2m-1} holds pairwise
    disjoint subsets S_i with sum(S_i) >= l_i. The search spends odds from the
    largest down, never wasting more than the remaining slack m^2 - |T|.

    Raises:
        BudgetExceeded: when the budget runs out before a verdict
    """
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    budget = budget or unlimited()
    burnable = forest.order <= m * m and _coverable(m, forest.lengths, budget)
    assignment = _assignment(forest, m, budget) if burnable else None
    return PathForestDecision(forest=forest, m=m, burnable=burnable, assignment=assignment)


def is_burnable(lengths, m: int) -> bool:
    return decide(PathForest(lengths=tuple(lengths)), m).burnable


def _normalize(assignment: RadiiAssignment) -> list[list[int]]:
    """
    Rewrite the sets so the used odds are exactly the k largest and each set
    is a minimal prefix (in descending order) that still covers its path.
    """
    m = assignment.m
    sets = [sorted(part, reverse=True) for part in assignment.sets]
    while True:
        for index, length in enumerate(assignment.lengths):
            total = 0
            for cut, odd in enumerate(sets[index]):
                total += odd
                if total >= length:
                    sets[index] = sets[index][: cut + 1]
                    break
        used = {odd for part in sets for odd in part}
        top = {2 * m - 1 - 2 * j for j in range(len(used))}
        if used == top:
            return sets
        smallest = min(used - top)
        largest_free = max(top - used)
        for part in sets:
            if smallest in part:
                part[part.index(smallest)] = largest_free
                part.sort(reverse=True)
                break


def assignment_to_sequence(
    forest: PathForest, assignment: RadiiAssignment
) -> tuple[Graph, BurningSequence]:
    """
    Turn a radii assignment into a burning sequence on the disjoint-paths graph.

    Odd 2r+1 is the source of round m - r. Each path is tiled left to right,
    largest odd first, with the center clipped to the path end.
    """
    graph, offsets = build_path_forest(forest)
    m = assignment.m
    placed: dict[int, int] = {}
    for index, part in enumerate(_normalize(assignment)):
        position = offsets[index]
        end = offsets[index] + forest.lengths[index] - 1
        for odd in part:
            radius = (odd - 1) // 2
            placed[m - radius] = min(position + radius, end)
            position += odd
    return graph, BurningSequence(sources=tuple(placed[t] for t in sorted(placed)))


def predict(forest: PathForest, m: int) -> Prediction:
    """
    First known sufficient condition that guarantees m-burnability.

    Returns Prediction(burnable_by=None) when no condition applies; that is
    not a claim of non-burnability.
    """
    lengths = forest.lengths
    n = forest.path_count
    order = forest.order
    shortest = forest.shortest
    if n == 1:
        return Prediction(burnable_by="single-path" if order <= m * m else None)
    if m >= n and shortest == 1:
        if order <= 3 * n - 2:
            return Prediction(burnable_by="unit-tail-3n")
        if order <= 4 * n - 4 and lengths[-2] >= 2:
            return Prediction(burnable_by="unit-tail-4n")
        if order <= 5 * n - 6 and lengths[-2] == 3:
            return Prediction(burnable_by="unit-tail-5n")
    if m >= n + 1 and shortest >= 3 and order <= 5 * n - 1:
        return Prediction(burnable_by="long-tail-5n")
    if m >= n >= 2:
        bound = m * m - (n - 1) ** 2 + 1
        if order < bound or (order == bound and lengths != (m * m - n * n + 2,) + (2,) * (n - 1)):
            return Prediction(burnable_by="squared-gap")
    if m >= n >= 3:
        t = t_value(forest)
        outside = exceptional_clause(forest, m) is ExceptionClause.NONE
        if n == 3 and order <= m * m - 1 - t and outside:
            return Prediction(burnable_by="three-paths")
        if order <= m * m - (n - 1) * (n - 2) + 1 - t and outside:
            return Prediction(burnable_by="n-paths")
    return Prediction()


def path_forest_bound(n: int, m: int, t: int) -> int:
    return m * m - (n - 1) * (n - 2) + 1 - t


def _verify_bound_at(m: int, n: int, budget_nodes: int | None) -> VerificationReport:
    budget = SearchBudget(nodes=budget_nodes) if budget_nodes else unlimited()
    report = VerificationReport(kind="path-forest-bound", params={"n": n, "m": m})
    violations = []
    checked = 0
    exceptional = 0
    for total in range(n, path_forest_bound(n, m, 0) + 1):
        for lengths in partitions(total, n):
            forest = PathForest(lengths=lengths)
            if total > path_forest_bound(n, m, t_value(forest)):
                continue
            checked += 1
            expected = exceptional_clause(forest, m) is ExceptionClause.NONE
            exceptional += not expected
            actual = decide(forest, m, budget).burnable
            if actual != expected:
                violations.append(
                    Violation(instance=str(forest), m=m, expected=str(expected), actual=str(actual))
                )
    for forest in exceptional_family(n, m):
        checked += 1
        if decide(forest, m, budget).burnable:
            violations.append(Violation(instance=str(forest), m=m, expected="False", actual="True"))
    report.checked = checked
    report.violations = violations
    report.counts = {"exceptional": exceptional}
    logger.info("n=%d m=%d: checked %d forests, %d violations", n, m, checked, len(violations))
    return report


def verify_path_forest_bound(
    n: int, m_values, jobs: int = 1, budget_nodes: int | None = None
) -> VerificationReport:
    """
    Check that every forest with n paths and order at most
    m^2 - (n-1)(n-2) + 1 - t_T is m-burnable exactly when it is outside the
    exceptional family, and that every exceptional member is not.
    """
    m_values = list(m_values)
    if n < 3 or any(m < n for m in m_values):
        raise DomainError(f"the path-forest bound needs 3 <= n <= m, got n={n}, m={m_values}")
    shards = map_jobs(partial(_verify_bound_at, n=n, budget_nodes=budget_nodes), m_values, jobs)
    report = VerificationReport(kind="path-forest-bound", params={"n": n, "m": m_values})
    for shard in shards:
        report = report.merge(shard)
    return report


def _linear_cases(n: int):
    """(hypothesis, lengths, rounds) for every forest meeting a linear-bound hypothesis."""
    for total in range(n, 3 * n - 1):
        for lengths in partitions(total, n):
            if lengths[-1] == 1:
                yield "unit-tail-3n", lengths, n
    for total in range(n, 4 * n - 3):
        for lengths in partitions(total, n):
            if lengths[-1] == 1 and lengths[-2] >= 2:
                yield "unit-tail-4n", lengths, n
    for total in range(n, 5 * n - 5):
        for lengths in partitions(total, n):
            if lengths[-1] == 1 and lengths[-2] == 3:
                yield "unit-tail-5n", lengths, n
    for total in range(3 * n, 5 * n):
        for lengths in partitions(total, n, minimum=3):
            yield "long-tail-5n", lengths, n + 1


def verify_linear_bounds(n_max: int) -> VerificationReport:
    """Check each linear sufficient condition on every forest it covers, for 2 <= n <= n_max."""
    if n_max < 2:
        raise DomainError(f"the linear bounds need n >= 2, got n_max={n_max}")
    report = VerificationReport(kind="linear-bounds", params={"n_max": n_max})
    counts: dict[str, int] = {}
    for n in range(2, n_max + 1):
        for hypothesis, lengths, rounds in _linear_cases(n):
            counts[hypothesis] = counts.get(hypothesis, 0) + 1
            report.checked += 1
            if not is_burnable(lengths, rounds):
                report.violations.append(
                    Violation(
                        instance=",".join(map(str, lengths)),
                        m=rounds,
                        expected=f"burnable by {hypothesis}",
                        actual="False",
                    )
                )
    report.counts = counts
    return report
