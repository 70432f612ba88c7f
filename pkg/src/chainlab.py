import logging
from collections import deque

from models.domain import (
    CertificationEvidence,
    CertificationResult,
    NodeStatus,
    PathForest,
    PrecNode,
    PrecTree,
    SquareForest,
    ThresholdResult,
    Verdict,
)
from src.budget import SearchBudget, unlimited
from src.cache import DeficiencyCache
from src.errors import BudgetExceeded, DomainError, NotSquareOrder, PreconditionViolated
from src.pathforest import decide
from src.utils import ceil_sqrt, partitions

logger = logging.getLogger(__name__)


def square_forest(lengths) -> SquareForest:
    """Wrap lengths whose total is a perfect square."""
    forest = PathForest(lengths=tuple(lengths))
    m = ceil_sqrt(forest.order)
    if m * m != forest.order:
        raise NotSquareOrder(f"order {forest.order} of {forest} is not a perfect square")
    return SquareForest(forest=forest, m=m)


def is_deficient(
    lengths: tuple[int, ...],
    m: int,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
) -> bool:
    if cache is not None:
        known = cache.get(m, lengths)
        if known is not None:
            return known
    deficient = not decide(PathForest(lengths=lengths), m, budget).burnable
    if cache is not None:
        cache.put(m, lengths, deficient)
    return deficient


def prec_children(
    sf: SquareForest,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
) -> list[SquareForest]:
    """
    Deficient forests reached by growing one component by 2m + 1.

    Raises:
        PreconditionViolated: sf itself is m-burnable
    """
    m = sf.m
    if not is_deficient(sf.lengths, m, budget, cache):
        raise PreconditionViolated(f"{sf.forest} is {m}-burnable")
    children = []
    for value in sorted(set(sf.lengths), reverse=True):
        lengths = list(sf.lengths)
        lengths[lengths.index(value)] = value + 2 * m + 1
        candidate = tuple(sorted(lengths, reverse=True))
        if is_deficient(candidate, m + 1, budget, cache):
            children.append(SquareForest(forest=PathForest(lengths=candidate), m=m + 1))
    return sorted(children, key=lambda child: child.lengths, reverse=True)


def expand_prec_tree(
    root: SquareForest,
    node_budget: int = 5_000,
    m_budget: int = 40,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
) -> PrecTree:
    """
    Breadth-first expansion of the extension tree below a deficient root.

    Leaves are CLOSED when no extension stays deficient and OPEN_BUDGET when
    the node budget or the round cap m_budget stopped the expansion there.
    """
    if not is_deficient(root.lengths, root.m, budget, cache):
        raise PreconditionViolated(f"{root.forest} is {root.m}-burnable")
    top = PrecNode(forest=root)
    queue = deque([top])
    node_count = 1
    max_m = root.m
    open_count = 0
    while queue:
        node = queue.popleft()
        if node.forest.m >= m_budget or node_count >= node_budget:
            node.status = NodeStatus.OPEN_BUDGET
            open_count += 1
            continue
        children = prec_children(node.forest, budget, cache)
        node.children = [PrecNode(forest=child) for child in children]
        node.status = NodeStatus.EXPANDED if children else NodeStatus.CLOSED
        node_count += len(children)
        queue.extend(node.children)
        if children:
            max_m = max(max_m, node.forest.m + 1)
    if open_count:
        logger.warning("tree below %s left %d nodes open", root.forest, open_count)
    return PrecTree(root=top, node_count=node_count, max_m=max_m, open_count=open_count)


def tree_forests(tree: PrecTree) -> list[SquareForest]:
    found = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        found.append(node.forest)
        stack.extend(node.children)
    return found


def enumerate_deficient(
    n: int,
    L: int,  # noqa: N803
    m_lo: int,
    m_hi: int,
    stop_at_first: bool = False,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
) -> list[SquareForest]:
    """Deficient forests with n paths, each of order at least L, and order m^2 for m in m_lo..m_hi."""
    if n < 2 or L < 1 or m_lo > m_hi:
        raise DomainError(f"bad enumeration range n={n}, L={L}, m={m_lo}..{m_hi}")
    budget = budget or unlimited()
    found = []
    for m in range(max(m_lo, 1), m_hi + 1):
        for lengths in partitions(m * m, n, minimum=L):
            if is_deficient(lengths, m, budget, cache):
                found.append(SquareForest(forest=PathForest(lengths=lengths), m=m))
                if stop_at_first:
                    return found
    return found


def threshold_m(n: int, L: int) -> int:  # noqa: N803
    """
    Least m >= 2n with ceil(m^2 / n) >= L + 2m - 1.

    From there on the longest path of any forest in H(n, L) of order m^2 is
    long enough to drop 2m - 1 vertices and stay in H(n, L), so every deficient
    forest has a deficient predecessor one level down.
    """
    m = 2 * n
    while -(-m * m // n) < L + 2 * m - 1:
        m += 1
    return m


def certify_threshold(
    n: int,
    L: int,  # noqa: N803
    node_budget: int = 5_000,
    max_m: int = 40,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
    expand: bool = True,
    stop_at_first: bool = False,
) -> CertificationResult:
    """
    Decide whether every forest in H(n, L) of order m^2 is m-burnable.

    Seeds are the deficient forests below threshold_m(n, L); every deficient
    member above it descends from a seed. No seeds certifies L. Otherwise
    the first seed is a counterexample, and expanding the seed trees tells
    whether H_def(n, L) is finite. Running out of budget while collecting
    seeds returns INCONCLUSIVE with the unfinished m values as frontier.
    """
    if n < 2 or L < 1:
        raise DomainError(f"needs n >= 2 and L >= 1, got n={n}, L={L}")
    budget = budget or unlimited()
    top = threshold_m(n, L)
    m_lo = ceil_sqrt(n * L)
    evidence = CertificationEvidence(n=n, L=L, threshold_m=top, verdict=Verdict.INCONCLUSIVE)

    seeds: list[SquareForest] = []
    for m in range(m_lo, top):
        try:
            seeds.extend(enumerate_deficient(n, L, m, m, stop_at_first, budget, cache))
        except BudgetExceeded:
            logger.warning("budget exhausted enumerating H_def(%d, %d) at m=%d", n, L, m)
            evidence.seeds = [seed.lengths for seed in seeds]
            return CertificationResult(
                verdict=Verdict.INCONCLUSIVE,
                evidence=evidence,
                witness=seeds[0] if seeds else None,
                frontier=list(range(m, top)),
            )
        if seeds and stop_at_first:
            break

    evidence.seeds = [seed.lengths for seed in seeds]
    if not seeds:
        evidence.verdict = Verdict.CERTIFIED
        evidence.deficient_members = 0
        logger.info("L=%d certified for n=%d (threshold m=%d)", L, n, top)
        return CertificationResult(verdict=Verdict.CERTIFIED, evidence=evidence)

    evidence.verdict = Verdict.COUNTEREXAMPLE
    if expand:
        members: dict[tuple[int, tuple[int, ...]], SquareForest] = {}
        all_closed = True
        for seed in seeds:
            if (seed.m, seed.lengths) in members:
                continue
            tree = expand_prec_tree(seed, node_budget, max_m, budget, cache)
            evidence.tree_sizes[str(seed.forest)] = tree.node_count
            evidence.max_m_reached = max(evidence.max_m_reached, tree.max_m)
            all_closed = all_closed and tree.finite
            for forest in tree_forests(tree):
                members[(forest.m, forest.lengths)] = forest
        if all_closed:
            evidence.deficient_members = len(members)
            evidence.max_shortest_path = max(forest.forest.shortest for forest in members.values())
    return CertificationResult(verdict=Verdict.COUNTEREXAMPLE, evidence=evidence, witness=seeds[0])


def compute_threshold(
    n: int,
    node_budget: int = 5_000,
    max_m: int = 40,
    budget: SearchBudget | None = None,
    cache: DeficiencyCache | None = None,
    expand: bool = False,
    start: int = 1,
) -> ThresholdResult:
    """
    Least L such that every forest with n paths of order at least L and total
    order m^2 is m-burnable, with a deficient witness whose shortest path is L - 1.

    After a counterexample the scan jumps past the witness's shortest path, or
    past every member of H_def(n, L) when expand is set and all trees close.
    """
    L = start  # noqa: N806
    witness = None
    steps = 0
    while True:
        steps += 1
        result = certify_threshold(
            n, L, node_budget, max_m, budget, cache, expand=expand, stop_at_first=not expand
        )
        if result.verdict is Verdict.CERTIFIED:
            return ThresholdResult(
                n=n, verdict=Verdict.CERTIFIED, L=L, witness=witness, evidence=result.evidence, steps=steps
            )
        if result.verdict is Verdict.INCONCLUSIVE:
            return ThresholdResult(
                n=n, verdict=Verdict.INCONCLUSIVE, witness=witness, evidence=result.evidence, steps=steps
            )
        longest_gap = result.evidence.max_shortest_path
        if longest_gap is None:
            witness = result.witness
            L = witness.forest.shortest + 1  # noqa: N806
        else:
            L = longest_gap + 1  # noqa: N806
            witness = _witness_with_shortest(result, longest_gap, node_budget, max_m, budget, cache)
        logger.info("n=%d: counterexample found, continuing at L=%d", n, L)


def _witness_with_shortest(result, shortest, node_budget, max_m, budget, cache) -> SquareForest:
    for seed in result.evidence.seeds:
        if min(seed) == shortest:
            return square_forest(seed)
    for seed in result.evidence.seeds:
        tree = expand_prec_tree(square_forest(seed), node_budget, max_m, budget, cache)
        for forest in tree_forests(tree):
            if forest.forest.shortest == shortest:
                return forest
    return result.witness
