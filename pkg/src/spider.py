import itertools
import logging
from functools import partial

import numpy as np

from models.domain import DoubleSpider, HeadDeadlineWitness, SpiderDecision
from models.schemas import VerificationReport, Violation
from src.budget import SearchBudget, unlimited
from src.errors import (
    BudgetExceeded,
    DeadlineUnattainable,
    DomainError,
    GraphBurnError,
    NoWitnessInBudget,
)
from src.graph import build_double_spider, simulate
from src.solver import BurningSolver
from src.utils import map_jobs, partitions

logger = logging.getLogger(__name__)

HEAD_A, HEAD_B = 0, 1

__all__ = [
    "build_double_spider",
    "decide_double_spider",
    "double_spiders_of_order",
    "has_hard_subspider",
    "head_deadline_witness",
    "tightness_spider",
    "verify_double_spiders",
]


def _spread_apart(legs, m: int) -> bool:
    """Do the m longest legs at one vertex keep every pair of ends 2m apart?"""
    if len(legs) < m:
        return False
    chosen = sorted(legs, reverse=True)[:m]
    return chosen[-1] + chosen[-2] >= 2 * m


def has_hard_subspider(ds: DoubleSpider, m: int) -> bool:
    """
    Does ds contain an m-double spider whose leaves are pairwise at least 2m apart?

    For m = 2 such a subgraph is any path with five vertices. For m >= 3 the
    subgraph either keeps both heads, taking the k longest arms of A and the
    m - k longest of B, or is a spider centred at one head whose legs are that
    head's arms plus the route through the other head.
    """
    if m < 2:
        raise DomainError(f"m must be at least 2, got {m}")
    if ds.arm_count < m:
        raise DomainError(f"{ds.arm_count} arms cannot hold an {m}-double spider")
    a, b = ds.arms_a, ds.arms_b

    if m == 2:
        diameter = 1
        for arms, other in ((a, b), (b, a)):
            if len(arms) >= 2:
                diameter = max(diameter, arms[0] + arms[1])
            if arms:
                diameter = max(diameter, arms[0] + 1 + (other[0] if other else 0))
        return diameter >= 4

    for k in range(1, m):
        if k > len(a) or m - k > len(b):
            continue
        chosen_a, chosen_b = a[:k], b[: m - k]
        if k >= 2 and chosen_a[-1] + chosen_a[-2] < 2 * m:
            continue
        if m - k >= 2 and chosen_b[-1] + chosen_b[-2] < 2 * m:
            continue
        if chosen_a[-1] + chosen_b[-1] + 1 >= 2 * m:
            return True

    through_b = 1 + (b[0] if b else 0)
    through_a = 1 + (a[0] if a else 0)
    return _spread_apart((*a, through_b), m) or _spread_apart((*b, through_a), m)


def _exact(ds: DoubleSpider, m: int, budget: SearchBudget):
    return BurningSolver(build_double_spider(ds), budget).is_m_burnable(m)


def decide_double_spider(
    ds: DoubleSpider,
    m: int,
    budget: SearchBudget | None = None,
    witness_max_order: int = 40,
) -> SpiderDecision:
    """
    m-burnability of a double spider, answered from the known guarantees when
    they apply and by exact search otherwise.

    Positive guarantee-based answers still carry a witness from the exact
    solver when the order is at most witness_max_order and the budget allows.
    """
    if m < 2:
        raise DomainError(f"m must be at least 2, got {m}")
    budget = budget or unlimited()
    n = ds.arm_count
    order = ds.order

    if n < 2:
        burnable, reason = order <= m * m, "path"
    elif order > m * m + n - 2:
        burnable, reason = None, "exact"
    elif n < m:
        burnable, reason = True, "few-arms"
    elif m >= 3 and not has_hard_subspider(ds, m):
        burnable, reason = True, "no-hard-subspider"
    elif has_hard_subspider(ds, m):
        burnable, reason = False, "hard-subspider"
    else:
        burnable, reason = None, "exact"

    witness = None
    if burnable is None:
        decision = _exact(ds, m, budget)
        burnable, witness = decision.burnable, decision.witness
    elif burnable and order <= witness_max_order:
        try:
            decision = _exact(ds, m, budget)
        except BudgetExceeded:
            logger.warning("no witness for %s at m=%d within budget", ds, m)
        else:
            if not decision.burnable:
                logger.error("exact search disagrees with %s for %s at m=%d", reason, ds, m)
            witness = decision.witness
    return SpiderDecision(spider=ds, m=m, burnable=burnable, reason=reason, witness=witness)


def head_deadline_witness(
    ds: DoubleSpider, m: int, budget: SearchBudget | None = None
) -> HeadDeadlineWitness:
    """
    Burn ds in m rounds leaving min(l, m - 2) rounds after both heads burn
    (two arms) or min(l, m - 3) rounds (three or more), l the shortest arm.

    Raises:
        NoWitnessInBudget: the search ran out of budget
        DeadlineUnattainable: no sequence meets the deadline
    """
    n = ds.arm_count
    if not 2 <= n < m:
        raise DomainError(f"head deadlines need 2 <= n < m, got n={n}, m={m}")
    if ds.order > m * m + n - 2:
        raise DomainError(f"order {ds.order} exceeds {m * m + n - 2}")
    slack = m - 2 if n == 2 else m - 3
    required = min(ds.shortest_arm, slack)
    deadline = m - required

    g = build_double_spider(ds)
    try:
        decision = BurningSolver(g, budget).is_m_burnable(
            m, deadlines={HEAD_A: deadline, HEAD_B: deadline}
        )
    except BudgetExceeded as e:
        raise NoWitnessInBudget(f"head deadline search for {ds} at m={m}: {e}") from e
    if not decision.burnable:
        raise DeadlineUnattainable(f"{ds} cannot burn both heads by round {deadline} of {m}")

    outcome = simulate(g, decision.witness)
    heads_done = max(outcome.burned_at_round[HEAD_A], outcome.burned_at_round[HEAD_B])
    return HeadDeadlineWitness(
        m=m, sequence=decision.witness, rounds_after_heads=m - heads_done, required=required
    )


def tightness_spider(m: int, n: int) -> DoubleSpider:
    """A path of order m^2 + 1 with n - 2 leaves hung on its two middle vertices."""
    if m < 2 or n < 2:
        raise DomainError(f"needs m, n >= 2, got m={m}, n={n}")
    left = (m * m + 1) // 2 - 1
    right = m * m - 1 - left
    leaves = n - 2
    return DoubleSpider(
        arms_a=(left,) + (1,) * ((leaves + 1) // 2),
        arms_b=(right,) + (1,) * (leaves // 2),
    )


def _splits(arms: tuple[int, ...]):
    seen = set()
    for k in range(len(arms) + 1):
        for picked in itertools.combinations(range(len(arms)), k):
            side_a = tuple(arms[i] for i in picked)
            side_b = tuple(arms[i] for i in range(len(arms)) if i not in picked)
            spider = DoubleSpider(arms_a=side_a, arms_b=side_b).canonical()
            key = (spider.arms_a, spider.arms_b)
            if key not in seen:
                seen.add(key)
                yield spider


def double_spiders_of_order(order: int, n: int) -> list[DoubleSpider]:
    """Every n-double spider of the given order, one per head swap class."""
    found = {}
    for arms in partitions(order - 2, n):
        for spider in _splits(arms):
            found[(spider.arms_a, spider.arms_b)] = spider
    return [found[key] for key in sorted(found)]


def sample_double_spiders(order: int, n: int, samples: int, seed: int) -> list[DoubleSpider]:
    rng = np.random.default_rng(seed)
    total = order - 2
    found = []
    for _ in range(samples):
        cuts = np.sort(rng.choice(np.arange(1, total), size=n - 1, replace=False))
        arms = np.diff(np.concatenate(([0], cuts, [total])))
        heads = rng.integers(0, 2, size=n)
        found.append(
            DoubleSpider(
                arms_a=tuple(int(x) for x in arms[heads == 0]),
                arms_b=tuple(int(x) for x in arms[heads == 1]),
            ).canonical()
        )
    return found


def _check_instance(ds: DoubleSpider, m: int, budget_nodes: int | None) -> tuple[list[Violation], dict]:
    budget = SearchBudget(nodes=budget_nodes) if budget_nodes else unlimited()
    violations = []
    counts = {"instances": 1}
    try:
        if ds.arm_count < m:
            decision = decide_double_spider(ds, m, budget, witness_max_order=0)
            if not decision.burnable:
                violations.append(
                    Violation(instance=str(ds), m=m, expected="burnable", actual="not burnable")
                )
            witness = head_deadline_witness(ds, m, budget)
            if witness.rounds_after_heads < witness.required:
                violations.append(
                    Violation(
                        instance=str(ds),
                        m=m,
                        expected=f"{witness.required} rounds after heads",
                        actual=str(witness.rounds_after_heads),
                    )
                )
        else:
            hard = has_hard_subspider(ds, m)
            burnable = _exact(ds, m, budget).burnable
            counts["hard"] = int(hard)
            counts["burnable"] = int(burnable)
            if burnable == hard:
                violations.append(
                    Violation(
                        instance=str(ds),
                        m=m,
                        expected=f"hard={hard} so burnable={not hard}",
                        actual=f"burnable={burnable}",
                    )
                )
    except (DeadlineUnattainable, NoWitnessInBudget) as e:
        violations.append(Violation(instance=str(ds), m=m, expected="head deadline", actual=str(e)))
    except GraphBurnError as e:
        violations.append(Violation(instance=str(ds), m=m, expected="verdict", actual=str(e)))
    return violations, counts


def verify_double_spiders(
    m: int,
    n: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    jobs: int = 1,
    budget_nodes: int | None = None,
) -> VerificationReport:
    """
    Sweep the n-double spiders of order m^2 + n - 2.

    With n < m every instance must be m-burnable with the head deadline met.
    With n >= m >= 3 an instance must fail to be m-burnable exactly when it
    holds a hard subspider.
    """
    if n < 2 or m < 2 or (n >= m and m < 3):
        raise DomainError(f"no sweep for m={m}, n={n}")
    order = m * m + n - 2
    if mode == "exhaustive":
        instances = double_spiders_of_order(order, n)
    elif mode == "sampled":
        instances = sample_double_spiders(order, n, samples, seed)
    else:
        raise DomainError(f"unknown sweep mode {mode!r}")
    logger.info("checking %d double spiders with m=%d n=%d (%s)", len(instances), m, n, mode)

    results = map_jobs(partial(_check_instance, m=m, budget_nodes=budget_nodes), instances, jobs)
    counts: dict[str, int] = {}
    violations = []
    for found, instance_counts in results:
        violations.extend(found)
        for key, value in instance_counts.items():
            counts[key] = counts.get(key, 0) + value
    params = {"m": m, "n": n, "mode": mode}
    if mode == "sampled":
        params.update(samples=samples, seed=seed)
    return VerificationReport(
        kind="double-spiders",
        params=params,
        checked=len(instances),
        violations=sorted(violations, key=lambda v: v.instance),
        counts=counts,
    )
