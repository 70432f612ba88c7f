import logging
from pathlib import Path

import orjson

from models.domain import Verdict
from src.budget import SearchBudget
from src.cache import DeficiencyCache
from src.chainlab import certify_threshold
from src.utils import Settings

logger = logging.getLogger(__name__)


def state_path(settings: Settings) -> Path:
    return Path(settings.cache_path).with_name(f"explore-n{settings.explore_n}.json")


def load_state(settings: Settings) -> dict:
    path = state_path(settings)
    if path.exists():
        return orjson.loads(path.read_bytes())
    return {"n": settings.explore_n, "L": 1, "witness": None, "verdict": None, "frontier": []}


def explore_step(settings: Settings | None = None) -> dict:
    """
    Advance the threshold scan for settings.explore_n by one certification step.

    Progress lives in a JSON state file next to the deficiency cache, and the
    cache keeps every verdict, so a step cut short by its budget resumes
    cheaply on the next run.
    """
    settings = settings or Settings.from_env()
    state = load_state(settings)
    if state["verdict"] == Verdict.CERTIFIED.value:
        logger.info("n=%d already certified at L=%d", state["n"], state["L"])
        return state

    budget = SearchBudget(nodes=settings.node_budget, seconds=settings.explore_minutes * 60)
    cache = DeficiencyCache(settings.cache_path)
    result = certify_threshold(
        state["n"],
        state["L"],
        settings.chain_nodes,
        settings.chain_max_m,
        budget,
        cache,
        expand=False,
        stop_at_first=True,
    )
    state["verdict"] = result.verdict.value
    if result.verdict is Verdict.COUNTEREXAMPLE:
        state["witness"] = list(result.witness.lengths)
        state["L"] = result.witness.forest.shortest + 1
        state["frontier"] = []
    elif result.verdict is Verdict.INCONCLUSIVE:
        state["frontier"] = result.frontier
    logger.info("n=%d exploration step: %s, next L=%d", state["n"], state["verdict"], state["L"])

    path = state_path(settings)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(orjson.dumps(state, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
    return state
