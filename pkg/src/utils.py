import math
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor

from pydantic import BaseModel, Field

from src.budget import SearchBudget

VERSION = "0.3.0"


def get_env_variable(env_key, default=None):
    if os.environ.get(env_key):
        return os.environ[env_key]
    return default


def _optional_float(value):
    return float(value) if value not in (None, "") else None


class Settings(BaseModel):
    """Typed view of the GRAPHBURN_* environment variables."""

    node_budget: int | None = Field(default=5_000_000, gt=0)
    time_budget: float | None = Field(default=None, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    jobs: int = Field(default=1, ge=1)
    cache_path: str = "data/deficiency.cache"
    witness_max_order: int = Field(default=40, ge=0)
    chain_nodes: int = Field(default=5_000, gt=0)
    chain_max_m: int = Field(default=40, gt=0)
    explore_n: int = Field(default=5, ge=2)
    explore_minutes: int = Field(default=60, gt=0)

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            node_budget=int(get_env_variable("GRAPHBURN_NODE_BUDGET", 5_000_000)),
            time_budget=_optional_float(get_env_variable("GRAPHBURN_TIME_BUDGET")),
            seed=int(get_env_variable("GRAPHBURN_SEED", 0)),
            jobs=int(get_env_variable("GRAPHBURN_JOBS", 1)),
            cache_path=get_env_variable("GRAPHBURN_CACHE", "data/deficiency.cache"),
            witness_max_order=int(get_env_variable("GRAPHBURN_WITNESS_MAX_ORDER", 40)),
            chain_nodes=int(get_env_variable("GRAPHBURN_CHAIN_NODES", 5_000)),
            chain_max_m=int(get_env_variable("GRAPHBURN_CHAIN_MAX_M", 40)),
            explore_n=int(get_env_variable("GRAPHBURN_EXPLORE_N", 5)),
            explore_minutes=int(get_env_variable("GRAPHBURN_EXPLORE_MINUTES", 60)),
        )

    def budget(self) -> SearchBudget:
        return SearchBudget(nodes=self.node_budget, seconds=self.time_budget)


def map_jobs(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    """Map fn over items, in worker processes when jobs > 1. Order is preserved."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def parse_range(text: str) -> list[int]:
    """Parse an inclusive range `a..b` (or a single integer) into a list."""
    text = text.strip()
    if ".." in text:
        low, high = text.split("..", 1)
        start, stop = int(low), int(high)
        if stop < start:
            raise ValueError(f"empty range {text!r}")
        return list(range(start, stop + 1))
    return [int(text)]


def parse_lengths(text: str) -> list[int]:
    """Parse a comma list like `17,15,4`."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"not a comma list of integers: {text!r}") from e
    if not values or any(v <= 0 for v in values):
        raise ValueError(f"lengths must be positive integers: {text!r}")
    return values


def ceil_sqrt(value: int) -> int:
    """Exact ceil(sqrt(value)) for value >= 0."""
    root = math.isqrt(value)
    return root if root * root == value else root + 1


def partitions(total: int, parts: int, minimum: int = 1, maximum: int | None = None):
    """
    Nonincreasing tuples of `parts` integers in [minimum, maximum] summing to total.

    Tuples come out in descending lexicographic order.
    """
    if maximum is None:
        maximum = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    low = max(minimum, -(-total // parts))
    high = min(maximum, total - minimum * (parts - 1))
    for first in range(high, low - 1, -1):
        for rest in partitions(total - first, parts - 1, minimum, first):
            yield (first, *rest)
