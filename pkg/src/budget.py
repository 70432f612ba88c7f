import time

from src.errors import BudgetExceeded


class SearchBudget:
    """
    Node and wall-clock allowance shared by the exact searches.

    Args:
        nodes: maximum node expansions (None = unlimited)
        seconds: maximum wall-clock seconds (None = unlimited)
    """

    def __init__(self, nodes: int | None = None, seconds: float | None = None):
        if nodes is not None and nodes <= 0:
            raise ValueError("node budget must be positive")
        if seconds is not None and seconds <= 0:
            raise ValueError("time budget must be positive")
        self.nodes = nodes
        self.seconds = seconds
        self.used = 0
        self._deadline = None if seconds is None else time.monotonic() + seconds

    def tick(self, count: int = 1):
        self.used += count
        if self.nodes is not None and self.used > self.nodes:
            raise BudgetExceeded(f"node budget of {self.nodes} exhausted", nodes=self.used)
        # clock reads are cheap but not free
        if self._deadline is not None and self.used % 256 == 0 and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time budget of {self.seconds}s exhausted", nodes=self.used)

    @property
    def exhausted(self) -> bool:
        if self.nodes is not None and self.used >= self.nodes:
            return True
        return self._deadline is not None and time.monotonic() > self._deadline


def unlimited() -> SearchBudget:
    return SearchBudget()
