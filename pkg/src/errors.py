class GraphBurnError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidPlacement(GraphBurnError, ValueError):
    def __init__(self, round_number: int, vertex: int):
        self.round_number = round_number
        self.vertex = vertex
        super().__init__(f"source {round_number} placed on burned vertex {vertex}")


class VertexOutOfRange(GraphBurnError, ValueError):
    pass


class DomainError(GraphBurnError, ValueError):
    pass


class PreconditionViolated(GraphBurnError, ValueError):
    pass


class NotSquareOrder(GraphBurnError, ValueError):
    pass


class GraphParseError(GraphBurnError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class BudgetExceeded(GraphBurnError, RuntimeError):
    """
    Raised when a search runs out of its node or time budget.

    lower/upper carry the best bounds known at the moment of interruption,
    when the caller has any.
    """

    def __init__(
        self,
        message: str,
        nodes: int = 0,
        lower: int | None = None,
        upper: int | None = None,
    ):
        self.nodes = nodes
        self.lower = lower
        self.upper = upper
        super().__init__(message)


class GuardExhausted(GraphBurnError, RuntimeError):
    pass


class NoWitnessInBudget(GraphBurnError, RuntimeError):
    pass


class DeadlineUnattainable(GraphBurnError, RuntimeError):
    """No burning sequence meets the head deadline: a verification failure."""
