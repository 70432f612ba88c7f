from typing import Any, Literal

from pydantic import BaseModel, Field

from src.utils import VERSION


class QueryBurn(BaseModel):
    graph: str  # path:16, spider:5,5,6, dspider:5,5/6
    m: int | None = Field(default=None, ge=1)


class QueryPathForest(BaseModel):
    lengths: list[int] = Field(min_length=1)
    m: int = Field(ge=1)


class QueryDoubleSpider(BaseModel):
    arms_a: list[int] = Field(default_factory=list)
    arms_b: list[int] = Field(default_factory=list)
    m: int = Field(ge=2)
    witness: bool = False


class QueryChain(BaseModel):
    lengths: list[int] = Field(min_length=1)
    node_budget: int | None = Field(default=None, gt=0)
    max_m: int | None = Field(default=None, gt=0)


class QueryThreshold(BaseModel):
    n: int = Field(ge=2)
    L: int | None = Field(default=None, ge=1)  # noqa: N815


class Violation(BaseModel):
    instance: str
    m: int
    expected: str
    actual: str


class VerificationReport(BaseModel):
    """Outcome of an exhaustive or sampled sweep; sorted so merges are order independent."""

    kind: str
    params: dict[str, Any] = Field(default_factory=dict)
    checked: int = 0
    violations: list[Violation] = Field(default_factory=list)
    counts: dict[str, int] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        counts = dict(self.counts)
        for key, value in other.counts.items():
            counts[key] = counts.get(key, 0) + value
        return VerificationReport(
            kind=self.kind,
            params=self.params,
            checked=self.checked + other.checked,
            violations=sorted(
                [*self.violations, *other.violations], key=lambda v: (v.m, v.instance)
            ),
            counts=counts,
        )


class RunConfig(BaseModel):
    """Everything that determines a run; embedded in every report."""

    command: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    node_budget: int | None = Field(default=None, gt=0)
    time_budget: float | None = Field(default=None, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    jobs: int = Field(default=1, ge=1)
    output_format: Literal["json", "csv", "text"] = "json"
    cache_path: str | None = None


class Report(BaseModel):
    config: RunConfig
    version: str = VERSION
    status: Literal["completed", "inconclusive"] = "completed"
    result: dict[str, Any] = Field(default_factory=dict)
    rows: list[dict[str, Any]] = Field(default_factory=list)
