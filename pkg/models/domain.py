from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Graph(BaseModel):
    """Undirected simple graph on vertices 0..vertex_count-1."""

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=0)
    edges: frozenset[tuple[int, int]] = frozenset()

    @field_validator("edges", mode="before")
    @classmethod
    def _normalize_edges(cls, value):
        normalized = set()
        for u, v in value:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            normalized.add((min(u, v), max(u, v)))
        return frozenset(normalized)

    @model_validator(mode="after")
    def _endpoints_in_range(self):
        for u, v in self.edges:
            if u < 0 or v >= self.vertex_count:
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.vertex_count - 1}")
        return self

    @property
    def order(self) -> int:
        return self.vertex_count


class BurningSequence(BaseModel):
    """Source t (1-based) is placed at sources[t-1] at the start of round t."""

    model_config = ConfigDict(frozen=True)

    sources: tuple[int, ...]

    @field_validator("sources")
    @classmethod
    def _distinct(cls, value):
        if len(set(value)) != len(value):
            raise ValueError("burning sources must be distinct")
        return value

    def __len__(self):
        return len(self.sources)


class BurnOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    # None when some vertex never burns
    rounds_elapsed: int | None
    fully_burned: bool
    burned_at_round: tuple[int | None, ...]
    # round whose source landed on a burned vertex (non-strict replay only)
    invalid_round: int | None = None


class BurnDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int
    burnable: bool
    witness: BurningSequence | None = None
    nodes: int = 0


class PathForest(BaseModel):
    """Multiset of path orders, kept sorted in nonincreasing order."""

    model_config = ConfigDict(frozen=True)

    lengths: tuple[int, ...] = Field(min_length=1)

    @field_validator("lengths")
    @classmethod
    def _sorted_positive(cls, value):
        if any(length < 1 for length in value):
            raise ValueError("path orders must be positive")
        return tuple(sorted(value, reverse=True))

    @property
    def order(self) -> int:
        return sum(self.lengths)

    @property
    def path_count(self) -> int:
        return len(self.lengths)

    @property
    def shortest(self) -> int:
        return self.lengths[-1]

    def __str__(self):
        return ",".join(map(str, self.lengths))


class RadiiAssignment(BaseModel):
    """
    Disjoint sets of odd coverage lengths from {1, 3, ..., 2m-1}, one per path.

    sets[i] covers the path of order lengths[i]; a source placed in round t
    burns 2(m - t) + 1 vertices of a path.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    lengths: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]

    @field_validator("sets")
    @classmethod
    def _sort_sets(cls, value):
        return tuple(tuple(sorted(part, reverse=True)) for part in value)

    @model_validator(mode="after")
    def _check(self):
        if len(self.sets) != len(self.lengths):
            raise ValueError("one odd set per path is required")
        seen = set()
        for part, length in zip(self.sets, self.lengths, strict=True):
            for odd in part:
                if odd % 2 == 0 or not 1 <= odd <= 2 * self.m - 1:
                    raise ValueError(f"{odd} is not an odd value in 1..{2 * self.m - 1}")
                if odd in seen:
                    raise ValueError(f"odd value {odd} used twice")
                seen.add(odd)
            if sum(part) < length:
                raise ValueError(f"set {part} does not cover a path of order {length}")
        return self

    @property
    def used(self) -> set[int]:
        return {odd for part in self.sets for odd in part}


class ExceptionClause(str, Enum):
    NONE = "none"
    I = "I"  # noqa: E741
    II = "II"
    III = "III"


class Prediction(BaseModel):
    model_config = ConfigDict(frozen=True)

    burnable_by: str | None = None

    @property
    def covered(self) -> bool:
        return self.burnable_by is not None


class PathForestDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    forest: PathForest
    m: int
    burnable: bool
    assignment: RadiiAssignment | None = None


class DoubleSpider(BaseModel):
    """Two adjacent heads A and B; arms are listed per head, longest first."""

    model_config = ConfigDict(frozen=True)

    arms_a: tuple[int, ...] = ()
    arms_b: tuple[int, ...] = ()

    @field_validator("arms_a", "arms_b")
    @classmethod
    def _sorted_positive(cls, value):
        if any(arm < 1 for arm in value):
            raise ValueError("arm lengths must be positive")
        return tuple(sorted(value, reverse=True))

    @property
    def arm_count(self) -> int:
        return len(self.arms_a) + len(self.arms_b)

    @property
    def order(self) -> int:
        return 2 + sum(self.arms_a) + sum(self.arms_b)

    @property
    def arms(self) -> tuple[int, ...]:
        return tuple(sorted(self.arms_a + self.arms_b, reverse=True))

    @property
    def shortest_arm(self) -> int | None:
        arms = self.arms
        return arms[-1] if arms else None

    def canonical(self) -> "DoubleSpider":
        if (self.arms_b, len(self.arms_b)) > (self.arms_a, len(self.arms_a)):
            return DoubleSpider(arms_a=self.arms_b, arms_b=self.arms_a)
        return self

    def __str__(self):
        return f"{','.join(map(str, self.arms_a))}/{','.join(map(str, self.arms_b))}"


class SpiderDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    spider: DoubleSpider
    m: int
    burnable: bool
    reason: str
    witness: BurningSequence | None = None


class HeadDeadlineWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int
    sequence: BurningSequence
    rounds_after_heads: int = Field(ge=0)
    required: int = Field(ge=0)


class SquareForest(BaseModel):
    """A path forest whose order is exactly m^2."""

    model_config = ConfigDict(frozen=True)

    forest: PathForest
    m: int = Field(ge=1)

    @model_validator(mode="after")
    def _square_order(self):
        if self.forest.order != self.m * self.m:
            raise ValueError(f"order {self.forest.order} is not {self.m}^2")
        return self

    @property
    def lengths(self) -> tuple[int, ...]:
        return self.forest.lengths


class NodeStatus(str, Enum):
    EXPANDED = "expanded"
    CLOSED = "closed"
    OPEN_BUDGET = "open_budget"


class PrecNode(BaseModel):
    forest: SquareForest
    deficient: bool = True
    status: NodeStatus = NodeStatus.OPEN_BUDGET
    children: list["PrecNode"] = Field(default_factory=list)


class PrecTree(BaseModel):
    root: PrecNode
    node_count: int
    max_m: int
    open_count: int

    @property
    def finite(self) -> bool:
        return self.open_count == 0


class ExchangePartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    prefix_lengths: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]

    @field_validator("parts")
    @classmethod
    def _sort_parts(cls, value):
        return tuple(tuple(sorted(part)) for part in value)

    @model_validator(mode="after")
    def _check(self):
        if not len(self.prefix_lengths) == len(self.parts) == len(self.offsets):
            raise ValueError("prefix lengths, parts and offsets must align")
        if sum(self.offsets) != 0:
            raise ValueError("offsets must sum to zero")
        values = [value for part in self.parts for value in part]
        if len(values) != len(set(values)):
            raise ValueError("parts must be pairwise disjoint")
        return self


class Verdict(str, Enum):
    CERTIFIED = "certified"
    COUNTEREXAMPLE = "counterexample"
    INCONCLUSIVE = "inconclusive"


class CertificationEvidence(BaseModel):
    n: int
    L: int  # noqa: N815
    threshold_m: int
    seeds: list[tuple[int, ...]] = Field(default_factory=list)
    tree_sizes: dict[str, int] = Field(default_factory=dict)
    max_m_reached: int = 0
    verdict: Verdict
    # set when every tree closed, i.e. H_def(n, L) was enumerated completely
    deficient_members: int | None = None
    max_shortest_path: int | None = None


class CertificationResult(BaseModel):
    verdict: Verdict
    evidence: CertificationEvidence
    witness: SquareForest | None = None
    frontier: list[int] = Field(default_factory=list)


class ThresholdResult(BaseModel):
    n: int
    verdict: Verdict
    L: int | None = None  # noqa: N815
    witness: SquareForest | None = None
    evidence: CertificationEvidence | None = None
    steps: int = 0


PrecNode.model_rebuild()
