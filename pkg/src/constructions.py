"""
Constructive allocations of odd burning lengths.

The allocators build explicit radii assignments for path forests with long
paths. The exchange routines rearrange prefixes of disjoint odd sequences so
that each part's sum moves by a prescribed offset. Infinite sequences are
represented by a finite window of their first terms; running past the window
raises GuardExhausted.
"""

import logging

from models.domain import ExchangePartition, RadiiAssignment
from src.errors import GuardExhausted, PreconditionViolated

logger = logging.getLogger(__name__)


class OddSequence:
    """The first len(terms) terms of a strictly increasing sequence of odd integers."""

    def __init__(self, terms, name: str = ""):
        self.terms = tuple(int(t) for t in terms)
        self.name = name
        for previous, current in zip(self.terms, self.terms[1:], strict=False):
            if current <= previous:
                raise PreconditionViolated(f"sequence {name or self.terms[:5]} is not strictly increasing")
        if any(t % 2 == 0 for t in self.terms):
            raise PreconditionViolated(f"sequence {name or self.terms[:5]} has an even term")

    @classmethod
    def progression(cls, start: int, step: int, guard: int) -> "OddSequence":
        if step <= 0 or step % 2:
            raise PreconditionViolated(f"step must be positive and even, got {step}")
        return cls((start + step * i for i in range(guard)), name=f"{start}+{step}i")

    @classmethod
    def round_robin(cls, n: int, guard: int, start: int = 1) -> list["OddSequence"]:
        """Deal the odd numbers from start onwards to n sequences in turn."""
        return [cls.progression(start + 2 * j, 2 * n, guard) for j in range(n)]

    @property
    def guard(self) -> int:
        return len(self.terms)

    def term(self, index: int) -> int:
        """1-based term lookup inside the window."""
        if not 1 <= index <= len(self.terms):
            raise GuardExhausted(f"term {index} of {self.name or 'sequence'} is past the guard window")
        return self.terms[index - 1]

    def prefix(self, count: int) -> tuple[int, ...]:
        if count > len(self.terms):
            raise GuardExhausted(f"prefix of {count} terms is past the guard window of {len(self.terms)}")
        return self.terms[:count]

    def tail(self, skip: int) -> "OddSequence":
        return OddSequence(self.terms[skip:], name=f"{self.name}[{skip}:]")

    def __len__(self):
        return len(self.terms)


def allocate_even_paths(lengths) -> tuple[int, RadiiAssignment]:
    """
    Burn paths of even orders l_1 >= ... >= l_n >= 8n plus one residual path.

    Path i gets {2t_i - 1, 2(n + i) - 1} where l_i = (2t_i - 1) + (2(n + i) - 1),
    m = t_1, and the residual path of order m^2 - sum(l) takes the rest, which
    includes the n smallest odds.
    """
    lengths = sorted(lengths, reverse=True)
    n = len(lengths)
    if n == 0:
        raise PreconditionViolated("at least one path is required")
    if any(length % 2 for length in lengths):
        raise PreconditionViolated(f"all path orders must be even: {lengths}")
    if lengths[-1] < 8 * n:
        raise PreconditionViolated(f"every path order must be at least {8 * n}: {lengths}")

    pairs = []
    for i, length in enumerate(lengths, start=1):
        small = 2 * (n + i) - 1
        pairs.append((length - small, small))
    m = (pairs[0][0] + 1) // 2
    used = {odd for pair in pairs for odd in pair}
    residual = tuple(odd for odd in range(2 * m - 1, 0, -2) if odd not in used)
    assignment = RadiiAssignment(
        m=m,
        lengths=(*lengths, m * m - sum(lengths)),
        sets=(*pairs, residual),
    )
    return m, assignment


def allocate_long_paths(lengths) -> tuple[int, RadiiAssignment]:
    """
    Burn paths of orders at least 10n - 1 plus one residual path.

    The i-th odd order gives up 2i - 1 so every order becomes even and at
    least 8n; once the even allocation is done, odd 2i - 1 moves from the
    residual path back to the i-th odd path. The residual path is dropped when
    nothing is left of it.
    """
    lengths = list(lengths)
    n = len(lengths)
    if n == 0:
        raise PreconditionViolated("at least one path is required")
    if min(lengths) < 10 * n - 1:
        raise PreconditionViolated(f"every path order must be at least {10 * n - 1}: {lengths}")

    reserved: dict[int, int] = {}
    reduced = []
    for index, length in enumerate(lengths):
        if length % 2:
            odd = 2 * len(reserved) + 1
            reserved[index] = odd
            length -= odd
        reduced.append(length)

    m, even = allocate_even_paths(reduced)
    # allocate_even_paths sorts; match each reduced order back to a path
    pool: dict[int, list[tuple[int, ...]]] = {}
    for length, part in zip(even.lengths[:-1], even.sets[:-1], strict=True):
        pool.setdefault(length, []).append(part)
    sets = []
    for index, length in enumerate(reduced):
        part = pool[length].pop()
        if index in reserved:
            part = (*part, reserved[index])
        sets.append(part)
    moved = set(reserved.values())
    residual = tuple(odd for odd in even.sets[-1] if odd not in moved)
    residual_order = m * m - sum(lengths)
    if residual_order:
        lengths_out = (*lengths, residual_order)
        sets_out = (*sets, residual)
    else:
        lengths_out, sets_out = tuple(lengths), tuple(sets)
    return m, RadiiAssignment(m=m, lengths=lengths_out, sets=sets_out)


def _exchange_two(a: OddSequence, b: OddSequence, x: int) -> tuple[int, int, list[int], list[int]]:
    if x == 0:
        return 0, 0, [], []
    if x > 0 and x % 2 == 0:
        k = x // 2
        b_index = {value: i for i, value in enumerate(b.terms, start=1)}
        picked = [i for i, value in enumerate(a.terms, start=1) if value + 2 in b_index][:k]
        if len(picked) < k:
            raise GuardExhausted(f"only {len(picked)} of {k} exchange patterns inside the guard window")
        n_a = picked[-1]
        n_b = b_index[a.term(n_a) + 2]
        swapped = {a.term(i) for i in picked}
        raised = {value + 2 for value in swapped}
        c = [value for value in a.prefix(n_a) if value not in swapped] + sorted(raised)
        d = [value for value in b.prefix(n_b) if value not in raised] + sorted(swapped)
        return n_a, n_b, c, d

    # shift by a prefix of a until the offset is even and nonnegative
    total = x
    for shift in range(1, len(a) + 1):
        total += a.term(shift)
        if total >= 0 and total % 2 == 0:
            n_a, n_b, c, d = _exchange_two(a.tail(shift), b, total)
            return shift + n_a, n_b, c, d + list(a.prefix(shift))
    raise GuardExhausted(f"no prefix of the guard window makes offset {x} even and nonnegative")


def exchange_two(a: OddSequence, b: OddSequence, x: int) -> ExchangePartition:
    """
    Split the first N1 terms of a and N2 terms of b into C and D with
    sum(C) = sum(a[:N1]) + x and sum(D) = sum(b[:N2]) - x.

    Even positive offsets swap the least x/2 terms a_i with a_i + 2 in b.
    Other offsets first hand a prefix of a to D.
    """
    if set(a.terms) & set(b.terms):
        raise PreconditionViolated("sequences share a term")
    n_a, n_b, c, d = _exchange_two(a, b, x)
    return ExchangePartition(prefix_lengths=(n_a, n_b), parts=(tuple(c), tuple(d)), offsets=(x, -x))


def _check_cover(seqs: list[OddSequence]):
    seen: set[int] = set()
    for seq in seqs:
        if seen & set(seq.terms):
            raise PreconditionViolated("sequences share a term")
        seen.update(seq.terms)
    if not seen:
        raise PreconditionViolated("sequences are empty")
    low = min(seen)
    high = min(seq.terms[-1] for seq in seqs if seq.terms)
    missing = [odd for odd in range(low, high + 1, 2) if odd not in seen]
    if missing:
        raise PreconditionViolated(f"odd {missing[0]} is in no sequence")


def _patterns(source: OddSequence, target: OddSequence) -> int:
    values = set(target.terms)
    return sum(1 for value in source.terms if value + 2 in values)


def _exchange_many(seqs: list[OddSequence], xs: list[int]) -> tuple[list[int], list[list[int]]]:
    n = len(seqs)
    if n == 2:
        n_a, n_b, c, d = _exchange_two(seqs[0], seqs[1], xs[0])
        return [n_a, n_b], [c, d]

    last = seqs[-1]
    partner = max(range(n - 1), key=lambda j: (_patterns(seqs[j], last), -j))
    order = [j for j in range(n - 1) if j != partner] + [partner, n - 1]
    seqs = [seqs[j] for j in order]
    xs = [xs[j] for j in order]

    p, q = seqs[-2], seqs[-1]
    limit = min(p.terms[-1], q.terms[-1])
    merged = OddSequence(sorted(t for t in p.terms + q.terms if t <= limit), name="merged")
    lengths, parts = _exchange_many([*seqs[:-2], merged], [*xs[:-2], xs[-2] + xs[-1]])

    used = set(merged.prefix(lengths[-1]))
    m_p = sum(1 for t in p.terms if t in used)
    m_q = sum(1 for t in q.terms if t in used)
    x = -sum(q.prefix(m_q)) - xs[-1]
    n_p, n_q, d1, d2 = _exchange_two(p.tail(m_p), q.tail(m_q), x)

    lengths = [*lengths[:-1], m_p + n_p, m_q + n_q]
    parts = [*parts[:-1], parts[-1] + d1, d2]
    restored_lengths = [0] * n
    restored_parts: list[list[int]] = [[] for _ in range(n)]
    for position, j in enumerate(order):
        restored_lengths[j] = lengths[position]
        restored_parts[j] = parts[position]
    return restored_lengths, restored_parts


def exchange_many(seqs: list[OddSequence], xs) -> ExchangePartition:
    """
    Split prefixes of n disjoint odd sequences, which together cover every odd
    number from their least term on, into parts C_j with
    sum(C_j) = sum(prefix_j) + x_j.

    Two sequences reduce to exchange_two. Otherwise the sequence with the most
    patterns z, z + 2 into the last one is merged with it, the n - 1 problem is
    solved, and the merged part is split again with exchange_two. Finally
    every prefix is extended to all of its terms up to the largest term used,
    so the used terms are consecutive odd numbers.
    """
    xs = list(xs)
    if len(seqs) < 2 or len(seqs) != len(xs):
        raise PreconditionViolated("need n >= 2 sequences and one offset per sequence")
    if sum(xs) != 0:
        raise PreconditionViolated(f"offsets must sum to zero, got {sum(xs)}")
    _check_cover(seqs)

    lengths, parts = _exchange_many(list(seqs), xs)
    top = max((max(part) for part in parts if part), default=0)
    for j, seq in enumerate(seqs):
        while lengths[j] < len(seq) and seq.terms[lengths[j]] <= top:
            parts[j].append(seq.terms[lengths[j]])
            lengths[j] += 1
        if lengths[j] == len(seq) and seq.terms[-1] < top:
            raise GuardExhausted("guard window too short to close the used prefix")
    logger.debug("exchange over %d sequences used terms up to %d", len(seqs), top)
    return ExchangePartition(
        prefix_lengths=tuple(lengths),
        parts=tuple(tuple(part) for part in parts),
        offsets=tuple(xs),
    )


def exchange_problems(seqs: list[OddSequence], partition: ExchangePartition) -> list[str]:
    """Invariant violations of a partition against the sequences it came from (empty if sound)."""
    problems = []
    prefixes = [seq.prefix(count) for seq, count in zip(seqs, partition.prefix_lengths, strict=True)]
    if sorted(v for part in partition.parts for v in part) != sorted(v for p in prefixes for v in p):
        problems.append("parts do not cover the prefixes exactly")
    for j, (prefix, part, x) in enumerate(zip(prefixes, partition.parts, partition.offsets, strict=True)):
        if sum(part) != sum(prefix) + x:
            problems.append(f"part {j} sums to {sum(part)}, expected {sum(prefix) + x}")
    return problems
