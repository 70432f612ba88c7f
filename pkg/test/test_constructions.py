import numpy as np
import pytest

from src.constructions import (
    OddSequence,
    allocate_even_paths,
    allocate_long_paths,
    exchange_many,
    exchange_problems,
    exchange_two,
)
from src.errors import GuardExhausted, PreconditionViolated
from src.pathforest import is_burnable


@pytest.fixture
def residues_mod4():
    """Fixture for the odd numbers split by residue mod 4"""
    return OddSequence.round_robin(2, guard=400)


def test_odd_sequence_validation():
    """Test sequences must be odd and strictly increasing"""
    with pytest.raises(PreconditionViolated):
        OddSequence([1, 4, 5])
    with pytest.raises(PreconditionViolated):
        OddSequence([3, 1])
    with pytest.raises(PreconditionViolated):
        OddSequence.progression(1, 3, 5)


def test_odd_sequence_guard():
    """Test lookups past the guard window raise GuardExhausted"""
    seq = OddSequence.progression(1, 4, 3)
    assert seq.terms == (1, 5, 9)
    assert seq.term(1) == 1
    assert seq.prefix(2) == (1, 5)
    assert seq.tail(1).terms == (5, 9)
    with pytest.raises(GuardExhausted):
        seq.term(4)
    with pytest.raises(GuardExhausted):
        seq.term(0)
    with pytest.raises(GuardExhausted):
        seq.prefix(4)


def test_round_robin():
    """Test round robin deals consecutive odds in turn"""
    a, b = OddSequence.round_robin(2, guard=5)
    assert a.terms == (1, 5, 9, 13, 17)
    assert b.terms == (3, 7, 11, 15, 19)


def test_allocate_even_paths():
    """Test the even-path allocation for two paths of order 16"""
    m, assignment = allocate_even_paths([16, 16])
    assert m == 6
    assert assignment.lengths == (16, 16, 4)
    assert assignment.sets == ((11, 5), (9, 7), (3, 1))


def test_allocate_even_paths_single():
    """Test the even-path allocation for one path"""
    m, assignment = allocate_even_paths([8])
    assert m == 3
    assert assignment.sets == ((5, 3), (1,))


@pytest.mark.parametrize("lengths", [[15], [8, 8], []])
def test_allocate_even_paths_preconditions(lengths):
    """Test odd or short orders are rejected"""
    with pytest.raises(PreconditionViolated):
        allocate_even_paths(lengths)


def test_allocate_long_paths():
    """Test odd orders hand one small odd back after the even allocation"""
    m, assignment = allocate_long_paths([19, 20])
    assert m == 8
    assert assignment.lengths == (19, 20, 25)
    assert assignment.sets == ((11, 7, 1), (15, 5), (13, 9, 3))
    assert is_burnable(assignment.lengths, m)


def test_allocate_long_paths_preconditions():
    """Test orders below 10n - 1 are rejected"""
    with pytest.raises(PreconditionViolated):
        allocate_long_paths([18, 30])


def test_allocations_cover_exactly():
    """Test allocations use each odd once and cover every path exactly"""
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        lengths = [int(x) for x in rng.integers(10 * n - 1, 12 * n + 40, size=n)]
        m, assignment = allocate_long_paths(lengths)
        assert sum(assignment.lengths) == m * m
        for part, length in zip(assignment.sets, assignment.lengths, strict=True):
            assert sum(part) == length
        assert assignment.used == set(range(1, 2 * m, 2))


def test_exchange_two_even_offset(residues_mod4):
    """Test an even offset swaps the least term with its successor"""
    a, b = residues_mod4
    partition = exchange_two(a, b, 2)
    assert partition.prefix_lengths == (1, 1)
    assert partition.parts == ((3,), (1,))


def test_exchange_two_negative_offset(residues_mod4):
    """Test an odd negative offset hands a prefix of a to D"""
    a, b = residues_mod4
    partition = exchange_two(a, b, -1)
    assert partition.prefix_lengths == (1, 0)
    assert partition.parts == ((), (1,))


def test_exchange_two_zero(residues_mod4):
    """Test a zero offset uses nothing"""
    a, b = residues_mod4
    partition = exchange_two(a, b, 0)
    assert partition.prefix_lengths == (0, 0)


def test_exchange_two_shared_term():
    """Test overlapping sequences are rejected"""
    with pytest.raises(PreconditionViolated):
        exchange_two(OddSequence([1, 3]), OddSequence([3, 5]), 2)


def test_exchange_two_guard():
    """Test too few patterns inside the window raise GuardExhausted"""
    with pytest.raises(GuardExhausted):
        exchange_two(OddSequence([1, 5]), OddSequence([3, 7]), 20)


def test_exchange_two_seeded_instances():
    """Test 500 random offsets against the sum invariant"""
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(2, 4))
        seqs = OddSequence.round_robin(n, guard=400)
        j = int(rng.integers(0, n - 1))
        a, b = seqs[j], seqs[j + 1]
        x = int(rng.integers(-40, 41))
        partition = exchange_two(a, b, x)
        assert exchange_problems([a, b], partition) == []


def test_exchange_many_seeded_instances():
    """Test random offset vectors against the sum invariant and closed prefixes"""
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(2, 5))
        seqs = OddSequence.round_robin(n, guard=3000)
        xs = [int(x) for x in rng.integers(-10, 11, size=n - 1)]
        xs.append(-sum(xs))
        partition = exchange_many(seqs, xs)
        assert exchange_problems(seqs, partition) == []
        used = sorted(value for part in partition.parts for value in part)
        assert used == list(range(1, 2 * len(used), 2))


def _random_split(rng, n, window):
    owners = rng.integers(0, n, size=window)
    owners[:n] = rng.permutation(n)
    return [
        OddSequence([2 * i + 1 for i in range(window) if owners[i] == j], name=f"part{j}")
        for j in range(n)
    ]


def _offsets(rng, n, bound=15):
    while True:
        xs = [int(x) for x in rng.integers(-bound, bound + 1, size=n - 1)]
        if abs(sum(xs)) <= bound:
            return [*xs, -sum(xs)]


def test_exchange_many_random_splits():
    """Test 500 random splits of the odd numbers; a short guard window may only fail loudly"""
    rng = np.random.default_rng(2022)
    solved = exhausted = 0
    for _ in range(500):
        n = int(rng.integers(2, 6))
        seqs = _random_split(rng, n, window=2000)
        xs = _offsets(rng, n)
        try:
            partition = exchange_many(seqs, xs)
        except GuardExhausted:
            exhausted += 1
            continue
        solved += 1
        assert partition.offsets == tuple(xs)
        assert exchange_problems(seqs, partition) == []
        used = sorted(value for part in partition.parts for value in part)
        assert used == list(range(1, 2 * len(used), 2))
    assert solved + exhausted == 500
    assert solved > 0


def test_exchange_many_three_sequences():
    """Test a small exchange over three sequences"""
    seqs = OddSequence.round_robin(3, guard=100)
    partition = exchange_many(seqs, [2, -2, 0])
    assert partition.prefix_lengths == (1, 1, 0)
    assert partition.parts == ((3,), (1,), ())


def test_exchange_many_preconditions():
    """Test offsets must sum to zero and the sequences must cover the odds"""
    seqs = OddSequence.round_robin(3, guard=10)
    with pytest.raises(PreconditionViolated):
        exchange_many(seqs, [1, 1, 1])
    with pytest.raises(PreconditionViolated):
        exchange_many(seqs[:1], [0])
    gap = [OddSequence.progression(1, 4, 10), OddSequence.progression(7, 4, 10)]
    with pytest.raises(PreconditionViolated):
        exchange_many(gap, [2, -2])
