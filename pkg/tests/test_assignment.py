"""Assignment matrices: sparsity parameter, construction, decoding capability."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from byzopt.assignment import (
    AssignmentMatrix,
    ConstructionError,
    construct_sparsest,
    decoding_capability,
    identity,
    repetition,
    sparsest,
    sparsity_by_definition,
    sparsity_by_row_zeros,
)


def random_assignment(rng, k, n):
    """Random nonnegative column-stochastic matrix with a random zero pattern."""
    arr = rng.uniform(0.1, 1.0, size=(k, n))
    mask = rng.random(size=(k, n)) < rng.uniform(0.0, 0.6)
    arr[mask] = 0.0
    dead = arr.sum(axis=0) == 0
    arr[rng.integers(0, k, size=int(dead.sum())), np.flatnonzero(dead)] = 1.0
    return AssignmentMatrix(arr / arr.sum(axis=0))


# ---------------------------------------------------------------------------
# Matrix invariants
# ---------------------------------------------------------------------------

def test_rejects_negative_entries():
    with pytest.raises(ValueError):
        AssignmentMatrix(np.array([[1.5, 1.0], [-0.5, 0.0]]))


def test_rejects_bad_column_sum():
    with pytest.raises(ValueError, match="columns"):
        AssignmentMatrix(np.array([[0.5, 0.5], [0.4, 0.5]]))


def test_named_constructors():
    assert np.array_equal(identity(3).entries, np.eye(3))
    rep = repetition(2, 3)
    assert rep.k == 2 and rep.n == 6
    assert np.array_equal(rep.entries[0], [1, 1, 1, 0, 0, 0])


# ---------------------------------------------------------------------------
# Sparsity parameter
# ---------------------------------------------------------------------------

def test_sparsity_strictly_positive_is_one():
    a = AssignmentMatrix(np.full((2, 3), [0.5, 0.25, 0.75]) * [[1], [1]]
                         / np.array([1.0, 0.5, 1.5]))
    # simpler: just normalize a positive matrix
    arr = np.array([[0.3, 0.6, 0.2], [0.7, 0.4, 0.8]])
    a = AssignmentMatrix(arr)
    assert sparsity_by_definition(a).value == 1
    assert sparsity_by_definition(a).witness == ()


def test_sparsity_identity_is_k():
    a = identity(4)
    rep = sparsity_by_definition(a)
    assert rep.value == 4
    assert len(rep.witness) == 3


def test_sparsity_zero_row_is_n_plus_one():
    arr = np.array([[1.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
    rep = sparsity_by_definition(AssignmentMatrix(arr))
    assert rep.value == 4
    assert rep.witness == (1, 2, 3)
    assert sparsity_by_row_zeros(AssignmentMatrix(arr)).value == 4


def test_row_zero_example():
    a = AssignmentMatrix(np.array([[0.5, 0.0, 1.0], [0.5, 1.0, 0.0]]))
    assert sparsity_by_row_zeros(a).value == 2
    assert sparsity_by_definition(a).value == 2


def test_row_zeros_identity():
    assert sparsity_by_row_zeros(identity(3)).value == 3


def test_witness_sum_has_zero_coordinate():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a = random_assignment(rng, rng.integers(1, 7), rng.integers(1, 7))
        rep = sparsity_by_definition(a)
        if 1 < rep.value <= a.n:
            cols = [c - 1 for c in rep.witness]
            assert len(cols) == rep.value - 1
            assert np.any(a.entries[:, cols].sum(axis=1) == 0)


def test_sparsity_agreement_randomized():
    rng = np.random.default_rng(42)
    for _ in range(300):
        a = random_assignment(rng, rng.integers(1, 7), rng.integers(1, 7))
        assert sparsity_by_definition(a).value == sparsity_by_row_zeros(a).value


# ---------------------------------------------------------------------------
# Sparsest construction
# ---------------------------------------------------------------------------

def test_construct_single_row_no_zeros():
    a = construct_sparsest(1, 3, 1)
    assert np.array_equal(a.entries, [[1.0, 1.0, 1.0]])


def test_construct_k2_n4_s2():
    a = construct_sparsest(2, 4, 2, pattern=[(1,), (2,)])
    assert sparsity_by_definition(a).value == 2
    assert int((a.entries != 0).sum()) == (4 - 2 + 1) * 2


def test_construct_diagonal_pattern_gives_identity():
    a = construct_sparsest(3, 3, 3, pattern=[(2, 3), (1, 3), (1, 2)])
    assert np.array_equal(a.entries, np.eye(3))


def test_construct_infeasible_names_column():
    with pytest.raises(ConstructionError, match="column 1"):
        construct_sparsest(2, 2, 2, pattern=[(1,), (1,)])


@given(st.integers(1, 4), st.integers(1, 6), st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_construct_sparsest_properties(k, n, seed):
    s = seed % n + 1
    try:
        a = construct_sparsest(k, n, s, pattern_seed=seed)
    except ConstructionError:
        return
    assert a.k == k and a.n == n
    assert sparsity_by_definition(a).value == s
    assert int((a.entries != 0).sum()) == (n - s + 1) * k


def test_sparsest_retries_to_feasible():
    a = sparsest(3, 4, 3, seed=0)
    assert sparsity_by_definition(a).value == 3
    # infeasible for every pattern: (n-s+1)k = 3 nonzeros < n = 4 columns
    with pytest.raises(ConstructionError):
        sparsest(3, 4, 4, seed=0)


# ---------------------------------------------------------------------------
# Decoding capability
# ---------------------------------------------------------------------------

def min_codeword_distance(a, probes):
    """Independent oracle: minimum Hamming weight of dA over probe messages d."""
    best = a.n + 1
    for d in probes:
        w = int(np.count_nonzero(np.abs(d @ a.entries) > 1e-12))
        if w > 0:
            best = min(best, w)
    return best


def test_capability_repetition_true():
    assert decoding_capability(repetition(1, 3), 1)


def test_capability_two_copies_false():
    assert not decoding_capability(repetition(1, 2), 1)


def test_capability_stacked_blocks_oracle_decides():
    a = repetition(2, 3)  # two stacked 3-copy blocks, k=2, n=6
    verdict = decoding_capability(a, 1)
    # oracle: unique decoding under <= f errors iff min distance >= 2f+1;
    # probe all sign/zero patterns of message differences
    probes = [np.array(p, dtype=float)
              for p in itertools.product((-1.0, 0.0, 1.0, 0.5), repeat=2)
              if any(p)]
    assert (min_codeword_distance(a, probes) >= 3) == verdict
    assert verdict  # each block keeps a column after any 2 erasures


def test_capability_f0_iff_full_rank():
    rng = np.random.default_rng(7)
    for _ in range(30):
        a = random_assignment(rng, rng.integers(1, 5), rng.integers(1, 7))
        assert decoding_capability(a, 0) == (
            np.linalg.matrix_rank(a.entries) == a.k)


def test_capability_monotone_in_f():
    rng = np.random.default_rng(9)
    for _ in range(30):
        a = random_assignment(rng, rng.integers(1, 4), rng.integers(2, 8))
        verdicts = [decoding_capability(a, f) for f in range(0, 3)]
        for lo, hi in zip(verdicts, verdicts[1:]):
            assert lo or not hi
