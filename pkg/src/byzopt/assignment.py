"""Job assignment matrices: sparsity parameter and error-correction capability.

An assignment matrix is a nonnegative k x n matrix with unit column sums;
column i gives the weights of agent i's local objective over the k input
functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AssignmentMatrix",
    "SparsityReport",
    "ConstructionError",
    "identity",
    "repetition",
    "sparsest",
    "construct_sparsest",
    "sparsity_by_definition",
    "sparsity_by_row_zeros",
    "decoding_capability",
]

COLUMN_SUM_TOL = 1e-12
RANK_RTOL = 1e-9


class ConstructionError(ValueError):
    """A requested matrix construction is infeasible."""


@dataclass(frozen=True)
class AssignmentMatrix:
    """Nonnegative k x n matrix with columns summing to 1."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2:
            raise ValueError("assignment matrix must be 2-dimensional")
        object.__setattr__(self, "entries", arr)
        arr.setflags(write=False)
        if np.any(arr < 0):
            raise ValueError("assignment matrix entries must be nonnegative")
        sums = arr.sum(axis=0)
        bad = np.abs(sums - 1.0) > COLUMN_SUM_TOL
        if np.any(bad):
            cols = [int(c) + 1 for c in np.flatnonzero(bad)]
            raise ValueError(f"columns {cols} do not sum to 1 (tol {COLUMN_SUM_TOL})")

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def column(self, i: int) -> np.ndarray:
        """Weights of agent i (1-based)."""
        return self.entries[:, i - 1]


def identity(k: int) -> AssignmentMatrix:
    return AssignmentMatrix(np.eye(k))


def repetition(k: int, copies: int) -> AssignmentMatrix:
    """k stacked repetition blocks: each input function assigned to `copies` agents."""
    if copies < 1:
        raise ConstructionError("repetition needs at least one copy per function")
    return AssignmentMatrix(np.kron(np.eye(k), np.ones((1, copies))))


@dataclass(frozen=True)
class SparsityReport:
    """Sparsity parameter together with a witness.

    For value <= n the witness is a (value-1)-subset of columns (1-based)
    whose sum has a zero coordinate; for value == n+1 it is all n columns.
    """

    value: int
    witness: tuple[int, ...]
    max_row_zeros: int


def sparsity_by_definition(a: AssignmentMatrix) -> SparsityReport:
    """Smallest m such that every m columns sum to a componentwise-positive
    vector; n+1 by convention when even all columns together fail."""
    arr = a.entries
    n = a.n
    zeros_per_row = (arr == 0).sum(axis=1)
    max_row_zeros = int(zeros_per_row.max())
    for m in range(1, n + 1):
        bad = _failing_subset(arr, m)
        if bad is None:
            witness = _failing_subset(arr, m - 1) if m > 1 else ()
            return SparsityReport(m, witness if witness else (), max_row_zeros)
    return SparsityReport(n + 1, tuple(range(1, n + 1)), max_row_zeros)


def _failing_subset(arr: np.ndarray, m: int) -> tuple[int, ...] | None:
    """Some m-subset of columns whose sum has a zero coordinate, else None."""
    if m == 0:
        return None
    n = arr.shape[1]
    for cols in itertools.combinations(range(n), m):
        if np.any(arr[:, cols].sum(axis=1) == 0):
            return tuple(c + 1 for c in cols)
    return None


def sparsity_by_row_zeros(a: AssignmentMatrix) -> SparsityReport:
    """Equivalent computation: 1 + the maximum number of zeros in any row."""
    arr = a.entries
    zero_mask = arr == 0
    zeros_per_row = zero_mask.sum(axis=1)
    max_row_zeros = int(zeros_per_row.max())
    value = max_row_zeros + 1
    row = int(zeros_per_row.argmax())
    witness = tuple(int(c) + 1 for c in np.flatnonzero(zero_mask[row]))
    return SparsityReport(value, witness, max_row_zeros)


def construct_sparsest(k: int, n: int, s: int, pattern_seed: int = 0,
                       pattern: Sequence[Sequence[int]] | None = None
                       ) -> AssignmentMatrix:
    """Matrix with exactly s-1 zeros per row, hence sparsity parameter s.

    Zero positions are drawn from `pattern_seed` unless an explicit
    `pattern` (one tuple of 1-based zero columns per row) is given.
    Nonzero entries are filled with equal weight and columns normalized.
    A zero pattern that empties some column is rejected, naming the column.
    """
    if not 1 <= s <= n:
        raise ConstructionError(f"need 1 <= s <= n, got s={s}, n={n}")
    if pattern is None:
        rng = np.random.default_rng(pattern_seed)
        pattern = [tuple(sorted(rng.choice(n, size=s - 1, replace=False) + 1))
                   for _ in range(k)]
    else:
        pattern = [tuple(row) for row in pattern]
        if len(pattern) != k or any(len(row) != s - 1 for row in pattern):
            raise ConstructionError(
                f"pattern must give s-1={s - 1} zero columns for each of {k} rows")
    arr = np.ones((k, n))
    for r, zero_cols in enumerate(pattern):
        for c in zero_cols:
            if not 1 <= c <= n:
                raise ConstructionError(f"zero column {c} out of range 1..{n}")
            arr[r, c - 1] = 0.0
    col_mass = arr.sum(axis=0)
    dead = np.flatnonzero(col_mass == 0)
    if dead.size:
        raise ConstructionError(
            f"zero pattern leaves column {int(dead[0]) + 1} with no nonzero entry")
    return AssignmentMatrix(arr / col_mass)


def sparsest(k: int, n: int, s: int, seed: int = 0) -> AssignmentMatrix:
    """Named constructor used by configs; retries seeds derived from `seed`
    until the drawn zero pattern is feasible."""
    for attempt in range(64):
        try:
            return construct_sparsest(k, n, s, pattern_seed=seed + attempt)
        except ConstructionError:
            continue
    raise ConstructionError(
        f"no feasible zero pattern found for k={k}, n={n}, s={s} from seed {seed}")


def decoding_capability(a: AssignmentMatrix, f: int, rtol: float = RANK_RTOL) -> bool:
    """True iff every k x (n-2f) submatrix obtained by deleting 2f columns
    has rank k.  Equivalent to: distinct messages d, d' produce codewords
    dA, d'A differing in at least 2f+1 coordinates, so errors on up to f
    coordinates are uniquely decodable.
    """
    if f < 0:
        raise ValueError("fault bound f must be nonnegative")
    k, n = a.k, a.n
    if n - 2 * f < k:
        return False
    if f == 0:
        return _rank(a.entries, rtol) == k
    for cols in itertools.combinations(range(n), 2 * f):
        keep = [c for c in range(n) if c not in cols]
        if _rank(a.entries[:, keep], rtol) < k:
            return False
    return True


def _rank(m: np.ndarray, rtol: float) -> int:
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rtol * sv[0]))
