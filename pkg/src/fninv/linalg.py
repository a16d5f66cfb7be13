"""Exact matrix algebra over a prime field.

Column indices in the public API are 1-based (``e_1`` is the first unit
vector), matching domain labels in [n].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InfeasibleSystem, ScaleLimit, SizeMismatch
from .field import PrimeField
from .rng import Rng

#: Largest p**b that the exhaustive oracles will enumerate.
ENUMERATION_CAP = 1 << 20


class Mat:
    """An a x b matrix over a prime field; immutable once built."""

    __slots__ = ("field", "entries")

    def __init__(self, entries, field: PrimeField, cols: int | None = None):
        arr = np.array(entries, dtype=np.int64)
        if arr.size == 0:
            if cols is None:
                cols = arr.shape[1] if arr.ndim == 2 else 0
            arr = np.zeros((0, cols), dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise SizeMismatch(f"matrix needs >= 1 column, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr % field.modulus)
        arr.setflags(write=False)
        self.field = field
        self.entries = arr

    @classmethod
    def empty(cls, cols: int, field: PrimeField) -> "Mat":
        return cls(np.zeros((0, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, k: int, field: PrimeField) -> "Mat":
        return cls(np.eye(k, dtype=np.int64), field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def p(self) -> int:
        return self.field.modulus

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.field.modulus, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"Mat({self.entries.tolist()}, p={self.p})"

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def to_json(self) -> dict:
        return {"modulus": self.p, "cols": self.cols, "rows": self.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Mat":
        return cls(obj["rows"], PrimeField(obj["modulus"]), cols=obj.get("cols"))


@dataclass(frozen=True)
class RrefResult:
    rref: Mat
    rank: int
    leading_cols: tuple[int, ...]  # 1-based, increasing


@dataclass(frozen=True)
class CoverSets:
    s_a: frozenset[int]
    s_b: frozenset[int]


def stack(A: Mat, B: Mat) -> Mat:
    if A.field != B.field or A.cols != B.cols:
        raise SizeMismatch("stack needs equal fields and column counts")
    return Mat(np.vstack([A.entries, B.entries]), A.field)


def _rref_array(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    work = np.array(arr, dtype=np.int64, order="C")
    pivots = kernels.rref_inplace(work, p)
    return work, pivots


def rref(A: Mat) -> RrefResult:
    """Row canonical form; pivot = leftmost column, topmost eligible row."""
    work, pivots = _rref_array(A.entries, A.p)
    return RrefResult(Mat(work, A.field), len(pivots), tuple(c + 1 for c in pivots))


def rank(A: Mat) -> int:
    return rref(A).rank


def _as_vector(v, length: int, p: int) -> np.ndarray:
    vec = np.asarray(v, dtype=np.int64).reshape(-1) % p
    if vec.shape[0] != length:
        raise SizeMismatch(f"vector has length {vec.shape[0]}, expected {length}")
    return vec


def in_span(A: Mat, v) -> bool:
    """Is ``v`` a linear combination of A's rows?"""
    vec = _as_vector(v, A.cols, A.p)
    with_v = np.vstack([A.entries, vec[None, :]])
    return len(_rref_array(with_v, A.p)[1]) == rank(A)


def unit_vector(j: int, length: int) -> np.ndarray:
    e = np.zeros(length, dtype=np.int64)
    e[j - 1] = 1
    return e


def spanned_units(A: Mat) -> frozenset[int]:
    """E(A) = {j : e_j in Span(A)} via one rank test per column."""
    r = rank(A)
    out = set()
    for j in range(1, A.cols + 1):
        with_e = np.vstack([A.entries, unit_vector(j, A.cols)[None, :]])
        if len(_rref_array(with_e, A.p)[1]) == r:
            out.add(j)
    return frozenset(out)


def spanned_units_rref(A: Mat) -> frozenset[int]:
    """E(A) read off the row canonical form: j such that e_j is a row of it."""
    work, pivots = _rref_array(A.entries, A.p)
    return frozenset(_units_from_rref(work, pivots))


def _units_from_rref(work: np.ndarray, pivots: list[int]) -> list[int]:
    out = []
    for r, c in enumerate(pivots):
        if np.count_nonzero(work[r]) == 1:
            out.append(c + 1)
    return out


def solution_count(A: Mat, v) -> int:
    """Number of w in F^b with A w = v: 0 or p^(b - rank A)."""
    vec = _as_vector(v, A.rows, A.p)
    aug = np.hstack([A.entries, vec[:, None]])
    _, pivots = _rref_array(aug, A.p)
    if pivots and pivots[-1] == A.cols:
        return 0
    return A.p ** (A.cols - len(pivots))


def is_consistent(A: Mat, v) -> bool:
    return solution_count(A, v) > 0


def enumerate_vectors(p: int, b: int) -> np.ndarray:
    """All of F_p^b as a (p^b, b) array in lexicographic order."""
    if p**b > ENUMERATION_CAP:
        raise ScaleLimit(f"{p}^{b} exceeds enumeration cap {ENUMERATION_CAP}")
    if b == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(p), repeat=b)), dtype=np.int64)


def conditional_coord_dist(A: Mat, v, j: int) -> list[Fraction]:
    """Exact law of f_j given A f = v, for f uniform over F^b.

    Enumerates all of F^b, so this is an oracle for small p^b only.
    """
    p, b = A.p, A.cols
    vec = _as_vector(v, A.rows, p)
    if not is_consistent(A, vec):
        raise InfeasibleSystem("v is not in Im(A)")
    allv = enumerate_vectors(p, b)
    sol = allv[((allv @ A.entries.T) % p == vec[None, :]).all(axis=1)]
    counts = np.bincount(sol[:, j - 1], minlength=p)
    total = int(counts.sum())
    return [Fraction(int(c), total) for c in counts]


def cover_sets(A: Mat, B: Mat) -> CoverSets:
    """Leading-one columns of A, and the new ones contributed by stacking B."""
    if A.cols != B.cols or A.field != B.field:
        raise SizeMismatch("cover_sets needs equal column counts")
    s_a = frozenset(rref(A).leading_cols)
    s_e = frozenset(rref(stack(A, B)).leading_cols)
    return CoverSets(s_a, s_e - s_a)


def solve_particular(A: Mat, v) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Row-reduced augmented system, for sampling the affine solution set.

    Returns ``(reduced [A|v], free column indices, pivot columns)``, all
    0-based. Raises InfeasibleSystem when v is not in Im(A).
    """
    vec = _as_vector(v, A.rows, A.p)
    aug = np.hstack([A.entries, vec[:, None]])
    work, pivots = _rref_array(aug, A.p)
    if pivots and pivots[-1] == A.cols:
        raise InfeasibleSystem("v is not in Im(A)")
    free = np.array([c for c in range(A.cols) if c not in set(pivots)], dtype=np.int64)
    return work, free, pivots


def sample_solutions(A: Mat, v, size: int, rng: Rng) -> np.ndarray:
    """``size`` uniform solutions of A w = v as a (size, b) field array.

    Free variables are drawn uniformly; each pivot variable is then forced.
    """
    p, b = A.p, A.cols
    work, free, pivots = solve_particular(A, v)
    out = np.zeros((size, b), dtype=np.int64)
    if free.size:
        out[:, free] = rng.integers(p, (size, free.size))
    for r, c in enumerate(pivots):
        rhs = work[r, b]
        coeffs = work[r, free] if free.size else np.zeros(0, dtype=np.int64)
        out[:, c] = (rhs - out[:, free] @ coeffs) % p if free.size else rhs
    return out


def matrix_from_rows(rows: Sequence[Sequence[int]], field: PrimeField, cols: int) -> Mat:
    if len(rows) == 0:
        return Mat.empty(cols, field)
    return Mat(rows, field)
