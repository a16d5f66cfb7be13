"""Prime fields, function tables over [n], and the [n] <-> field mapping.

Domain points are 1-based labels in ``[n] = {1, ..., n}``. The fixed
mapping to field (or Z_n) elements is ``x -> x - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NonPrimeModulus, SizeMismatch
from .rng import Rng


def is_prime(p: int) -> bool:
    """Trial division; fine for the desk-scale moduli used here."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    modulus: int

    def __post_init__(self):
        if self.modulus < 2 or not is_prime(self.modulus):
            raise NonPrimeModulus(f"{self.modulus} is not prime")

    @property
    def size(self) -> int:
        return self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def inv(self, a: int) -> int:
        if a % self.modulus == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.modulus - 2, self.modulus)

    def neg(self, a: int) -> int:
        return (-a) % self.modulus


def make_field(p: int) -> PrimeField:
    if p < 2:
        raise NonPrimeModulus(f"field size must be >= 2, got {p}")
    return PrimeField(p)


def to_field(x: int) -> int:
    """Domain label in [n] to its field/group element."""
    return x - 1


def from_field(e: int) -> int:
    return e + 1


@dataclass(frozen=True)
class FnTable:
    """A function f: [n] -> [n] stored as the vector (f(1), ..., f(n))."""

    n: int
    values: tuple[int, ...]
    _array: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) != self.n:
            raise SizeMismatch(f"table has {len(vals)} entries, expected {self.n}")
        if self.n < 1 or any(v < 1 or v > self.n for v in vals):
            raise DomainError("table entries must lie in [n]")
        object.__setattr__(self, "values", vals)
        arr = np.asarray(vals, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)

    @classmethod
    def of(cls, values: Sequence[int]) -> "FnTable":
        return cls(len(values), tuple(values))

    def __call__(self, x: int) -> int:
        return self.values[x - 1]

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.values)

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 view of the labels."""
        return self._array


def sample_function(n: int, rng: Rng) -> FnTable:
    if n < 1:
        raise DomainError("n must be >= 1")
    return FnTable(n, tuple(rng.integers(n, n) + 1))


def sample_tables(n: int, count: int, rng: Rng) -> np.ndarray:
    """``count`` independent uniform tables as a (count, n) label array."""
    return rng.integers(n, (count, n)) + 1


def image(f: FnTable) -> set[int]:
    return set(f.values)


def preimage(f: FnTable, y: int) -> set[int]:
    return {x for x, v in enumerate(f.values, start=1) if v == y}


def smallest_preimage(f: FnTable, y: int) -> int | None:
    for x, v in enumerate(f.values, start=1):
        if v == y:
            return x
    return None


def add_pointwise(f1: FnTable, f2: FnTable) -> FnTable:
    """Pointwise sum in Z_n acting on labels via ``x -> x - 1``."""
    if f1.n != f2.n:
        raise SizeMismatch(f"n mismatch: {f1.n} vs {f2.n}")
    n = f1.n
    return FnTable(n, tuple((a + b - 2) % n + 1 for a, b in zip(f1.values, f2.values)))


def neg_pointwise(f: FnTable) -> FnTable:
    n = f.n
    return FnTable(n, tuple((-(v - 1)) % n + 1 for v in f.values))


def zero_function(n: int) -> FnTable:
    return FnTable(n, (from_field(0),) * n)


def binary_entropy(delta: float) -> float:
    """h(delta) in bits, with h(0) = h(1) = 0."""
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"binary entropy needs delta in [0, 1], got {delta}")
    if delta == 0.0 or delta == 1.0:
        return 0.0
    return -delta * math.log2(delta) - (1.0 - delta) * math.log2(1.0 - delta)


def dumps_table(f: FnTable) -> str:
    return f"{f.n}\n{' '.join(str(v) for v in f.values)}\n"


def loads_table(text: str) -> FnTable:
    tokens = text.split()
    if not tokens:
        raise DomainError("empty table text")
    n = int(tokens[0])
    return FnTable(n, tuple(int(t) for t in tokens[1:]))


def all_functions(n: int) -> Iterable[FnTable]:
    """Every f in [n]^n in lexicographic order; only for tiny n."""
    import itertools

    for vals in itertools.product(range(1, n + 1), repeat=n):
        yield FnTable(n, vals)
