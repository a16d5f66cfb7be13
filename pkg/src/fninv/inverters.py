"""Inverter models: adaptive and non-adaptive (preprocess, queries, decode)
triples, affine decoders, and success measurement.

An adaptive decoder receives an oracle handle that answers point queries to
f and enforces the query budget; a non-adaptive one receives the answers to
the positions chosen up front by its query selector.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import bits as B
from .errors import BudgetExceeded, NonPrimeModulus, SizeMismatch, SparsityViolation
from .field import FnTable, PrimeField, add_pointwise, all_functions, from_field, sample_function, to_field
from .rng import Rng

Advice = str
Oracle = Callable[[int], int]


class QueryOracle:
    """Point-query access to f with a per-invocation budget."""

    __slots__ = ("_f", "budget", "count")

    def __init__(self, f: FnTable | Callable[[int], int], budget: int):
        self._f = f
        self.budget = budget
        self.count = 0

    def __call__(self, x: int) -> int:
        if self.count >= self.budget:
            raise BudgetExceeded(f"decoder exceeded its budget of {self.budget} queries")
        self.count += 1
        return self._f(x)


@dataclass(frozen=True)
class AdaptiveInverter:
    """(P, Dec) with ``P: FnTable -> s bits`` and an oracle-aided decoder.

    ``advice_add`` is the declared advice group operation when the
    preprocessing is claimed linear; ``None`` otherwise.
    """

    n: int
    s: int
    q: int
    preprocess: Callable[[FnTable], Advice]
    decode: Callable[[int, Advice, Oracle], int]
    advice_add: Callable[[Advice, Advice], Advice] | None = None
    descriptor: Mapping = field(default_factory=dict)

    def advice(self, f: FnTable) -> Advice:
        a = self.preprocess(f)
        if len(a) != self.s:
            raise SizeMismatch(f"advice has {len(a)} bits, declared s={self.s}")
        return a

    def invert(self, y: int, f: FnTable | Oracle, advice: Advice) -> tuple[int, int]:
        """Run the decoder; returns (output, queries used)."""
        oracle = QueryOracle(f, self.q)
        x = self.decode(y, advice, oracle)
        return x, oracle.count


@dataclass(frozen=True)
class AffineForm:
    """x = <alpha, f> + beta over the field; alpha keyed by 1-based position."""

    alpha: Mapping[int, int]
    beta: int

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(k for k, c in self.alpha.items() if c))


@dataclass(frozen=True)
class AffineDecoderSpec:
    """The (alpha_y^a, beta_y^a) family of an affine decoder."""

    field: PrimeField
    q: int
    form: Callable[[int, Advice], AffineForm]


@dataclass(frozen=True)
class NonAdaptiveInverter:
    n: int
    s: int
    q: int
    preprocess: Callable[[FnTable], Advice]
    queries: Callable[[int, Advice], tuple[int, ...]]
    decode: Callable[[int, Advice, tuple[int, ...]], int]
    affine: AffineDecoderSpec | None = None
    descriptor: Mapping = field(default_factory=dict)

    def advice(self, f: FnTable) -> Advice:
        a = self.preprocess(f)
        if len(a) != self.s:
            raise SizeMismatch(f"advice has {len(a)} bits, declared s={self.s}")
        return a

    def invert(self, y: int, f: FnTable, advice: Advice) -> tuple[int, int]:
        pos = self.queries(y, advice)
        if len(pos) != self.q:
            raise SizeMismatch(f"query selector returned {len(pos)} positions, q={self.q}")
        answers = tuple(f(r) for r in pos)
        return self.decode(y, advice, answers), self.q


Inverter = AdaptiveInverter | NonAdaptiveInverter


def _no_advice(f: FnTable) -> Advice:
    return ""


# ---------------------------------------------------------------- adaptive


@functools.lru_cache(maxsize=256)
def _unpack_table(advice: str, width: int) -> tuple[int, ...]:
    return tuple(v + 1 for v in B.unpack_words(advice, width))


def full_table_inverter(n: int, rule: str = "smallest") -> AdaptiveInverter:
    """The trivial s = n*ceil(log2 n), q = 0 inverter.

    Advice is f written componentwise over Z_n, so ``P`` is linear under
    componentwise Z_n addition of advice words. Decoding returns the
    smallest (or largest) preimage, or ``y`` itself on an empty fiber.
    """
    width = B.word_bits(n)

    def preprocess(f: FnTable) -> Advice:
        return B.pack_words((to_field(v) for v in f.values), width)

    def decode(y: int, advice: Advice, oracle: Oracle) -> int:
        table = _unpack_table(advice, width) if width else (1,) * n
        hits = [x for x, v in enumerate(table, start=1) if v == y]
        if not hits:
            return y
        return hits[0] if rule == "smallest" else hits[-1]

    def advice_add(a: Advice, b: Advice) -> Advice:
        return B.add_words(a, b, width, n) if width else ""

    return AdaptiveInverter(
        n=n,
        s=n * width,
        q=0,
        preprocess=preprocess,
        decode=decode,
        advice_add=advice_add,
        descriptor={"kind": "full-table", "n": n, "rule": rule},
    )


def max_index_inverter(n: int) -> AdaptiveInverter:
    """Advice = position of the (first) maximum of f; claims a Z_n advice group.

    Not linear; exists so the linearity checker has a known offender.
    """
    width = B.word_bits(n)

    def preprocess(f: FnTable) -> Advice:
        return B.int_to_bits(int(np.argmax(f.array)), width)

    def decode(y: int, advice: Advice, oracle: Oracle) -> int:
        return y

    return AdaptiveInverter(
        n=n,
        s=width,
        q=0,
        preprocess=preprocess,
        decode=decode,
        advice_add=lambda a, b: B.add_words(a, b, width, n),
        descriptor={"kind": "max-index", "n": n},
    )


def null_inverter(n: int) -> AdaptiveInverter:
    """Full-table advice, but answers with a non-preimage whenever one exists."""
    base = full_table_inverter(n)
    width = B.word_bits(n)

    def decode(y: int, advice: Advice, oracle: Oracle) -> int:
        table = _unpack_table(advice, width) if width else (1,) * n
        for x, v in enumerate(table, start=1):
            if v != y:
                return x
        return 1

    return AdaptiveInverter(n, base.s, 0, base.preprocess, decode, base.advice_add, {"kind": "null", "n": n})


def find_linearity_violation(inv: AdaptiveInverter, trials: int, rng: Rng):
    """Search random pairs for P(f1 + f2) != P(f1) + P(f2).

    Returns the first offending ``(f1, f2)`` or ``None``.
    """
    if inv.advice_add is None:
        raise ValueError("inverter declares no advice group")
    for _ in range(trials):
        f1 = sample_function(inv.n, rng)
        f2 = sample_function(inv.n, rng)
        lhs = inv.preprocess(add_pointwise(f1, f2))
        rhs = inv.advice_add(inv.preprocess(f1), inv.preprocess(f2))
        if lhs != rhs:
            return f1, f2
    return None


def check_linear_preprocessing(inv: AdaptiveInverter, trials: int, rng: Rng) -> bool:
    return find_linearity_violation(inv, trials, rng) is None


# ----------------------------------------------------------- non-adaptive


def eval_affine_decoder(spec: AffineDecoderSpec, y: int, advice: Advice, f: FnTable) -> int:
    """from_field(<alpha, to_field(f)> + beta) for the form at (y, advice)."""
    if spec.field.modulus != f.n:
        raise SizeMismatch("affine decoders need field size n")
    form = spec.form(y, advice)
    if len(form.support) > spec.q:
        raise SparsityViolation(f"alpha has {len(form.support)} nonzeros, q={spec.q}")
    p = spec.field.modulus
    acc = form.beta
    for pos, c in form.alpha.items():
        acc += c * to_field(f(pos))
    return from_field(acc % p)


def affine_inverter(
    field_: PrimeField,
    forms: Callable[[int], AffineForm],
    q: int,
    descriptor: Mapping | None = None,
) -> NonAdaptiveInverter:
    """Zero-advice non-adaptive inverter whose decoder is the affine map ``forms(y)``.

    Queries are the support of alpha padded (with position 1) to length q.
    """
    n = field_.modulus
    p = n

    def queries(y: int, advice: Advice) -> tuple[int, ...]:
        sup = forms(y).support
        if len(sup) > q:
            raise SparsityViolation(f"alpha has {len(sup)} nonzeros, q={q}")
        return sup + (1,) * (q - len(sup))

    def decode(y: int, advice: Advice, answers: tuple[int, ...]) -> int:
        form = forms(y)
        acc = form.beta
        for pos, ans in zip(form.support, answers):
            acc += form.alpha[pos] * to_field(ans)
        return from_field(acc % p)

    spec = AffineDecoderSpec(field_, q, lambda y, a: forms(y))
    return NonAdaptiveInverter(n, 0, q, _no_advice, queries, decode, spec, dict(descriptor or {}))


def zero_advice_affine_inverter(g: Sequence[int] | Callable[[int], int], n: int | None = None) -> NonAdaptiveInverter:
    """s = 0, q = 1: answer challenge y with f(g(y)); alpha_y = e_{g(y)}, beta = 0."""
    if callable(g):
        if n is None:
            raise ValueError("n is required when g is callable")
        table = tuple(g(y) for y in range(1, n + 1))
    else:
        table = tuple(int(v) for v in g)
        n = len(table)
    gmap = table

    def forms(y: int) -> AffineForm:
        return AffineForm({gmap[y - 1]: 1}, 0)

    def queries(y: int, advice: Advice) -> tuple[int, ...]:
        return (gmap[y - 1],)

    def decode(y: int, advice: Advice, answers: tuple[int, ...]) -> int:
        return answers[0]

    try:
        spec = AffineDecoderSpec(PrimeField(n), 1, lambda y, a: forms(y))
    except NonPrimeModulus:
        # composite n: still a valid inverter, just no field structure
        spec = None
    return NonAdaptiveInverter(n, 0, 1, _no_advice, queries, decode, spec, {"kind": "zero-advice-affine", "n": n, "g": list(gmap)})


def affine_tables(inv: NonAdaptiveInverter) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (idx, coef, beta) arrays for a zero-advice affine inverter.

    ``idx[y-1]`` lists 0-based support positions (padded -1), ``coef`` the
    matching coefficients; this is the layout the chain kernel consumes.
    """
    if inv.affine is None or inv.s != 0:
        raise ValueError("need a zero-advice inverter with an affine decoder")
    n, q = inv.n, max(inv.q, 1)
    idx = np.full((n, q), -1, dtype=np.int64)
    coef = np.zeros((n, q), dtype=np.int64)
    beta = np.zeros(n, dtype=np.int64)
    for y in range(1, n + 1):
        form = inv.affine.form(y, "")
        sup = form.support
        if len(sup) > inv.q:
            raise SparsityViolation(f"alpha_{y} has {len(sup)} nonzeros, q={inv.q}")
        for k, pos in enumerate(sup):
            idx[y - 1, k] = pos - 1
            coef[y - 1, k] = form.alpha[pos] % n
        beta[y - 1] = form.beta % n
    return idx, coef, beta


# ------------------------------------------------------------- measurement


def _invert(inv: Inverter, y: int, f: FnTable, advice: Advice) -> int:
    return inv.invert(y, f, advice)[0]


def success_probability(
    inv: Inverter,
    f: FnTable,
    mode: str = "exact",
    trials: int = 0,
    rng: Rng | None = None,
) -> Fraction | float:
    """Pr over x <- [n] that Inv(f(x); f) lands in f^{-1}(f(x)).

    ``mode="exact"`` enumerates every x and returns a Fraction;
    ``mode="mc"`` samples ``trials`` inputs and returns a float.
    """
    advice = inv.advice(f)
    if mode == "exact":
        hits = sum(f(_invert(inv, f(x), f, advice)) == f(x) for x in range(1, f.n + 1))
        return Fraction(hits, f.n)
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None or trials <= 0:
        raise ValueError("mc mode needs trials > 0 and an rng")
    xs = rng.integers(f.n, trials) + 1
    hits = 0
    for x in xs.tolist():
        y = f(x)
        hits += f(_invert(inv, y, f, advice)) == y
    return hits / trials


def uniform_challenge_success(inv: Inverter, f: FnTable, trials: int, rng: Rng) -> float:
    """Pr over uniform y in [n] that f(Inv(y; f)) = y (y need not be an image)."""
    advice = inv.advice(f)
    ys = rng.integers(f.n, trials) + 1
    hits = sum(f(_invert(inv, y, f, advice)) == y for y in ys.tolist())
    return hits / trials


def average_success_exact(inv: Inverter, n: int) -> Fraction:
    """Success probability averaged over every f in [n]^n (tiny n only)."""
    total = Fraction(0)
    count = 0
    for f in all_functions(n):
        total += success_probability(inv, f, "exact")
        count += 1
    return total / count


@dataclass(frozen=True)
class ChainState:
    """Challenges Y_j, answers X_j = Inv(Y_j; f), and flags Z_j."""

    challenges: tuple[int, ...]
    answers: tuple[int, ...]
    flags: tuple[bool, ...]


def run_chain(inv: NonAdaptiveInverter, f: FnTable, challenges: Sequence[int]) -> ChainState:
    if inv.s != 0:
        raise ValueError("chains are defined for zero-advice inverters")
    xs, zs = [], []
    alive = True
    for y in challenges:
        x = _invert(inv, y, f, "")
        xs.append(x)
        alive = alive and f(x) == y
        zs.append(alive)
    return ChainState(tuple(challenges), tuple(xs), tuple(zs))
