"""Verifiers for the probabilistic claims: exhaustive at tiny n, Monte-Carlo
with Hoeffding intervals at moderate n.

Monte-Carlo verifiers draw tables in batches from ``rng.split(k)`` for
batch k = 0, 1, ..., so results depend only on (seed, trials, batch size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .bounds import (
    FAIL,
    MIN_CONDITIONED,
    PASS,
    ExactReport,
    McReport,
    advanced_span_bound,
    alpha_tau_delta_bound,
    ceil_mul,
    conditioned_bound,
    eval_affine_lemma_bound,
    floor_mul,
    good_indices_bound,
)
from .errors import InfeasibleSystem, ScaleLimit, TooFewConditionedSamples
from .field import FnTable, all_functions, binary_entropy, make_field, sample_tables
from .inverters import Inverter, NonAdaptiveInverter, affine_tables
from .linalg import Mat, enumerate_vectors, is_consistent, sample_solutions, spanned_units, stack
from .rng import Rng

BATCH = 10_000
EXHAUSTIVE_CAP = 1 << 22


def _batches(trials: int, batch: int):
    done = 0
    k = 0
    while done < trials:
        size = min(batch, trials - done)
        yield k, size
        done += size
        k += 1


def _pad_sets(sets: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """1-based position sets -> (n, c) 0-based array padded with -1."""
    if len(sets) != n:
        raise ValueError(f"need one set per y in [n], got {len(sets)}")
    width = max((len(s) for s in sets), default=0) or 1
    out = np.full((n, width), -1, dtype=np.int64)
    for y, s in enumerate(sets):
        for k, pos in enumerate(sorted(s)):
            if not 1 <= pos <= n:
                raise ValueError(f"position {pos} outside [1, {n}]")
            out[y, k] = pos - 1
    return out


def shifted_singletons(n: int, offset: int = 0) -> list[tuple[int, ...]]:
    """S_y = {((y - 1 + offset) mod n) + 1}: the c = 1 family used in reports."""
    return [((y - 1 + offset) % n + 1,) for y in range(1, n + 1)]


# -------------------------------------------------- spanned unit vectors


def _uniform_outside_span(A: np.ndarray, p: int, W: np.ndarray, units: frozenset[int]) -> list:
    """Coordinates j where w_j given A w = v is not uniform (j outside ``units``) or not fixed (j inside)."""
    rows, b = A.shape
    V = (W @ A.T) % p if rows else np.zeros((len(W), 0), dtype=np.int64)
    keys = V @ (p ** np.arange(rows, dtype=np.int64)) if rows else np.zeros(len(W), dtype=np.int64)
    nkeys = p**rows
    bad = []
    for j in range(1, b + 1):
        counts = np.bincount(keys * p + W[:, j - 1], minlength=nkeys * p).reshape(nkeys, p)
        totals = counts.sum(axis=1)
        seen = totals > 0
        counts, totals = counts[seen], totals[seen]
        if j in units:
            # pinned coordinate: a point mass
            ok = ((counts > 0).sum(axis=1) == 1).all()
        else:
            # Pr[w_j = g | A w = v] = count / total == 1/p, in integers
            ok = (counts * p == totals[:, None]).all()
        if not ok:
            bad.append((A.tolist(), j))
    return bad


def verify_known_unit_vectors(p_list: Sequence[int], max_rows: int, max_cols: int) -> ExactReport:
    """Every A over GF(p) with <= max_rows rows and <= max_cols columns, every
    v in Im(A), every coordinate j: w_j given A w = v is uniform when
    j is not a spanned unit vector, and fixed when it is.
    """
    checked = 0
    bad: list = []
    for p in p_list:
        F = make_field(p)
        for b in range(1, max_cols + 1):
            W = enumerate_vectors(p, b)
            for r in range(0, max_rows + 1):
                total = p ** (r * b)
                if total * len(W) > EXHAUSTIVE_CAP * 64:
                    raise ScaleLimit(f"{total} matrices of shape {r}x{b} over GF({p})")
                for code in range(total):
                    flat = [(code // p**k) % p for k in range(r * b)]
                    A = np.array(flat, dtype=np.int64).reshape(r, b)
                    units = spanned_units(Mat(A, F, cols=b))
                    bad.extend(_uniform_outside_span(A, p, W, units))
                    checked += 1
    params = {"p_list": list(p_list), "max_rows": max_rows, "max_cols": max_cols}
    return ExactReport("known-unit-vectors", checked, tuple(bad), params)


# -------------------------------------------------------- good indices


def verify_not_many_good_indices(
    n: int, sets: Sequence[Sequence[int]], mu: float, trials: int, rng: Rng, batch: int = BATCH
) -> McReport:
    """Pr[|K_f| >= mu n] for K_f = {y : y in f(S_y)} against its closed-form bound."""
    S = _pad_sets(sets, n)
    c = max(len(s) for s in sets)
    need = ceil_mul(mu, n)
    hits = 0
    for k, size in _batches(trials, batch):
        F = sample_tables(n, size, rng.split(k))
        hits += int((kernels.good_index_count(F, S) >= need).sum())
    bound = None if mu == 0 else good_indices_bound(n, c, mu)
    params = {"n": n, "c": c, "mu": mu}
    return McReport("not-many-good-indices", trials, hits, bound, params, rng.master_seed)


@dataclass(frozen=True)
class ConditioningEvent:
    """An event W on tables with a declared lower bound on its probability."""

    name: str
    prob_lower: float
    holds: Callable[[np.ndarray], np.ndarray]


def always_event() -> ConditioningEvent:
    return ConditioningEvent("always", 1.0, lambda F: np.ones(len(F), dtype=bool))


def fixed_value_event(n: int, x: int = 1, y: int = 1) -> ConditioningEvent:
    """W = {f(x) = y}, probability exactly 1/n."""
    return ConditioningEvent(f"f({x})={y}", 1.0 / n, lambda F: F[:, x - 1] == y)


def verify_conditioned_claim(
    n: int,
    sets: Sequence[Sequence[int]],
    gamma: float,
    event: ConditioningEvent,
    trials: int,
    rng: Rng,
    batch: int = BATCH,
) -> McReport:
    """Pr[Y in F(S_Y) | W] by rejection sampling; Y independent of (F, W).

    ``trials`` counts raw draws; the report's trial count is the number of
    draws where W held.
    """
    S = _pad_sets(sets, n)
    c = max(len(s) for s in sets)
    kept = hits = 0
    for k, size in _batches(trials, batch):
        sub = rng.split(k)
        F = sample_tables(n, size, sub.split(0))
        Y = sub.split(1).integers(n, size) + 1
        w = event.holds(F)
        kept += int(w.sum())
        hits += int(kernels.set_hits(F[w], Y[w], S).sum())
    if kept < MIN_CONDITIONED:
        raise TooFewConditionedSamples(f"only {kept} draws satisfied {event.name}")
    bound = conditioned_bound(n, c, gamma, event.prob_lower)
    params = {"n": n, "c": c, "gamma": gamma, "event": event.name, "p": event.prob_lower, "draws": trials}
    return McReport("conditioned-good-indices", kept, hits, bound, params, rng.master_seed)


# ------------------------------------------------------------- compression


def tau_delta_predicate(f: FnTable, tau, delta) -> bool:
    """Exists X with |X| >= tau n and |f(X)| <= delta n.

    The floor(delta n) heaviest fibers carry the most mass any admissible
    image set can collect, so it suffices to compare their total with
    ceil(tau n).
    """
    n = f.n
    k = floor_mul(delta, n)
    need = ceil_mul(tau, n)
    if need <= 0:
        return True
    return int(kernels.heaviest_mass(f.array[None, :], k)[0]) >= need


def verify_tau_delta(n: int, tau: float, delta: float, trials: int, rng: Rng, batch: int = BATCH) -> McReport:
    k = floor_mul(delta, n)
    need = ceil_mul(tau, n)
    hits = 0
    for b, size in _batches(trials, batch):
        F = sample_tables(n, size, rng.split(b))
        hits += int((kernels.heaviest_mass(F, k) >= need).sum())
    bound = alpha_tau_delta_bound(n, tau, delta)
    return McReport("tau-delta", trials, hits, bound, {"n": n, "tau": tau, "delta": delta}, rng.master_seed)


# ---------------------------------------------------------- correct preimage


def verify_correct_preimage(
    inv: Inverter, n: int, mode: str = "exact", trials: int = 0, rng: Rng | None = None
) -> ExactReport | McReport:
    """Pr[Inv(f, f(x)) = x] >= alpha^2 / 8 with alpha the inversion rate.

    Exact mode enumerates every (f, x); mc mode samples ``trials`` pairs and
    reports against the bound built from the measured alpha.
    """
    if mode == "exact":
        if n**n * n > EXHAUSTIVE_CAP:
            raise ScaleLimit(f"{n ** n} functions are too many to enumerate")
        inverted = exact = pairs = 0
        for f in all_functions(n):
            adv = inv.advice(f)
            for x in range(1, n + 1):
                out = inv.invert(f(x), f, adv)[0]
                inverted += f(out) == f(x)
                exact += out == x
                pairs += 1
        alpha = Fraction(inverted, pairs)
        value = Fraction(exact, pairs)
        bound = alpha * alpha / 8
        bad = () if value >= bound else ((value, bound),)
        params = {"n": n, "alpha": str(alpha), "inverter": dict(inv.descriptor)}
        return ExactReport("correct-preimage", pairs, bad, params, value, bound)
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None or trials <= 0:
        raise ValueError("mc mode needs trials > 0 and an rng")
    inverted = exact = 0
    for k in range(trials):
        sub = rng.split(k)
        f = FnTable(n, tuple(sample_tables(n, 1, sub)[0].tolist()))
        x = sub.below(n) + 1
        out = inv.invert(f(x), f, inv.advice(f))[0]
        inverted += f(out) == f(x)
        exact += out == x
    alpha = inverted / trials
    # conservative: the claim is applied to the lower end of alpha's interval
    alpha_lo = max(0.0, alpha - McReport("", trials, 0, None).half_width)
    params = {"n": n, "alpha_hat": alpha, "alpha_low": alpha_lo, "inverter": dict(inv.descriptor)}
    return McReport("correct-preimage", trials, exact, alpha_lo**2 / 8, params, rng.master_seed, "lower")


# ---------------------------------------------------------------- chains


def chain_prefix_counts(
    inv: NonAdaptiveInverter, i: int, trials: int, rng: Rng, batch: int = BATCH, impl=None
) -> np.ndarray:
    """counts[j] = number of trials whose first j challenges all invert (j = 0..i)."""
    idx, coef, beta = affine_tables(inv)
    n = inv.n
    counts = np.zeros(i + 1, dtype=np.int64)
    for k, size in _batches(trials, batch):
        sub = rng.split(k)
        F = sample_tables(n, size, sub.split(0))
        Y = sub.split(1).integers(n, (size, i)) + 1
        prefix = kernels.affine_chain_prefix(F, Y, idx, coef, beta, n, impl=impl)
        counts += np.bincount(prefix, minlength=i + 1)[::-1].cumsum()[::-1][: i + 1]
    return counts


def estimate_chain_success(
    inv: NonAdaptiveInverter, n: int, i: int, trials: int, rng: Rng, mu: float | None = 0.25, batch: int = BATCH
) -> McReport:
    """Pr[Z_i | Z_{i-1}] by rejection sampling on (F, Y_1..Y_i).

    Compared against the affine-decoder lemma bound at ``mu`` (None: no bound).
    """
    if inv.n != n:
        raise ValueError("inverter size does not match n")
    counts = chain_prefix_counts(inv, i, trials, rng, batch)
    conditioned, successes = int(counts[i - 1]), int(counts[i])
    if conditioned < MIN_CONDITIONED:
        raise TooFewConditionedSamples(f"only {conditioned} of {trials} draws satisfied Z_{i - 1}")
    bound = None if mu is None else eval_affine_lemma_bound(n, i, mu)
    params = {"n": n, "i": i, "mu": mu, "draws": trials, "inverter": dict(inv.descriptor)}
    return McReport("chain-success", conditioned, successes, bound, params, rng.master_seed)


# ------------------------------------------------------------ span claim


def verify_advanced_span_claim(
    A: Mat, v, blocks: Sequence[Mat], mu: float, trials: int, rng: Rng, batch: int = BATCH
) -> McReport:
    """Pr[Y in F(E(A stacked on B^Y)) | A F = v] with F uniform on the solution space."""
    n = A.cols
    if A.p != n:
        raise ValueError("the field size must equal n")
    if len(blocks) != n:
        raise ValueError("need one block B^y per y in [n]")
    if not is_consistent(A, v):
        raise InfeasibleSystem("v is not in the image of A")
    t = max((B.rows for B in blocks), default=0)
    sets = [sorted(spanned_units(stack(A, B))) for B in blocks]
    S = np.full((n, max(1, max(len(s) for s in sets))), -1, dtype=np.int64)
    for y, s in enumerate(sets):
        S[y, : len(s)] = np.array(s, dtype=np.int64) - 1
    hits = 0
    for k, size in _batches(trials, batch):
        sub = rng.split(k)
        F = sample_solutions(A, v, size, sub.split(0)) + 1
        Y = sub.split(1).integers(n, size) + 1
        hits += int(kernels.set_hits(F, Y, S).sum())
    bound = advanced_span_bound(n, A.rows, t, mu)
    params = {"n": n, "ell": A.rows, "t": t, "mu": mu}
    return McReport("advanced-span", trials, hits, bound, params, rng.master_seed)


# --------------------------------------------------------------- entropy


def verify_entropy_facts(max_n: int = 64, x_max: float = 100.0, steps: int = 9901) -> ExactReport:
    """binom(n, k) <= 2^{n h(k/n)} for n <= max_n, and log x >= 1 - 1/x on a grid of [1, x_max]."""
    bad = []
    checked = 0
    for n in range(1, max_n + 1):
        for k in range(n + 1):
            checked += 1
            if math.comb(n, k) > 2.0 ** (n * binary_entropy(k / n)):
                bad.append(("binomial", n, k))
    for x in np.linspace(1.0, x_max, steps).tolist():
        checked += 1
        if math.log2(x) < 1 - 1 / x:
            bad.append(("log", x))
    return ExactReport("entropy-facts", checked, tuple(bad), {"max_n": max_n, "x_max": x_max})


# ----------------------------------------------------- repetition model


@dataclass(frozen=True)
class RepetitionRow:
    t: int
    runs: int
    accepts: int
    predicted: float
    sigma: float

    @property
    def rate(self) -> float:
        return self.accepts / self.runs

    @property
    def z(self) -> float:
        return (self.rate - self.predicted) / self.sigma if self.sigma > 0 else 0.0

    @property
    def verdict(self) -> str:
        return PASS if abs(self.z) <= 3 else FAIL


def repetition_fit(
    inv, n: int, ts: Sequence[int], runs: int, rng: Rng, family: Callable | None = None
) -> tuple[float, list[RepetitionRow]]:
    """Fit the accept rate of t-fold repetition on intersecting pairs to (1 - r)^t.

    r is measured from ``runs`` single rounds on an independent substream;
    each row's sigma combines the binomial spread of the row with the
    propagated uncertainty of r.
    """
    from . import reduction as R

    family = family or R.intersecting_pair
    base = rng.split(0)
    rejects = 0
    for k in range(runs):
        inp = family(n, base.split(2 * k))
        rejects += not R.run_protocol(inv, inp, base.split(2 * k + 1)).accepted
    r = rejects / runs
    sigma_r = math.sqrt(r * (1 - r) / runs)
    rows = []
    for t in ts:
        sub = rng.split(1 + t)
        acc = 0
        for k in range(runs):
            inp = family(n, sub.split(2 * k))
            acc += R.run_repeated(t, inv, inp, sub.split(2 * k + 1)).accepted
        pred = (1 - r) ** t
        sigma = math.sqrt(pred * (1 - pred) / runs + (t * (1 - r) ** (t - 1) * sigma_r) ** 2)
        rows.append(RepetitionRow(t, runs, acc, pred, sigma))
    return r, rows


def any_fail(reports) -> bool:
    return any(getattr(r, "verdict", None) == FAIL for r in reports)
