"""Closed-form bound evaluators, Monte-Carlo reports and verdicts.

Every evaluator is a pure function of its arguments. Logs are base 2.
Exponents are accumulated in log space and exponentiated once, so values
far above 1 come back as ``inf`` instead of overflowing.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable

from .errors import DomainError, ParameterError
from .field import binary_entropy

PASS, FAIL, VACUOUS, INCONCLUSIVE = "PASS", "FAIL", "VACUOUS", "INCONCLUSIVE"
CONFIDENCE_LOG_TERM = math.log(40)  # two-sided 95%: ln(2 / 0.05)
MIN_CONDITIONED = 100
_SNAP = 1e-9


def pow2(e: float) -> float:
    if e == -math.inf:
        return 0.0
    if e > 1023:
        return math.inf
    return 2.0**e


def ceil_mul(x: Real, n: int) -> int:
    """ceil(x * n), exact for Fractions and snapped for float round-off."""
    if isinstance(x, (int, Fraction)):
        return math.ceil(Fraction(x) * n)
    return math.ceil(x * n - _SNAP)


def floor_mul(x: Real, n: int) -> int:
    if isinstance(x, (int, Fraction)):
        return math.floor(Fraction(x) * n)
    return math.floor(x * n + _SNAP)


def _log2(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


def _count_term(mu: Real, n: int) -> tuple[int, float]:
    """(k, k*log(1/mu)) with k = ceil(mu*n); the product is 0 when k = 0."""
    k = ceil_mul(mu, n)
    if k == 0:
        return 0, 0.0
    return k, k * math.log2(1 / float(mu))


def _check_unit_half(name: str, x: Real, open_left: bool = False):
    if x < 0 or x > 0.5 or (open_left and x == 0):
        interval = "(0, 1/2]" if open_left else "[0, 1/2]"
        raise DomainError(f"{name}={x} outside {interval}")


# ------------------------------------------------------------- parameters


@dataclass(frozen=True)
class BoundParams:
    n: int
    s: int = 0
    q: int = 1
    d: int = 1
    m: int = 0
    i: int = 1
    t: int = 1
    ell: int = 0
    c: int = 1
    tau: float = 0.5
    delta: float = 0.5
    mu: float = 0.25
    gamma: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("n must be >= 2")
        for name in ("s", "q", "d", "m", "i", "t", "ell", "c"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        for name in ("tau", "delta", "mu", "gamma", "alpha"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must lie in [0, 1]")

    def to_json(self) -> dict:
        return {k: (float(v) if isinstance(v, Fraction) else v) for k, v in asdict(self).items()}


# ------------------------------------------------------- claim-level bounds


def good_indices_bound(n: int, c: int, mu: Real) -> float:
    """2^{2 ceil(mu n) log(1/mu) + ceil(mu n) log(c/n)}."""
    _check_unit_half("mu", mu)
    k, a = _count_term(mu, n)
    if k == 0:
        return 1.0
    return pow2(2 * a + k * _log2(c / n))


def conditioned_bound(n: int, c: int, gamma: Real, p: float) -> float:
    """gamma + 2^{2 ceil(gamma n) log(1/gamma) + ceil(gamma n) log(c/n) + log(1/p)}."""
    _check_unit_half("gamma", gamma)
    if not 0 < p <= 1:
        raise DomainError("event probability p must lie in (0, 1]")
    k, a = _count_term(gamma, n)
    e = math.log2(1 / p) + (2 * a + k * _log2(c / n) if k else 0.0)
    return float(gamma) + pow2(e)


def alpha_tau_delta_bound(n: int, tau: Real, delta: Real) -> float:
    """2^{n(h(tau) + h(delta)) + floor(tau n) log delta}, for tau, delta in [0, 1/2].

    The compression probability is decreasing in tau and increasing in
    delta, so tau > 1/2 is evaluated at tau = 1/2 (still an upper bound) and
    delta > 1/2 returns the trivial bound 1.
    """
    if not (0 <= tau <= 1 and 0 <= delta <= 1):
        raise DomainError("tau and delta must lie in [0, 1]")
    if delta > 0.5:
        return 1.0
    tau = min(tau, 0.5)
    k = floor_mul(tau, n)
    e = n * (binary_entropy(float(tau)) + binary_entropy(float(delta)))
    if k:
        e += k * _log2(float(delta))
    return pow2(e)


def advanced_span_bound(n: int, ell: int, t: int, mu: Real) -> float:
    """(ell/n + mu) + 2^{2 ceil(mu n) log(1/mu) + ceil(mu n) log(t/n) + ell log n}."""
    _check_unit_half("mu", mu)
    k, a = _count_term(mu, n)
    e = ell * math.log2(n) + (2 * a + k * _log2(t / n) if k else 0.0)
    return ell / n + float(mu) + pow2(e)


# ------------------------------------------------------------ lemma bounds


def eval_affine_lemma_bound(n: int, i: int, mu: Real) -> float:
    """(2i-1)/n + mu + 2^{2 ceil(mu n) log(1/mu) - ceil(mu n) log n + (2i-2) log n}."""
    _check_unit_half("mu", mu, open_left=True)
    if i < 1:
        raise DomainError("i must be >= 1")
    k, a = _count_term(mu, n)
    e = 2 * a - k * math.log2(n) + (2 * i - 2) * math.log2(n)
    return (2 * i - 1) / n + float(mu) + pow2(e)


def eval_tree_lemma_bound(n: int, i: int, d: int, q: int, mu: Real) -> float:
    """((d+1)i-1)/n + mu + 2^{2 ceil(mu n) log(1/mu) + ceil(mu n) log(q/n) + (i-1)(d+1) log n}."""
    _check_unit_half("mu", mu, open_left=True)
    if i < 1 or q < 1 or d < 0:
        raise DomainError("need i >= 1, q >= 1, d >= 0")
    k, a = _count_term(mu, n)
    e = 2 * a + k * math.log2(q / n) + (i - 1) * (d + 1) * math.log2(n)
    return ((d + 1) * i - 1) / n + float(mu) + pow2(e)


# ---------------------------------------------------------- theorem bounds


def affine_factor(n: int, j: int) -> float:
    return 2 * j / n + max(n**-0.25, 4 * j / n)


def tree_factor(n: int, j: int, d: int, q: int) -> float:
    return (d + 1) * j / n + max((q / n) ** 0.25, 2 * (d + 1) * j * math.log2(n) / (n * math.log2(n / q)))


def _theorem_terms(pr: BoundParams, factor: Callable[[int], float]) -> tuple[float, float]:
    """(alpha term, log2 of delta^{-m} * prod of factors); the bound is alpha + 2^{s + log}."""
    alpha = alpha_tau_delta_bound(pr.n, pr.tau, pr.delta)
    if pr.m == 0:
        return alpha, 0.0
    e = -pr.m * _log2(float(pr.delta))
    for j in range(1, pr.m + 1):
        e += math.log2(factor(j))
    return alpha, e


def _theorem_value(pr: BoundParams, factor: Callable[[int], float]) -> float:
    alpha, e = _theorem_terms(pr, factor)
    return alpha + pow2(pr.s + e)


def eval_affine_theorem_bound(pr: BoundParams) -> float:
    """alpha_{tau,delta} + 2^s delta^{-m} prod_{j<=m} (2j/n + max{n^{-1/4}, 4j/n})."""
    if 16 * pr.m > pr.n:
        raise ParameterError(f"m={pr.m} exceeds n/16")
    return _theorem_value(pr, lambda j: affine_factor(pr.n, j))


def tree_m_limit(n: int, d: int, q: int) -> float:
    return n * math.log2(n / q) / (4 * (d + 1) * math.log2(n))


def eval_tree_theorem_bound(pr: BoundParams) -> float:
    """alpha_{tau,delta} + 2^s delta^{-m} prod_{j<=m} ((d+1)j/n + max{(q/n)^{1/4}, 2(d+1)j log n/(n log(n/q))})."""
    if pr.q < 1 or 16 * pr.q > pr.n:
        raise ParameterError(f"q={pr.q} must lie in [1, n/16]")
    if pr.m > tree_m_limit(pr.n, pr.d, pr.q):
        raise ParameterError(f"m={pr.m} exceeds n log(n/q) / (4(d+1) log n)")
    return _theorem_value(pr, lambda j: tree_factor(pr.n, j, pr.d, pr.q))


def is_vacuous(bound: float) -> bool:
    return bound >= 1


def largest_s_below(evaluate: Callable[[int], float], level: float = 0.5, s_max: int = 1 << 40) -> int | None:
    """Largest integer s >= 0 with evaluate(s) < level, by bisection.

    ``evaluate`` must be nondecreasing in s. Returns None if even s = 0 fails.
    """
    if not evaluate(0) < level:
        return None
    lo, hi = 0, 1
    while hi < s_max and evaluate(hi) < level:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if evaluate(mid) < level:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Threshold:
    s_star: int | None
    delta: float
    m: int
    bound_at: float
    bound_next: float


def tree_s_threshold(n: int, d: int, q: int, tau: float, level: float = 0.5, deltas=None) -> Threshold:
    """Advice length at which the tree-decoder bound first reaches ``level``.

    For each delta on the grid, m is the longest prefix whose product factors
    stay below delta (capped by the admissible m); the best delta wins.
    Below ``s_star`` a decoder of this shape cannot succeed with
    probability >= tau on a ``level`` fraction of functions.
    """
    if deltas is None:
        deltas = [k / 200 for k in range(1, 101)]
    if q < 1 or 16 * q > n:
        raise ParameterError(f"q={q} must lie in [1, n/16]")
    cap = math.floor(tree_m_limit(n, d, q))
    best = None
    for delta in deltas:
        m = 0
        while m < cap and tree_factor(n, m + 1, d, q) < delta:
            m += 1
        pr = BoundParams(n=n, q=q, d=d, m=m, tau=tau, delta=delta)
        alpha, e = _theorem_terms(pr, lambda j: tree_factor(n, j, d, q))

        def at(s, alpha=alpha, e=e):
            return alpha + pow2(s + e)

        s_star = largest_s_below(at, level)
        if s_star is not None and (best is None or s_star > best.s_star):
            best = Threshold(s_star, delta, m, at(s_star), at(s_star + 1))
    if best is None:
        return Threshold(None, float("nan"), 0, math.inf, math.inf)
    return best


# ---------------------------------------------------------------- reports


def hoeffding_half_width(trials: int) -> float:
    """95% two-sided Hoeffding half-width sqrt(ln(40) / (2 trials))."""
    if trials <= 0:
        return math.inf
    return math.sqrt(CONFIDENCE_LOG_TERM / (2 * trials))


def mc_verdict(estimate: float, half_width: float, bound: float | None, direction: str = "upper") -> str:
    """Four-valued verdict for ``estimate <= bound`` (or ``>=`` when direction="lower")."""
    if bound is None:
        return VACUOUS
    if direction == "upper":
        if bound >= 1:
            return VACUOUS
        if estimate + half_width <= bound:
            return PASS
        if estimate - half_width > bound:
            return FAIL
        return INCONCLUSIVE
    if direction != "lower":
        raise ValueError(f"unknown direction {direction!r}")
    if bound <= 0:
        return VACUOUS
    if estimate - half_width >= bound:
        return PASS
    if estimate + half_width < bound:
        return FAIL
    return INCONCLUSIVE


@dataclass(frozen=True)
class McReport:
    claim_id: str
    trials: int
    successes: int
    bound: float | None
    params: dict = field(default_factory=dict)
    seed: int | None = None
    direction: str = "upper"

    @property
    def estimate(self) -> float:
        return self.successes / self.trials if self.trials else math.nan

    @property
    def half_width(self) -> float:
        return hoeffding_half_width(self.trials)

    @property
    def ci(self) -> tuple[float, float]:
        hw = self.half_width
        return max(0.0, self.estimate - hw), min(1.0, self.estimate + hw)

    @property
    def verdict(self) -> str:
        return mc_verdict(self.estimate, self.half_width, self.bound, self.direction)

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "params": self.params,
            "estimate": self.estimate,
            "ci": list(self.ci),
            "half_width": self.half_width,
            "bound": self.bound,
            "direction": self.direction,
            "verdict": self.verdict,
            "trials": self.trials,
            "successes": self.successes,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ExactReport:
    """Result of an exhaustive check: no tolerance, PASS iff no counterexample."""

    claim_id: str
    checked: int
    counterexamples: tuple = ()
    params: dict = field(default_factory=dict)
    value: Fraction | None = None
    bound: Fraction | None = None

    @property
    def verdict(self) -> str:
        return FAIL if self.counterexamples else PASS

    def to_json(self) -> dict:
        def num(x):
            return None if x is None else str(x)

        return {
            "claim_id": self.claim_id,
            "params": self.params,
            "checked": self.checked,
            "counterexamples": [repr(c) for c in self.counterexamples[:20]],
            "counterexample_count": len(self.counterexamples),
            "value": num(self.value),
            "bound": num(self.bound),
            "verdict": self.verdict,
        }
