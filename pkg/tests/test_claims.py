import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from fninv.bounds import FAIL, PASS, VACUOUS
from fninv.claims import (
    _uniform_outside_span,
    always_event,
    chain_prefix_counts,
    estimate_chain_success,
    fixed_value_event,
    repetition_fit,
    shifted_singletons,
    tau_delta_predicate,
    verify_advanced_span_claim,
    verify_conditioned_claim,
    verify_correct_preimage,
    verify_entropy_facts,
    verify_known_unit_vectors,
    verify_not_many_good_indices,
    verify_tau_delta,
)
from fninv.errors import InfeasibleSystem, TooFewConditionedSamples
from fninv.field import FnTable, make_field
from fninv.inverters import full_table_inverter, null_inverter, zero_advice_affine_inverter
from fninv.linalg import Mat, enumerate_vectors
from fninv.rng import Rng
from oracles import exact_correct_preimage


def test_unit_vectors_small_exhaustive():
    rep = verify_known_unit_vectors([3], 1, 2)
    assert rep.verdict == PASS
    assert rep.checked == (1 + 3) + (1 + 9)


def test_unit_vector_checker_catches_wrong_scope():
    # e_1 is spanned, so coordinate 1 is pinned; claiming it is not must be flagged
    A = np.array([[1, 0]], dtype=np.int64)
    W = enumerate_vectors(2, 2)
    assert _uniform_outside_span(A, 2, W, frozenset({1})) == []
    assert _uniform_outside_span(A, 2, W, frozenset()) != []


def test_good_indices_degenerate_cases():
    n = 16
    full = [tuple(range(1, n + 1))] * n
    assert verify_not_many_good_indices(n, full, 0.25, 500, Rng(1)).verdict == VACUOUS
    zero = verify_not_many_good_indices(n, shifted_singletons(n), 0, 200, Rng(1))
    assert zero.estimate == 1.0 and zero.verdict == VACUOUS


def test_good_indices_matches_direct_count():
    n = 8
    sets = shifted_singletons(n, 3)
    rep = verify_not_many_good_indices(n, sets, 0.25, 3000, Rng(4), batch=700)
    # recount with the same draws, without kernels
    from fninv.field import sample_tables

    hits = 0
    for k, size in enumerate([700, 700, 700, 700, 200]):
        F = sample_tables(n, size, Rng(4).split(k))
        for f in F.tolist():
            good = sum(y in {f[x - 1] for x in sets[y - 1]} for y in range(1, n + 1))
            hits += good >= 2
    assert rep.successes == hits


def test_conditioned_claim():
    n = 64
    rep = verify_conditioned_claim(n, shifted_singletons(n), 0.25, fixed_value_event(n), 20_000, Rng(2))
    assert rep.trials >= 100 and rep.verdict == PASS
    free = verify_conditioned_claim(n, shifted_singletons(n), 0.5, always_event(), 5000, Rng(2))
    assert free.trials == 5000 and free.verdict == PASS
    with pytest.raises(TooFewConditionedSamples):
        verify_conditioned_claim(n, shifted_singletons(n), 0.25, fixed_value_event(n), 500, Rng(2))


def test_tau_delta_examples():
    n = 6
    assert tau_delta_predicate(FnTable(n, (2,) * n), 1, Fraction(1, n))
    perm = FnTable(n, (2, 3, 4, 5, 6, 1))
    assert not tau_delta_predicate(perm, Fraction(1, 2), Fraction(1, 3))
    assert tau_delta_predicate(perm, Fraction(1, 3), Fraction(1, 3))


def test_tau_delta_report_vacuous_at_small_n():
    rep = verify_tau_delta(16, 0.25, 0.25, 5000, Rng(3))
    assert rep.verdict == VACUOUS
    # the 4 heaviest of at most 16 fibers always hold >= 4 points
    assert rep.estimate == 1.0


@pytest.mark.parametrize("rule", ["smallest", "largest"])
def test_correct_preimage_exact(rule):
    rep = verify_correct_preimage(full_table_inverter(3, rule), 3)
    assert rep.value == exact_correct_preimage(3) == Fraction(19, 27)
    assert rep.bound == Fraction(1, 8) and rep.verdict == PASS


def test_correct_preimage_never_inverting():
    rep = verify_correct_preimage(null_inverter(3), 3)
    assert rep.bound <= rep.value and rep.verdict == PASS


def test_correct_preimage_mc():
    rep = verify_correct_preimage(full_table_inverter(7), 7, "mc", 3000, Rng(1))
    assert rep.direction == "lower" and rep.verdict == PASS


def test_chain_first_step_matches_analytic():
    n = 101
    inv = zero_advice_affine_inverter(list(range(1, n + 1)))
    rep = estimate_chain_success(inv, n, 1, 200_000, Rng(11))
    assert abs(rep.estimate - (2 / n - 1 / n**2)) <= rep.half_width
    assert rep.verdict == PASS


def test_chain_prefix_counts_monotone():
    n = 11
    inv = zero_advice_affine_inverter(list(range(1, n + 1)))
    counts = chain_prefix_counts(inv, 3, 5000, Rng(5), batch=1234)
    assert counts[0] == 5000
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_chain_too_few_samples():
    inv = zero_advice_affine_inverter(list(range(1, 102)))
    with pytest.raises(TooFewConditionedSamples):
        estimate_chain_success(inv, 101, 2, 1000, Rng(0))


def test_advanced_span_singletons():
    n = 17
    gf = make_field(n)
    A = Mat.empty(n, gf)
    blocks = [Mat([[int(k == y) for k in range(n)]], gf) for y in range(n)]
    rep = verify_advanced_span_claim(A, [], blocks, 0.25, 20_000, Rng(7))
    # event is f(y) = y for uniform y
    assert abs(rep.estimate - 1 / n) < 0.01
    assert rep.verdict == PASS


def test_advanced_span_zero_blocks():
    n = 5
    gf = make_field(n)
    blocks = [Mat([[0] * n], gf) for _ in range(n)]
    rep = verify_advanced_span_claim(Mat.empty(n, gf), [], blocks, 0.25, 1000, Rng(7))
    assert rep.successes == 0


def test_advanced_span_conditioning_respected():
    n = 5
    gf = make_field(n)
    A = Mat([[1, 0, 0, 0, 0]], gf)  # pins f(1) = 3 (field value 2)
    blocks = [Mat([[0, 1, 0, 0, 0]], gf) for _ in range(n)]
    rep = verify_advanced_span_claim(A, [2], blocks, 0.25, 20_000, Rng(1))
    # E = {1, 2}; hit iff Y in {3, f(2)}: probability 1/5 + 4/25
    assert abs(rep.estimate - (1 / 5 + 4 / 25)) < 0.015
    with pytest.raises(InfeasibleSystem):
        verify_advanced_span_claim(Mat([[1, 0, 0, 0, 0], [2, 0, 0, 0, 0]], gf), [1, 1], blocks, 0.25, 10, Rng(1))


def test_entropy_facts():
    rep = verify_entropy_facts()
    assert rep.verdict == PASS
    assert math.comb(4, 2) <= 2 ** 4


def test_repetition_fit_small():
    r, rows = repetition_fit(full_table_inverter(7), 7, [1, 2], 400, Rng(3))
    assert 0.4 < r < 0.9
    assert [row.t for row in rows] == [1, 2]
    assert all(row.verdict == PASS for row in rows)


def test_mc_reports_are_deterministic():
    n = 32
    a = verify_not_many_good_indices(n, shifted_singletons(n), 0.125, 4000, Rng(9)).to_json()
    b = verify_not_many_good_indices(n, shifted_singletons(n), 0.125, 4000, Rng(9)).to_json()
    assert a == b


def test_good_indices_exact_tail_below_bound():
    # with S_y = {y}, y is good iff f(y) = y independently, so |K_f| ~ Bin(n, 1/n)
    from fninv.bounds import good_indices_bound

    n, k = 64, 16
    tail = sum(math.comb(n, j) * Fraction(1, n) ** j * Fraction(n - 1, n) ** (n - j) for j in range(k, n + 1))
    assert float(tail) < good_indices_bound(n, 1, 0.25)
    rep = verify_not_many_good_indices(n, shifted_singletons(n, 0), 0.25, 20_000, Rng(8))
    assert rep.successes == 0
