from fractions import Fraction

import pytest

from fninv.errors import BudgetExceeded, SizeMismatch, SparsityViolation
from fninv.field import FnTable, all_functions, make_field, sample_function, to_field
from fninv.inverters import (
    AffineDecoderSpec,
    AffineForm,
    QueryOracle,
    affine_inverter,
    affine_tables,
    average_success_exact,
    check_linear_preprocessing,
    eval_affine_decoder,
    find_linearity_violation,
    full_table_inverter,
    max_index_inverter,
    null_inverter,
    run_chain,
    success_probability,
    uniform_challenge_success,
    zero_advice_affine_inverter,
)
from fninv.rng import Rng


def test_full_table_decodes_smallest_preimage():
    inv = full_table_inverter(3)
    f = FnTable(3, (2, 2, 1))
    adv = inv.advice(f)
    assert len(adv) == inv.s == 6
    assert inv.invert(2, f, adv) == (1, 0)
    # empty fiber: echo y, which is never a preimage
    assert inv.invert(3, f, adv)[0] == 3
    assert full_table_inverter(3, "largest").invert(2, f, adv)[0] == 2


@pytest.mark.parametrize("n", [4, 8, 17])
def test_full_table_is_linear(n):
    assert check_linear_preprocessing(full_table_inverter(n), 200, Rng(n))


def test_max_index_is_caught():
    assert find_linearity_violation(max_index_inverter(5), 200, Rng(1)) is not None


def test_full_table_always_inverts():
    inv = full_table_inverter(5)
    rng = Rng(8)
    for _ in range(20):
        assert success_probability(inv, sample_function(5, rng)) == 1


def test_null_inverter_never_inverts_non_constant():
    inv = null_inverter(4)
    f = FnTable(4, (1, 2, 2, 3))
    assert success_probability(inv, f) == 0


def test_mc_success_and_argument_checks():
    inv = full_table_inverter(7)
    f = sample_function(7, Rng(2))
    assert success_probability(inv, f, "mc", 500, Rng(3)) == 1.0
    with pytest.raises(ValueError):
        success_probability(inv, f, "mc", 0, Rng(3))
    with pytest.raises(ValueError):
        success_probability(inv, f, "other")


def test_constant_query_inverter_average():
    # g = 1 at n = 2: answer f(1); exact average over all four tables
    inv = zero_advice_affine_inverter([1, 1])
    assert average_success_exact(inv, 2) == Fraction(3, 4)


def test_eval_affine_decoder_examples():
    gf3, gf5 = make_field(3), make_field(5)
    spec = AffineDecoderSpec(gf3, 1, lambda y, a: AffineForm({2: 1}, 0))
    assert eval_affine_decoder(spec, 1, "", FnTable(3, (3, 1, 2))) == 1
    spec = AffineDecoderSpec(gf5, 2, lambda y, a: AffineForm({1: 1, 2: 1}, 0))
    assert eval_affine_decoder(spec, 1, "", FnTable(5, (2, 4, 1, 1, 1))) == 5


def test_eval_affine_decoder_checks():
    gf3 = make_field(3)
    dense = AffineDecoderSpec(gf3, 1, lambda y, a: AffineForm({1: 1, 2: 1}, 0))
    with pytest.raises(SparsityViolation):
        eval_affine_decoder(dense, 1, "", FnTable(3, (1, 1, 1)))
    with pytest.raises(SizeMismatch):
        eval_affine_decoder(dense, 1, "", FnTable(2, (1, 1)))


def test_affine_inverter_matches_direct_evaluation():
    gf = make_field(5)

    def forms(y):
        return AffineForm({y: 2, (y % 5) + 1: 3}, y)

    inv = affine_inverter(gf, forms, 2)
    rng = Rng(12)
    for _ in range(50):
        f = sample_function(5, rng)
        for y in range(1, 6):
            assert inv.invert(y, f, "")[0] == eval_affine_decoder(inv.affine, y, "", f)
    idx, coef, beta = affine_tables(inv)
    assert idx.shape == (5, 2) and beta.tolist() == [1, 2, 3, 4, 0]


def test_run_chain_example():
    inv = zero_advice_affine_inverter([1, 2])
    st = run_chain(inv, FnTable(2, (2, 1)), [1])
    assert st.answers == (2,) and st.flags == (True,)
    st = run_chain(inv, FnTable(2, (2, 2)), [1, 2])
    assert st.answers == (2, 2) and st.flags == (False, False)


def test_first_chain_event_exact():
    # g = identity: Z_1 holds iff f(f(Y)) = Y, probability 2/n - 1/n^2
    n = 3
    inv = zero_advice_affine_inverter(list(range(1, n + 1)))
    hits = sum(run_chain(inv, f, [y]).flags[0] for f in all_functions(n) for y in range(1, n + 1))
    assert Fraction(hits, n**n * n) == Fraction(2, n) - Fraction(1, n * n)


def test_uniform_challenges_identity():
    n = 101
    inv = zero_advice_affine_inverter(list(range(1, n + 1)))
    rng = Rng(5)
    rates = [uniform_challenge_success(inv, sample_function(n, rng.split(k)), 2000, rng.split(1000 + k)) for k in range(50)]
    assert sum(rates) / len(rates) == pytest.approx(2 / n - 1 / n**2, abs=0.004)


def test_query_oracle_budget():
    oracle = QueryOracle(FnTable(2, (1, 2)), 1)
    oracle(1)
    with pytest.raises(BudgetExceeded):
        oracle(2)


def test_advice_length_is_checked():
    inv = full_table_inverter(4)
    bad = type(inv)(inv.n, inv.s + 1, inv.q, inv.preprocess, inv.decode)
    with pytest.raises(SizeMismatch):
        bad.advice(FnTable(4, (1, 1, 1, 1)))


def test_trials_zero_is_vacuous():
    # no trials means no observed violation
    assert check_linear_preprocessing(max_index_inverter(5), 0, Rng(0))
