import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fninv.errors import DomainError, NonPrimeModulus, SizeMismatch
from fninv.field import (
    FnTable,
    add_pointwise,
    all_functions,
    binary_entropy,
    dumps_table,
    image,
    is_prime,
    loads_table,
    make_field,
    neg_pointwise,
    preimage,
    sample_function,
    sample_tables,
    smallest_preimage,
    zero_function,
)
from fninv.rng import Rng


@pytest.mark.parametrize("p", [2, 3, 5, 7, 17, 101, 1009])
def test_prime_fields(p):
    F = make_field(p)
    assert F.size == p
    for a in range(1, min(p, 40)):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0


@pytest.mark.parametrize("m", [0, 1, 4, 15, 91])
def test_non_prime_modulus(m):
    with pytest.raises(NonPrimeModulus):
        make_field(m)


def test_is_prime_against_trial_division():
    for m in range(200):
        assert is_prime(m) == (m > 1 and all(m % d for d in range(2, m)))


def test_image_and_preimage():
    f = FnTable(3, (2, 2, 1))
    assert f(1) == 2
    assert image(f) == {1, 2}
    assert preimage(f, 2) == {1, 2}
    assert preimage(f, 3) == set()
    assert smallest_preimage(f, 2) == 1
    assert smallest_preimage(f, 3) is None


def test_add_pointwise_labels():
    # label 1 is the group zero
    assert add_pointwise(FnTable(2, (1, 2)), FnTable(2, (1, 1))).values == (1, 2)
    assert add_pointwise(FnTable(3, (3, 3, 2)), FnTable(3, (2, 3, 3))).values == (1, 2, 1)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n), min_size=n, max_size=n), st.lists(st.integers(1, n), min_size=n, max_size=n))))
def test_pointwise_group_laws(args):
    n, a, b = args
    f, g = FnTable(n, tuple(a)), FnTable(n, tuple(b))
    assert add_pointwise(f, g) == add_pointwise(g, f)
    assert add_pointwise(f, zero_function(n)) == f
    assert add_pointwise(f, neg_pointwise(f)) == zero_function(n)


def test_table_validation():
    with pytest.raises(SizeMismatch):
        FnTable(3, (1, 2))
    with pytest.raises(DomainError):
        FnTable(2, (1, 3))
    with pytest.raises(SizeMismatch):
        add_pointwise(FnTable(2, (1, 1)), FnTable(3, (1, 1, 1)))


def test_text_roundtrip():
    f = FnTable(4, (4, 1, 1, 2))
    assert loads_table(dumps_table(f)) == f


def test_binary_entropy_values():
    assert binary_entropy(0.25) == pytest.approx(0.8113, abs=1e-4)
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    with pytest.raises(DomainError):
        binary_entropy(1.5)


@given(st.floats(1e-9, 0.5))
def test_entropy_below_twice_log_term(delta):
    assert binary_entropy(delta) <= -2 * delta * math.log2(delta) + 1e-12


def test_all_functions_count_and_order():
    fs = list(all_functions(3))
    assert len(fs) == 27
    assert fs[0].values == (1, 1, 1) and fs[-1].values == (3, 3, 3)


def test_sampled_entries_uniform():
    n = 7
    F = sample_tables(n, 20_000, Rng(99))
    assert F.min() >= 1 and F.max() <= n
    counts = np.bincount(F.ravel(), minlength=n + 1)[1:]
    expected = F.size / n
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 22.46  # 0.999 quantile, 6 degrees of freedom


def test_sample_function_deterministic():
    assert sample_function(10, Rng(4)) == sample_function(10, Rng(4))
