"""The compiled kernels and the numpy fallback must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fninv import BACKEND, kernels
from fninv.field import sample_tables
from fninv.rng import Rng

IMPLS = kernels.backends()
needs_both = pytest.mark.skipif("cython" not in IMPLS, reason="compiled backend not built")


def test_backend_is_reported():
    assert BACKEND in IMPLS


def _agree(fn):
    outs = [np.asarray(fn(impl)) for impl in IMPLS.values()]
    for out in outs[1:]:
        assert np.array_equal(out, outs[0])
    return outs[0]


@needs_both
@given(seed=st.integers(0, 2**32), p=st.sampled_from([2, 3, 5, 7, 101]), r=st.integers(0, 6), c=st.integers(1, 7))
@settings(max_examples=80, deadline=None)
def test_rref_backends_agree(seed, p, r, c):
    M = Rng(seed).integers(p, (r, c))

    def run(impl):
        A = M.copy()
        piv = kernels.rref_inplace(A, p, impl=impl)
        return np.concatenate([A.ravel(), np.array(piv, dtype=np.int64)])

    _agree(run)


@needs_both
@given(seed=st.integers(0, 2**32), n=st.sampled_from([2, 3, 5, 11]), i=st.integers(1, 3), q=st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_affine_chain_prefix_backends_agree(seed, n, i, q):
    rng = Rng(seed)
    F = sample_tables(n, 300, rng.split(0))
    Y = rng.split(1).integers(n, (300, i)) + 1
    idx = rng.split(2).integers(n, (n, q))
    coef = rng.split(3).integers(n, (n, q))
    beta = rng.split(4).integers(n, n)
    out = _agree(lambda impl: kernels.affine_chain_prefix(F, Y, idx, coef, beta, n, impl=impl))
    assert ((out >= 0) & (out <= i)).all()


@needs_both
@given(seed=st.integers(0, 2**32), n=st.integers(2, 12), c=st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_set_kernels_backends_agree(seed, n, c):
    rng = Rng(seed)
    F = sample_tables(n, 200, rng.split(0))
    Y = rng.split(1).integers(n, 200) + 1
    S = rng.split(2).integers(n, (n, c))
    S[:, -1] = np.where(rng.split(3).integers(2, n) == 0, -1, S[:, -1])
    _agree(lambda impl: kernels.set_hits(F, Y, S, impl=impl))
    _agree(lambda impl: kernels.good_index_count(F, S, impl=impl))
    _agree(lambda impl: kernels.heaviest_mass(F, min(3, n), impl=impl))


@pytest.mark.parametrize("impl", list(IMPLS.values()), ids=list(IMPLS))
def test_heaviest_mass_small_case(impl):
    F = np.array([[1, 1, 2, 3, 3, 3]], dtype=np.int64)
    assert kernels.heaviest_mass(F, 1, impl=impl).tolist() == [3]
    assert kernels.heaviest_mass(F, 2, impl=impl).tolist() == [5]
    assert kernels.heaviest_mass(F, 0, impl=impl).tolist() == [0]


@pytest.mark.parametrize("impl", list(IMPLS.values()), ids=list(IMPLS))
def test_set_hits_small_case(impl):
    # S_y = {y}: hit iff f(y) = y
    F = np.array([[1, 3, 3]], dtype=np.int64)
    S = np.array([[0], [1], [2]], dtype=np.int64)
    assert kernels.set_hits(F, np.array([1]), S, impl=impl).tolist() == [1]
    assert kernels.set_hits(F, np.array([2]), S, impl=impl).tolist() == [0]
    assert kernels.good_index_count(F, S, impl=impl).tolist() == [2]


@pytest.mark.parametrize("impl", list(IMPLS.values()), ids=list(IMPLS))
def test_read_only_inputs_accepted(impl):
    F = np.array([[1, 2, 2]], dtype=np.int64)
    F.setflags(write=False)
    S = np.array([[0], [1], [2]], dtype=np.int64)
    S.setflags(write=False)
    assert kernels.heaviest_mass(F, 1, impl=impl).tolist() == [2]
    assert kernels.good_index_count(F, S, impl=impl).tolist() == [2]


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--repeat", "1", "--rows", "200"]) == 0
    assert "heaviest_mass" in capsys.readouterr().out
