"""Kernel dispatch: compiled ``_core`` when importable, numpy fallback otherwise.

Set ``FNINV_PURE_PYTHON=1`` to force the fallback. Both backends take the
same arrays and return identical results; callers never branch on which one
is active. Inputs are coerced to C-contiguous int64 here.
"""

from __future__ import annotations

import os

import numpy as np

from . import _core_py

_compiled = None
if os.environ.get("FNINV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _core_py
BACKEND: str = _impl.BACKEND


def backends() -> dict:
    """Available backend modules by name (for tests and benchmarks)."""
    out = {"python": _core_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def rref_inplace(M: np.ndarray, p: int, impl=None) -> list[int]:
    """Row-reduce ``M`` in place; ``M`` must already be C-contiguous int64."""
    if M.dtype != np.int64 or not M.flags.c_contiguous:
        raise TypeError("rref_inplace needs a C-contiguous int64 array")
    return list((impl or _impl).rref_inplace(M, int(p)))


def affine_chain_prefix(F, Y, idx, coef, beta, p: int, impl=None) -> np.ndarray:
    return (impl or _impl).affine_chain_prefix(
        _i64(F), _i64(Y), _i64(idx), _i64(coef), _i64(beta), int(p)
    )


def set_hits(F, Y, S, impl=None) -> np.ndarray:
    return (impl or _impl).set_hits(_i64(F), _i64(Y), _i64(S))


def good_index_count(F, S, impl=None) -> np.ndarray:
    return (impl or _impl).good_index_count(_i64(F), _i64(S))


def heaviest_mass(F, k: int, impl=None) -> np.ndarray:
    return (impl or _impl).heaviest_mass(_i64(F), int(k))
