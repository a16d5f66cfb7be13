"""Time the compiled kernels against the numpy fallback on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--rows 20000]

Prints one line per kernel with the best-of-``repeat`` time per backend and
the speedup, after checking both backends return identical results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fninv import kernels
from fninv.field import sample_tables
from fninv.rng import Rng


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rows: int):
    rng = Rng(2024)
    n = 101
    F = sample_tables(n, rows, rng.split(0))
    Y2 = rng.split(1).integers(n, (rows, 2)) + 1
    idx = np.arange(n, dtype=np.int64).reshape(n, 1)
    coef = np.ones((n, 1), dtype=np.int64)
    beta = np.zeros(n, dtype=np.int64)
    S = ((np.arange(n) + 1) % n).reshape(n, 1).astype(np.int64)
    Y1 = rng.split(2).integers(n, rows) + 1
    M = rng.split(3).integers(101, (60, 80))
    F16 = sample_tables(16, rows, rng.split(4))
    return {
        "affine_chain_prefix": lambda impl: kernels.affine_chain_prefix(F, Y2, idx, coef, beta, n, impl=impl),
        "set_hits": lambda impl: kernels.set_hits(F, Y1, S, impl=impl),
        "good_index_count": lambda impl: kernels.good_index_count(F, S, impl=impl),
        "heaviest_mass": lambda impl: kernels.heaviest_mass(F16, 4, impl=impl),
        "rref_inplace": lambda impl: (lambda A: (kernels.rref_inplace(A, 101, impl=impl), A)[1])(M.copy()),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rows", type=int, default=20_000)
    args = ap.parse_args(argv)

    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled backend not built; only the fallback is available")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in impls) + f"{'speedup':>10}")
    for name, run in cases(args.rows).items():
        outs = {b: run(m) for b, m in impls.items()}
        ref = outs["python"]
        for b, out in outs.items():
            if not np.array_equal(np.asarray(out), np.asarray(ref)):
                raise SystemExit(f"{name}: backend {b} disagrees with the fallback")
        times = {b: best_of(lambda m=m: run(m), args.repeat) for b, m in impls.items()}
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<22}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in impls) + f"{speed:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
