"""Compare the numba and numpy row-reduction kernels on random matrices over F_p.

Usage: python3 benchmarks/bench_rref.py [--sizes 32 64 128] [--p 101] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qci._kernels import HAVE_NUMBA, rref_numba, rref_numpy


def _time(fn, a: np.ndarray, p: int, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        work = a.copy()
        t0 = time.perf_counter()
        fn(work, p)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    parser.add_argument("--p", type=int, default=101)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not importable; only the numpy kernel can run")
    rng = np.random.default_rng(args.seed)
    # warm the JIT so compilation is not timed
    rref_numba(rng.integers(0, args.p, size=(4, 4)), args.p)
    print(f"{'n':>6} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")
    for n in args.sizes:
        a = rng.integers(0, args.p, size=(n, n)).astype(np.int64)
        r1, p1 = rref_numpy(a.copy(), args.p)
        r2, p2 = rref_numba(a.copy(), args.p)
        assert np.array_equal(r1, r2) and np.array_equal(p1, p2), "kernels disagree"
        t_np = _time(rref_numpy, a, args.p, args.repeat)
        t_nb = _time(rref_numba, a, args.p, args.repeat)
        print(f"{n:>6} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
