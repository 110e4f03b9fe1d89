"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--points 20000] [--repeat 5]

Both paths are checked for agreement before timing. The first numba call
(compilation or cache load) is excluded.
"""

import argparse
import time

import numpy as np

from growthops import _kernels
from growthops.mobius import random_ball_points
from growthops.multiindex import weak_compositions
from growthops.symbols import LacunarySeries


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(points, rng):
    N = 3
    exps = np.array([b for d in range(7) for b in weak_compositions(d, N)], dtype=np.int64)
    coeffs = rng.standard_normal(len(exps)) + 1j * rng.standard_normal(len(exps))
    Z = random_ball_points(N, points, rng, 0.99)
    lac = LacunarySeries(1, 1, 10, 0.5, 8)
    zp = random_ball_points(1, points, rng, 0.999)[:, 0]
    yield f"poly_eval  ({len(exps)} terms, N={N})", lambda: _kernels.poly_eval(exps, coeffs, Z)
    yield f"gap_eval   ({len(lac)} terms)", lambda: _kernels.gap_eval(lac._coeff_array, lac._exp_array, zp)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}  max|diff|")
    for name, fn in cases(args.points, rng):
        _kernels.use_numba(False)
        ref = fn()
        t_np = best_of(fn, args.repeat)
        prev = _kernels.use_numba(True)
        if not _kernels.numba_enabled():
            print(f"{name:34s} {t_np * 1e3:11.2f} {'n/a':>11s}")
            continue
        got = fn()
        t_nb = best_of(fn, args.repeat)
        _kernels.use_numba(prev)
        diff = float(np.max(np.abs(got - ref)))
        print(f"{name:34s} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:8.1f}  {diff:.1e}")


if __name__ == "__main__":
    main()
