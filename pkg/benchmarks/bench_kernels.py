"""Time the numba kernels against the numpy / pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Compilation is triggered once before timing.  Without numba installed only
the fallback column is printed.
"""
import argparse
import time

import numpy as np

from crosscert import _accel
from crosscert.kernels import BranchAndBound, intersection_dims_numba, intersection_dims_numpy
from crosscert.lattice import Level, orbit_representatives

INTERSECTION_CASES = [(5, 2, 2, 2), (5, 2, 2, 3), (4, 3, 2, 2), (4, 5, 2, 2), (6, 2, 3, 3)]
SEARCH_CASES = [(4, 2, 2, 2), (4, 2, 2, 1), (3, 3, 1, 1)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_intersections(repeat):
    print("intersection dims        pairs   numba(s)   numpy(s)  agree")
    for n, q, k, l in INTERSECTION_CASES:
        X, Y = Level(n, k, q).bases, Level(n, l, q).bases
        t_np, a = best_of(lambda: intersection_dims_numpy(X, Y, q), repeat)
        if _accel.HAVE_NUMBA:
            intersection_dims_numba(X[:1], Y[:1], q)
            t_nb, b = best_of(lambda: intersection_dims_numba(X, Y, q), repeat)
            row = f"{t_nb:9.4f}  {t_np:9.4f}  {bool((a == b).all())}"
        else:
            row = f"{'-':>9}  {t_np:9.4f}  -"
        print(f"{f'n={n} q={q} k={k} l={l}':<20}  {len(X) * len(Y):>8}  {row}")


def search_instances():
    for n, q, k, l in SEARCH_CASES:
        meets = intersection_dims_numpy(Level(n, k, q).bases, Level(n, l, q).bases, q) > 0
        yield f"n={n} q={q} k={k} l={l}", meets, orbit_representatives(Level(n, k, q))
    # no symmetry here, so every vertex is a root
    meets = np.random.default_rng(3).random((60, 80)) < 0.4
    yield "random 60x80 p=0.4", meets, range(60)


def bench_search(repeat):
    print("branch and bound           nodes   numba(s)  python(s)  agree")
    for label, meets, roots in search_instances():
        t_py, a = best_of(lambda: BranchAndBound(meets, roots, use_numba=False).run(), repeat)
        if _accel.HAVE_NUMBA:
            BranchAndBound(meets, roots, use_numba=True).run()
            t_nb, b = best_of(lambda: BranchAndBound(meets, roots, use_numba=True).run(), repeat)
            row = f"{t_nb:9.4f}  {t_py:9.4f}  {a.best == b.best}"
        else:
            row = f"{'-':>9}  {t_py:9.4f}  -"
        print(f"{label:<20}  {a.nodes:>9}  {row}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    bench_intersections(args.repeat)
    print()
    bench_search(args.repeat)


if __name__ == "__main__":
    main()
