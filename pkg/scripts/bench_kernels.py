#!/usr/bin/env python3
"""Benchmark the compiled projected-gradient kernels against the
pure-Python fallback on representative surface-subproblem sizes.

Usage: python scripts/bench_kernels.py [--repeats 20]
"""

import argparse
import time

import numpy as np

from starsec._core import pure

try:
    from starsec._core import _kernels as compiled
except ImportError:
    compiled = None


def real_instance(n, rng):
    def psd():
        r = rng.standard_normal((n, n))
        return r @ r.T + 0.05 * np.eye(n)
    return (psd(), psd(), rng.standard_normal(n), rng.standard_normal(n),
            np.full(n, 0.5), np.full(n, 0.5))


def complex_instance(n, rng):
    def psd():
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return r @ r.conj().T + 0.05 * np.eye(n)
    z = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
    x0 = np.full(n, 0.5 + 0.0j)
    return psd(), psd(), z[0], z[1], x0.copy(), x0.copy()


def time_solver(solver, instances, repeats):
    best = np.inf
    iters = 0
    for _ in range(repeats):
        tic = time.perf_counter()
        for args in instances:
            _, _, it, _ = solver(*args)
            iters += it
        best = min(best, time.perf_counter() - tic)
    return best, iters // repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--instances", type=int, default=10)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []
    for n in (8, 20, 40, 80):
        for kind, make, pure_fn, comp_fn in (
                ("real", real_instance, pure.solve_pair_disk_qp,
                 compiled.solve_pair_disk_qp if compiled else None),
                ("complex", complex_instance, pure.solve_pair_disk_qp_complex,
                 compiled.solve_pair_disk_qp_complex if compiled else None)):
            instances = [make(n, rng) for _ in range(args.instances)]
            t_pure, iters = time_solver(pure_fn, instances, args.repeats)
            row = {"L": n, "kind": kind, "pure_ms": 1e3 * t_pure / args.instances,
                   "iters": iters // args.instances}
            if comp_fn is not None:
                t_comp, _ = time_solver(comp_fn, instances, args.repeats)
                row["compiled_ms"] = 1e3 * t_comp / args.instances
                row["speedup"] = t_pure / t_comp
            rows.append(row)

    print(f"{'L':>4} {'kind':>8} {'iters':>6} {'pure ms':>9} "
          f"{'compiled ms':>12} {'speedup':>8}")
    for row in rows:
        comp = f"{row.get('compiled_ms', float('nan')):12.3f}"
        speed = f"{row.get('speedup', float('nan')):8.1f}"
        print(f"{row['L']:>4} {row['kind']:>8} {row['iters']:>6} "
              f"{row['pure_ms']:9.3f} {comp} {speed}")
    if compiled is None:
        print("\ncompiled kernels unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
