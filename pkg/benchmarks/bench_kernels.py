#!/usr/bin/env python3
"""Compare the compiled and pure-Python census kernels on full S_n enumerations.

    python benchmarks/bench_kernels.py [--n 7 8 9 10] [--repeat 3] [--workers 4]

Pure-Python kernels run at roughly 1.5e6 permutations/s; use
``--python-max-n`` to keep them off large n.
"""

import argparse
import time

from rencontres import kernels
from rencontres.oracle import enumerate_census


def best_of(repeat, fn):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[7, 8, 9, 10])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--python-max-n", type=int, default=10,
                        help="skip pure-Python kernels above this n")
    args = parser.parse_args()

    candidates = [
        ("python-lex", kernels.python_lex_block, 1),
        ("python-heap", kernels.python_heap_block, 1),
    ]
    if kernels.BACKEND == "cython":
        candidates += [
            ("cython-heap", kernels.compiled_block, 1),
            (f"cython-heap x{args.workers}", kernels.compiled_block, args.workers),
        ]
    else:
        print("compiled kernel not built; timing pure-Python kernels only")

    print(f"{'kernel':<18}{'n':>4}{'seconds':>12}{'perms/s':>14}{'speedup':>10}")
    for n in args.n:
        reference = None
        baseline = None
        for name, block, workers in candidates:
            if name.startswith("python") and n > args.python_max_n:
                continue
            secs, census = best_of(
                args.repeat, lambda: enumerate_census(n, horizon=n, workers=workers, block=block)
            )
            if reference is None:
                reference, baseline = census, secs
            elif census != reference:
                raise SystemExit(f"{name} disagrees with the first kernel at n={n}")
            rate = sum(census.counts) / secs if secs else float("inf")
            print(f"{name:<18}{n:>4}{secs:>12.5f}{rate:>14.3g}{baseline / secs:>9.1f}x")


if __name__ == "__main__":
    main()
