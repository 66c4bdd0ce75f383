"""Time the compiled and NumPy pair-counting kernels.

    python3 benchmarks/bench_pairs.py [--sizes 1000,5000,10000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from milambda._kernels import cython_pair_counts, python_pair_counts
from milambda.datagen import SeededStream


def bench(fn, x, eps, m, repeat):
    fn(x, eps, m)  # warm up
    return min(timeit.repeat(lambda: fn(x, eps, m), number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="1000,5000,10000")
    p.add_argument("--embedding", type=int, default=2)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()

    print(f"{'n':>7}  {'python (s)':>11}  {'cython (s)':>11}  {'speedup':>8}")
    for n in (int(v) for v in args.sizes.split(",")):
        x = SeededStream(n).normal(n)
        eps = 0.5 * float(np.std(x, ddof=1))
        t_py = bench(python_pair_counts, x, eps, args.embedding, args.repeat)
        if cython_pair_counts is None:
            print(f"{n:>7}  {t_py:11.4f}  {'not built':>11}")
            continue
        t_cy = bench(cython_pair_counts, x, eps, args.embedding, args.repeat)
        same = python_pair_counts(x, eps, args.embedding)[:3] == cython_pair_counts(x, eps, args.embedding)[:3]
        print(f"{n:>7}  {t_py:11.4f}  {t_cy:11.4f}  {t_py / t_cy:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
