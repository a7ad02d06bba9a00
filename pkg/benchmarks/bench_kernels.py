"""Time the compiled batch kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat R] [--size N]
"""
import argparse
import timeit

import numpy as np

from lieball import _kernels_py

try:
    from lieball import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(size: int):
    rng = np.random.default_rng(0)
    xsq = rng.uniform(0.0, 100.0, size)
    x = rng.uniform(0.0, 0.9, size)
    s = 1.0 + 3.7j
    return {
        "dual_hahn_batch k=12": lambda m: m.dual_hahn_batch(12, xsq, 0.5, 1.0, 0.7),
        "hyp2f1_series_batch": lambda m: m.hyp2f1_series_batch(s, 2.0 - s, 1.5, x),
    }


def first(out):
    # hyp2f1_series_batch also returns term counts and flags
    return np.asarray(out[0] if isinstance(out, tuple) else out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=2000)
    args = ap.parse_args(argv)
    print(f"{'kernel':24s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in cases(args.size).items():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:24s} {1e3 * tp:12.2f} {'n/a':>12s}")
            continue
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        diff = np.max(np.abs(first(fn(_kernels_py)) - first(fn(_kernels))))
        print(f"{name:24s} {1e3 * tp:12.2f} {1e3 * tc:12.2f} {tp / tc:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
