"""Compare the compiled and pure-Python measure kernels.

Run ``python3 benchmarks/bench_kernels.py``; pass ``--quick`` for a short run.
Both backends are imported directly, so the environment switch that
``querybounds.kernels`` honours does not matter here.
"""
from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from querybounds import _pykernels

try:
    from querybounds import _ckernels
except ImportError:
    _ckernels = None


def workloads(quick: bool):
    rng = np.random.default_rng(0)
    sizes = [(8, 256), (10, 1024)] if quick else [(8, 256), (10, 1024), (11, 2048)]
    for n, count in sizes:
        codes = np.arange(1 << n, dtype=np.int64)[:count]
        outs = rng.integers(0, 2, size=len(codes)).astype(np.int64)
        yield f"measure_all random n={n}", n, codes, outs
    n = 8 if quick else 10
    codes = np.arange(1 << n, dtype=np.int64)
    weights = np.array([bin(c).count("1") for c in codes])
    yield f"measure_all majority n={n}", n, codes, (weights > n // 2).astype(np.int64)


def bench(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'workload':<32} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for label, n, codes, outs in workloads(args.quick):
        py_args = (codes.tolist(), outs.tolist(), n)
        ref = _pykernels.measure_all(*py_args)
        got = _ckernels.measure_all(codes, outs, n)
        if [list(map(int, a)) for a in ref] != [list(map(int, a)) for a in got]:
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        t_py = bench(lambda: _pykernels.measure_all(*py_args), args.repeat)
        t_cy = bench(lambda: _ckernels.measure_all(codes, outs, n), args.repeat)
        print(f"{label:<32} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
