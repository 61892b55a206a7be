"""Compiled vs numpy kernels on a few fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from thuemahler import kernels

FORM = (1, 0, 0, -2)


def workloads():
    rng = np.random.default_rng(0)
    vals = rng.integers(1, 10**12, 20_000)
    return [
        ("small_values Z=1e6", lambda impl: kernels.small_values(FORM, 10**6, 400, 0, 400, impl=impl)),
        ("small_values Z=1e8", lambda impl: kernels.small_values(FORM, 10**8, 1600, 0, 1600, impl=impl)),
        ("sbox_scan S={2,3,5,7} B=300", lambda impl: kernels.sbox_scan(
            FORM, (2, 3, 5, 7), 1, 300, -300, 300, coprime=True, impl=impl)),
        ("gpf_array 20k values < 1e12", lambda impl: kernels.gpf_array(vals, impl=impl)),
    ]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.backend() != "cython":
        print("compiled kernels are not built; run: python3 setup.py build_ext --inplace")
        return 1
    print(f"{'workload':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads():
        tp, a = best_of(lambda: fn("python"), args.repeat)
        tc, b = best_of(lambda: fn("cython"), args.repeat)
        a = a if isinstance(a, tuple) else (a,)
        b = b if isinstance(b, tuple) else (b,)
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"{name:32s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}" + ("" if same else "  MISMATCH"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
