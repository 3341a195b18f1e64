#!/usr/bin/env python3
"""Benchmark the dense singular-integral kernels: compiled vs NumPy backend.

Usage:  python benchmarks/bench_kernels.py [--sizes 256,512,1024,2048] [--repeats 3]
"""

import argparse
import time

import numpy as np

from dispersa import _kernels_py
from dispersa.kernels import singular_offset_weights

try:
    from dispersa import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run(sizes, repeats):
    rng = np.random.default_rng(1)
    alpha, t = 0.5, 1.0
    backends = [("numpy", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        print("compiled backend not built; timing the NumPy fallback only")

    header = f"{'kernel':<8} {'n':>6} " + " ".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        h = 100.0 / n
        values = rng.normal(size=n) + 1j * rng.normal(size=n)
        weights = singular_offset_weights(n, h, alpha)
        symbol = np.fft.fftshift((2 * np.pi * np.fft.fftfreq(n, d=h)) ** 3)
        for kernel, args in (("stein", (values, weights, h)),
                             ("phi", (values, symbol, t, weights, h))):
            row = f"{kernel:<8} {n:>6} "
            times = []
            for _, mod in backends:
                fn = getattr(mod, f"{kernel}_apply")
                fn(*args)  # warm up
                dt = best_of(lambda: fn(*args), repeats)
                times.append(dt)
                row += f" {dt * 1e3:>9.2f} ms"
            if len(times) == 2:
                row += f" {times[0] / times[1]:>8.1f}x"
            print(row)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="256,512,1024,2048")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    run([int(s) for s in args.sizes.split(",")], args.repeats)
