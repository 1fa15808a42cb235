#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the elementwise hot loops at the shapes that dominate a real run
(gradient/Hessian weights and the fused line-search evaluation), plus
the matmul-bound gradient assembly for context. Results print as a
table; pass --csv to also write them out.

Run:
    python benchmarks/bench_kernels.py [--frames N] [--dims M ...] [--csv out.csv]
"""

import argparse
import csv
import time

import numpy as np

import tlnmf.kernels.numpy_backend as numpy_backend

try:
    import tlnmf.kernels.numba_backend as numba_backend
except ImportError:
    numba_backend = None

EPS = 1e-12


def bench(fn, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases(x, vhat, t):
    return [
        ("is_div_sum", lambda k: k.is_div_sum(vhat, vhat + 0.5)),
        ("fit_loss", lambda k: k.fit_loss(x, vhat, EPS)),
        ("fit_loss_and_slope", lambda k: k.fit_loss_and_slope(x, vhat, t, EPS)),
        ("gradient_weights", lambda k: k.gradient_weights(x, vhat, EPS)),
        ("hessian_weights", lambda k: k.hessian_weights(x, vhat, EPS)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int, nargs="+", default=[64, 440])
    parser.add_argument("--frames", type=int, default=5407)
    parser.add_argument("--csv", help="also write results to this CSV file")
    args = parser.parse_args()

    if numba_backend is None:
        print("numba not importable; nothing to compare")
        return 1

    rows = []
    for m in args.dims:
        rng = np.random.default_rng(0)
        x = rng.standard_normal((m, args.frames))
        vhat = rng.uniform(1e-6, 3.0, (m, args.frames))
        t = rng.standard_normal((m, args.frames))
        print(f"\nshape {m} x {args.frames}")
        print(f"{'kernel':<22}{'numpy':>12}{'numba':>12}{'speedup':>9}")
        for name, fn in kernel_cases(x, vhat, t):
            fn(numba_backend)  # compile before timing
            t_np = bench(lambda: fn(numpy_backend))
            t_nb = bench(lambda: fn(numba_backend))
            print(f"{name:<22}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms"
                  f"{t_np / t_nb:>8.2f}x")
            rows.append((m, args.frames, name, t_np, t_nb, t_np / t_nb))
        # matmul-bound assembly stays BLAS either way; shown for context
        weights = numpy_backend.gradient_weights(x, vhat, EPS)
        t_mm = bench(lambda: weights @ x.T)
        print(f"{'(gradient matmul)':<22}{t_mm * 1e3:>10.2f}ms{'':>12}{'':>9}")

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ("m", "n", "kernel", "numpy_s", "numba_s", "speedup")
            )
            writer.writerows(rows)
        print(f"\nwrote {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
