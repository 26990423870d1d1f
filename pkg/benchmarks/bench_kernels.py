"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeats 5]

Both paths are called directly, so the PRINCERANK_DISABLE_NUMBA flag does not
matter here. JIT compilation is triggered once before timing.
"""
import argparse
import time

import numpy as np

from princerank import _kernels as K
from princerank.core import DEFAULT_PARAMS
from princerank.tactics import _column_table, _matrices


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n_batch):
    p = DEFAULT_PARAMS
    rng = np.random.default_rng(0)
    cols = _column_table(4, p.rho)
    codes = rng.integers(0, cols.shape[1], size=(n_batch, 4))
    Ts = _matrices(cols, codes)
    Ws = np.stack([K.weighted_matrix_np(T, p.beta, p.mu, p.lambda_) for T in Ts])
    ratios = np.full(n_batch, p.discount_ratio)
    s0 = np.ones(4)
    W = np.ascontiguousarray(Ws[0])
    args = (p.alpha, p.delta, p.discount_ratio, 1e-9, 10_000)
    return {
        "discounted (single, n=4)": (
            lambda: K.discounted_np(W, s0, *args, 0),
            lambda: K._discounted_loop(W, s0, *args, 0),
        ),
        f"focal batch ({n_batch} x n=4)": (
            lambda: K.discounted_focal_batch_np(Ws, s0, 0, p.alpha, p.delta, ratios, 1e-9, 10_000),
            lambda: K._discounted_focal_batch_loop(Ws, s0, 0, p.alpha, p.delta, ratios, 1e-9, 10_000),
        ),
        "step (n=4)": (lambda: K.step_np(W, s0), lambda: K._step_loop(W, s0)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--batch", type=int, default=20_000)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<28} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for name, (np_fn, nb_fn) in cases(args.batch).items():
        a, b = np_fn(), nb_fn()  # warm-up and JIT
        assert np.allclose(a[0], b[0], atol=1e-9)
        t_np, t_nb = best_of(np_fn, args.repeats), best_of(nb_fn, args.repeats)
        print(f"{name:<28} {t_np * 1e3:>10.3f}ms {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
