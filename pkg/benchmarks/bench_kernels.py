"""Timing comparison of the jitted kernels against the pure-Python originals.

Run from the repo root:

    python benchmarks/bench_kernels.py

With FSGSENSE_NO_NUMBA=1 both columns time the same interpreted code, which
is a quick way to sanity-check the flag.
"""

import time

import numpy as np

from fsgsense import kernels


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ts = np.linspace(-1.5, 1.5, 200_001)
    thetas = np.linspace(0.0, np.pi, 200_001, endpoint=False)
    rng = np.random.default_rng(0)
    tr_s = rng.uniform(8.0, 12.0, size=400)
    sum_s = rng.uniform(15.0, 25.0, size=400)

    cases = [
        (
            "family_scan (200k points)",
            lambda: kernels.family_scan(ts, 4, 3.0, 100.0),
            lambda: kernels._family_scan(ts, 4, 3.0, 100.0),
        ),
        (
            "homodyne_scan (200k angles)",
            lambda: kernels.homodyne_scan(6.0, 0.4, 4.0, -0.3, 4, thetas),
            lambda: kernels._homodyne_scan(6.0, 0.4, 4.0, -0.3, 4, thetas),
        ),
        (
            "mle_trials (400 trials)",
            lambda: kernels.mle_trials(
                tr_s, sum_s, 2, 100, 2.0, 2.0, 1.6, -1.6, 0.27, -0.3, 0.3, 121, 1e-10
            ),
            lambda: kernels._mle_trials(
                tr_s, sum_s, 2, 100, 2.0, 2.0, 1.6, -1.6, 0.27, -0.3, 0.3, 121, 1e-10
            ),
        ),
    ]

    print(f"numba enabled: {kernels.NUMBA_ENABLED}")
    header = f"{'kernel':<30} {'dispatched':>12} {'pure python':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, fast, slow in cases:
        fast()  # trigger compilation outside the timed region
        t_fast = best_of(fast)
        t_slow = best_of(slow, repeats=3)
        print(f"{name:<30} {t_fast * 1e3:>10.2f}ms {t_slow * 1e3:>10.2f}ms {t_slow / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
