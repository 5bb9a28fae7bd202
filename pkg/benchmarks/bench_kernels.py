"""Time the numba digit gather against the numpy fallback.

Runs the raw gather kernel and an end-to-end subset purity on a few state
sizes, prints per-backend timings and the speedup. Usage:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from entq import kernels
from entq.qstate import haar_state
from entq.reduce import purity

CASES = [
    # (d, n): interleaved subset keeps every other site, worst-case locality
    (2, 16),
    (2, 18),
    (2, 20),
    (2, 22),
    (3, 12),
    (4, 10),
]


def best_of(fn, repeats):
    fn()  # untimed: stabilizes JIT, allocator, and page faults
    fn()
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeat count")
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    print(f"{'d':>2} {'n':>3} {'amps':>10} | "
          f"{'gather numpy':>13} {'gather numba':>13} {'speedup':>8} | "
          f"{'purity numpy':>13} {'purity numba':>13} {'speedup':>8}")

    for d, n in CASES:
        state = haar_state(d, n, np.random.default_rng(7))
        subset = tuple(range(1, n + 1, 2))  # odd sites
        order = list(subset) + [i for i in range(1, n + 1) if i not in subset]

        gather_ms = {}
        purity_ms = {}
        for backend in ("numpy", "numba"):
            kernels.use_backend(backend)
            gather_ms[backend] = best_of(
                lambda: kernels.gather(state.amplitudes, d, order), args.repeats
            )
        for backend in ("numpy", "numba"):
            kernels.use_backend(backend)
            purity_ms[backend] = best_of(
                lambda: purity(state, subset), args.repeats
            )
        kernels.use_backend("numba")

        g_np, g_nb = gather_ms["numpy"], gather_ms["numba"]
        p_np, p_nb = purity_ms["numpy"], purity_ms["numba"]
        print(f"{d:>2} {n:>3} {d**n:>10} | "
              f"{g_np * 1e3:>11.2f}ms {g_nb * 1e3:>11.2f}ms {g_np / g_nb:>7.2f}x | "
              f"{p_np * 1e3:>11.2f}ms {p_nb * 1e3:>11.2f}ms {p_np / p_nb:>7.2f}x")


if __name__ == "__main__":
    main()
