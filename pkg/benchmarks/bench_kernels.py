"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from liefold import _kernels_py
from liefold.exact import auto_primes

try:
    from liefold import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng, p):
    # matrix sizes follow the representations used for Hitchin forms
    for d, n in [(5, 7), (7, 8), (9, 8), (11, 7)]:
        pairs = rng.integers(0, p, (d * (d - 1) // 2, n, n))
        yield f"pair_dp d={d} n={n}", lambda m, a=pairs, d=d: m.pair_dp(a, d, p)
    for m_, n in [(8, 8), (10, 8), (12, 6)]:
        mats = rng.integers(0, p, (m_, n, n))
        yield f"chain_dp m={m_} n={n}", lambda m, a=mats: m.chain_dp(a, p)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    p = auto_primes(1, args.seed)[0]
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<22}{'numpy (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for label, run in cases(rng, p):
        slow = best_of(lambda: run(_kernels_py), args.repeat)
        if compiled is None:
            print(f"{label:<22}{slow:>12.4f}{'n/a':>12}{'':>10}")
            continue
        fast = best_of(lambda: run(compiled), args.repeat)
        same = np.array_equal(run(_kernels_py), run(compiled))
        flag = "" if same else "  MISMATCH"
        print(f"{label:<22}{slow:>12.4f}{fast:>12.4f}{slow / fast:>9.1f}x{flag}")


if __name__ == "__main__":
    main()
