#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each kernel on representative hot-loop workloads (pattern mining over a
long repetitive token sequence, distance accumulation over a wide support,
KS sweep over large samples) with both backends and reports the speedup.
Results are asserted equal before timing, so a reported speedup is always a
speedup on identical semantics.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--scale FACTOR]
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from chorale_grader._kernels import _pure

try:
    from chorale_grader._kernels import _native
except ImportError:
    _native = None


def _best_of(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _workloads(scale: float):
    rng = random.Random(13)
    n_tokens = int(2000 * scale)
    tokens = array("q", (rng.randrange(5) for _ in range(n_tokens)))

    n_support = int(200_000 * scale)
    p = array("d", (rng.random() for _ in range(n_support)))
    q = array("d", (rng.random() for _ in range(n_support)))
    total_p = sum(p)
    total_q = sum(q)
    p = array("d", (x / total_p for x in p))
    q = array("d", (x / total_q for x in q))
    gaps = array("d", (rng.random() for _ in range(n_support - 1)))

    n_samples = int(200_000 * scale)
    a = array("d", sorted(rng.gauss(0, 1) for _ in range(n_samples)))
    b = array("d", sorted(rng.gauss(0.3, 1.2) for _ in range(n_samples)))

    return [
        ("suffix_match_lengths", "suffix_match_lengths", (tokens,)),
        ("greedy_occurrences", "greedy_occurrences", (tokens, 0, 4)),
        ("w1_accumulate", "w1_accumulate", (p, q, gaps)),
        ("ks_statistic", "ks_statistic", (a, b)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--scale", type=float, default=1.0)
    args = parser.parse_args()

    print(f"pure backend:   {_pure.BACKEND}")
    if _native is None:
        print("native backend: NOT BUILT (install with Cython + a C compiler)")
    else:
        print(f"native backend: {_native.BACKEND}")
    print()

    header = f"{'kernel':<24}{'pure (s)':>12}{'native (s)':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, attr, call_args in _workloads(args.scale):
        pure_fn = getattr(_pure, attr)
        pure_time = _best_of(pure_fn, call_args, args.repeats)
        if _native is None:
            print(f"{name:<24}{pure_time:>12.4f}{'-':>12}{'-':>10}")
            continue
        native_fn = getattr(_native, attr)
        if pure_fn(*call_args) != native_fn(*call_args):
            raise SystemExit(f"backend mismatch in {name}; refusing to benchmark")
        native_time = _best_of(native_fn, call_args, args.repeats)
        print(
            f"{name:<24}{pure_time:>12.4f}{native_time:>12.4f}"
            f"{pure_time / native_time:>9.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
