#!/usr/bin/env python3
"""Compare the pure-Python and compiled stabilization kernels.

Workload: exhaustive first-fireable and seeded-random stabilization
sweeps over coordinate boxes, the hot loop behind the confluence and
fiber-counting suites.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from rootfire import _purekernel
from rootfire.firing import FiringParams, _bounds, step_budget
from rootfire.rootsys import from_spec

try:
    from rootfire import _speedups
except ImportError:
    _speedups = None

WORKLOADS = [
    ("A2", "symmetric", 2, 6),
    ("B2", "truncated", 2, 6),
    ("G2", "symmetric", 2, 5),
    ("B3", "symmetric", 1, 3),
]


def run(kernel, rs, params, bound, seeds):
    lo, hi = _bounds(rs, params)
    total_steps = 0
    coords = [
        tuple((i % (2 * bound + 1)) - bound for i in range(j, j + rs.rank))
        for j in range(0, (2 * bound + 1) ** rs.rank)
    ]
    for w in coords:
        budget = step_budget(rs, w, params)
        args = (w, rs.pos_root_weights, rs.pos_coroots, lo, hi, budget)
        total_steps += kernel.stabilize(*args)[1]
        for seed in seeds:
            total_steps += kernel.stabilize(*args, seed)[1]
    return total_steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    print(f"{'workload':<28}{'pure':>10}{'compiled':>12}{'speedup':>10}")
    for spec, kind, k, bound in WORKLOADS:
        rs = from_spec(spec)
        params = FiringParams.make(kind, k, k)
        seeds = list(range(args.seeds))
        best = {}
        for name, kernel in [("pure", _purekernel), ("compiled", _speedups)]:
            if kernel is None:
                best[name] = None
                continue
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                steps = run(kernel, rs, params, bound, seeds)
                times.append(time.perf_counter() - t0)
            best[name] = min(times)
        label = f"{spec} {kind} k={k} box={bound}"
        pure_t = best["pure"]
        comp_t = best["compiled"]
        if comp_t is None:
            print(f"{label:<28}{pure_t:>9.3f}s{'(no ext)':>12}{'-':>10}")
        else:
            print(
                f"{label:<28}{pure_t:>9.3f}s{comp_t:>11.3f}s{pure_t / comp_t:>9.1f}x"
            )


if __name__ == "__main__":
    main()
