#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the three hot loops (map iteration, RK4 path, RK4 branch-to-event) on
both backends and reports wall times and speedups.  The two backends compute
bitwise-identical results, so only timing differs.

Usage:
    python benchmarks/bench_kernels.py [--quick] [--json PATH]
"""
import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from nontwist import _kernels_py  # noqa: E402

try:
    from nontwist import _kernels  # noqa: E402

    BACKENDS = [("compiled", _kernels), ("python", _kernels_py)]
except ImportError:
    BACKENDS = [("python", _kernels_py)]


def time_call(fn, *args, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run(quick=False):
    n_orbit = 50_000 if quick else 1_000_000
    n_path = 50_000 if quick else 1_000_000
    branch_budget = 100_000 if quick else 2_000_000

    a, b, k = 1.5, 0.5, 0.018
    tx = np.array([math.pi, 0.0])
    ty = np.array([1.0, 2.0])
    radii2 = np.array([(2e-5) ** 2, (2e-5) ** 2])
    branch_args = (
        a, b, k, math.pi - 9.8e-7, 1.0 + 1.9e-7, 1e-3, 1.0, branch_budget,
        tx, ty, radii2, 0, (2e-4) ** 2, -3.0, 6.0, 0.0, 2 * math.pi, 40,
    )

    cases = {
        "map_orbit": lambda mod: time_call(mod.map_orbit, a, b, k, 1.2, 0.55, n_orbit),
        "rk4_path": lambda mod: time_call(mod.rk4_path, a, b, k, 1.0, 0.3, 1e-3, n_path, 1.0),
        "rk4_branch": lambda mod: time_call(mod.rk4_branch, *branch_args),
    }
    sizes = {"map_orbit": n_orbit, "rk4_path": n_path, "rk4_branch": branch_budget}

    results = {}
    for case, runner in cases.items():
        results[case] = {name: runner(mod) for name, mod in BACKENDS}

    width = max(len(c) for c in cases) + 2
    header = f"{'kernel':<{width}}{'steps':>10}"
    for name, _ in BACKENDS:
        header += f"{name + ' [s]':>16}"
    if len(BACKENDS) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for case in cases:
        line = f"{case:<{width}}{sizes[case]:>10}"
        for name, _ in BACKENDS:
            line += f"{results[case][name]:>16.4f}"
        if len(BACKENDS) == 2:
            speedup = results[case]["python"] / results[case]["compiled"]
            line += f"{speedup:>10.1f}"
        print(line)
    if len(BACKENDS) == 1:
        print("\n(compiled kernels not built; showing the fallback only)")
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--json", metavar="PATH", help="also dump timings as JSON")
    args = ap.parse_args()
    results = run(quick=args.quick)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)
        print(f"\nwrote {args.json}")


if __name__ == "__main__":
    main()
