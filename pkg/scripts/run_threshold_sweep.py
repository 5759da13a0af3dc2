#!/usr/bin/env python3
"""Sweep AI productivity and bisect the regime-flip threshold.

Prints the wedge table for the 25-point log grid over a_AI in [0.1, 10]
and the bisected bracket where the binding incentive constraint flips
from the cognitive to the manual type.

Usage: python3 scripts/run_threshold_sweep.py [--points 25] [--tol 1e-3]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from aitax import find_threshold, sweep, threshold_economy  # noqa: E402
from aitax.presets import SWEEP_HI, SWEEP_LO, SWEEP_POINTS  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=SWEEP_POINTS)
    parser.add_argument("--tol", type=float, default=1e-3)
    args = parser.parse_args()

    config = threshold_economy()
    grid = np.geomspace(SWEEP_LO, SWEEP_HI, args.points)

    start = time.perf_counter()
    result = sweep(config, "a_AI", grid)
    elapsed = time.perf_counter() - start

    print(f"{'a_AI':>10} {'regime':>16} {'tau_K':>12} {'tau_AI':>12} "
          f"{'tau_y_c':>12} {'tau_y_m':>12} {'w_c/w_m':>10}")
    for p in result.points:
        if not p.ok:
            print(f"{p.value:>10.4f} {'FAILED':>16}  {p.error}")
            continue
        print(f"{p.value:>10.4f} {p.regime:>16} {p.tau_k:>12.3e} {p.tau_ai:>12.3e} "
              f"{p.tau_y_c:>12.3e} {p.tau_y_m:>12.3e} {p.wage_ratio:>10.4f}")
    print(f"sweep: {len(result.points)} solves in {elapsed:.2f}s, "
          f"{result.n_failures} failures")

    bracket = result.threshold_bracket
    if bracket is None:
        print("no single cognitive/manual flip on this grid; skipping bisection")
        return 1

    start = time.perf_counter()
    th = find_threshold(config, "a_AI", bracket[0], bracket[1], tol_param=args.tol)
    print(f"threshold bracket: [{th.lo:.6f}, {th.hi:.6f}] "
          f"(width {th.width:.2e}, {th.iterations} bisections, "
          f"{time.perf_counter() - start:.2f}s)")
    print(f"regimes: {th.lo_regime.value} -> {th.hi_regime.value}")
    if th.anomalies:
        print(f"anomalous midpoints: {th.anomalies}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
