#!/usr/bin/env python3
"""Solve the bundled desk economies and print allocations, wedges, verdicts.

Usage: python3 scripts/run_desk_instances.py [--finite-T 20]
"""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from aitax import (  # noqa: E402
    AgentKind,
    SolveMode,
    compute_wedge_report,
    regime_a_economy,
    regime_b_economy,
    solve_finite_horizon,
    solve_steady_state,
    symmetric_economy,
)


def show(name, solution):
    a = solution.allocation
    report = compute_wedge_report(solution)
    c = AgentKind.COGNITIVE
    m = AgentKind.MANUAL
    print(f"== {name}: {solution.regime.value}")
    print(f"   c = ({a.c_c[0]:.6f}, {a.c_m[0]:.6f})  l = ({a.l_c[0]:.6f}, {a.l_m[0]:.6f})")
    print(f"   K = {a.k[0]:.6f}  AI = {a.ai[0]:.6f}  objective = {solution.objective:.6f}")
    print(f"   mu = ({solution.multipliers.mu_c:.6f}, {solution.multipliers.mu_m:.6f})"
          f"  slacks = ({solution.slack_c:.3e}, {solution.slack_m:.3e})")
    print(f"   tau_K = {report.tau_k[c]:+.6f}  tau_AI = {report.tau_ai[c]:+.6f}"
          f"  tau_y = ({report.tau_y[c]:+.6f}, {report.tau_y[m]:+.6f})")
    verdicts = "  ".join(f"{k}:{v.verdict}" for k, v in report.verdicts.items()
                         if v.verdict != "not_applicable")
    print(f"   {verdicts}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--finite-T", type=int, default=20,
                        help="horizon for the transition demo (0 to skip)")
    args = parser.parse_args()

    for name, config in (
        ("symmetric", symmetric_economy()),
        ("regime A (cognitive binds)", regime_a_economy()),
        ("regime B (manual binds)", regime_b_economy()),
    ):
        start = time.perf_counter()
        solution = solve_steady_state(config)
        show(f"{name} [{time.perf_counter() - start:.3f}s]", solution)

    if args.finite_T > 0:
        ss = solve_steady_state(regime_a_economy())
        config = replace(
            regime_a_economy(), mode=SolveMode.FINITE_HORIZON, horizon=args.finite_T,
            k0=float(ss.allocation.k[0]) / 2, ai0=float(ss.allocation.ai[0]) / 2,
        )
        start = time.perf_counter()
        path = solve_finite_horizon(config)
        a = path.allocation
        print(f"== regime A transition from half stocks, T = {args.finite_T} "
              f"[{time.perf_counter() - start:.3f}s]")
        print(f"   K path: {a.k[0]:.4f} -> {a.k[args.finite_T // 2]:.4f} -> {a.k[-1]:.4f}"
              f"  (steady state {ss.allocation.k[0]:.4f})")
        print(f"   max KKT residual {path.foc_residual:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
