"""Parameter sweeps, regime-flip bisection, and the lump-sum transfer check.

A sweep re-solves the stationary planner problem along a grid of one
technology or productivity parameter, warm-starting each solve from its
neighbor.  Individual failures are recorded on the affected grid point
rather than aborting the sweep.  ``find_threshold`` then brackets the
parameter value where the binding incentive constraint flips from the
cognitive type to the manual type (or back) by bisection on the solved
regime.

``apply_ubi`` decomposes consumption as c-tilde = c-bar + ubi with the
uniform component entering feasibility through total consumption.  A
common planner undoes any uniform transfer one-for-one while interior,
so the solved c-tilde allocation matches the no-transfer solution; the
function exists to verify that neutrality and to bound the feasible
transfer size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .economy import SWEEP_PARAMS, AgentKind, EconomyConfig, validate_config, with_param
from .errors import ConfigError, DomainError, SolverError, ThresholdRangeError, UbiInfeasibleError
from .planner import EPS_C, PlannerSolution, Regime, solve_steady_state
from .wedges import intertemporal_wedge, intratemporal_wedge

_FLIP_REGIMES = (Regime.COGNITIVE_BINDS, Regime.MANUAL_BINDS)


@dataclass(frozen=True)
class SweepPoint:
    """Outcome at one grid value; metrics are nan when the solve failed."""

    value: float
    regime: str | None
    tau_k: float
    tau_ai: float
    tau_y_c: float
    tau_y_m: float
    wage_ratio: float
    objective: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _metrics(value: float, solution: PlannerSolution) -> SweepPoint:
    return SweepPoint(
        value=value,
        regime=solution.regime.value,
        tau_k=intertemporal_wedge(solution, AgentKind.COGNITIVE, "k"),
        tau_ai=intertemporal_wedge(solution, AgentKind.COGNITIVE, "ai"),
        tau_y_c=intratemporal_wedge(solution, AgentKind.COGNITIVE),
        tau_y_m=intratemporal_wedge(solution, AgentKind.MANUAL),
        wage_ratio=float(solution.wages_c[0] / solution.wages_m[0]),
        objective=solution.objective,
    )


def _failure(value: float, exc: Exception) -> SweepPoint:
    nan = math.nan
    return SweepPoint(value, None, nan, nan, nan, nan, nan, nan,
                      error=f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class SweepResult:
    param: str
    points: tuple[SweepPoint, ...]
    solutions: tuple[PlannerSolution | None, ...]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(p.value for p in self.points)

    @property
    def n_failures(self) -> int:
        return sum(not p.ok for p in self.points)

    def flip_brackets(self) -> tuple[tuple[float, float], ...]:
        """Adjacent solved pairs whose binding side changes (either direction)."""
        flips = []
        flip_values = {r.value for r in _FLIP_REGIMES}
        for a, b in zip(self.points, self.points[1:]):
            if a.ok and b.ok and a.regime != b.regime \
                    and a.regime in flip_values and b.regime in flip_values:
                flips.append((a.value, b.value))
        return tuple(flips)

    @property
    def threshold_bracket(self) -> tuple[float, float] | None:
        """The flip interval when the sweep contains exactly one flip."""
        flips = self.flip_brackets()
        return flips[0] if len(flips) == 1 else None


def sweep(config: EconomyConfig, param: str, values) -> SweepResult:
    """Solve the stationary problem at each grid value of one parameter.

    The grid must be strictly increasing.  Every implied configuration is
    validated before any solving starts, so an out-of-range value fails
    fast instead of surfacing as a mid-sweep solver error.
    """
    grid = [float(v) for v in values]
    if len(grid) < 2:
        raise DomainError(f"sweep needs at least 2 grid values, got {len(grid)}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("sweep grid must be strictly increasing")

    configs = [with_param(config, param, v) for v in grid]
    for v, cfg in zip(grid, configs):
        report = validate_config(cfg)
        if not report.ok:
            raise ConfigError(
                f"{param} = {v} gives an invalid economy: {'; '.join(report.messages())}"
            )

    points: list[SweepPoint] = []
    solutions: list[PlannerSolution | None] = []
    warm: PlannerSolution | None = None
    for v, cfg in zip(grid, configs):
        try:
            sol = solve_steady_state(cfg, warm=warm)
        except SolverError as exc:
            points.append(_failure(v, exc))
            solutions.append(None)
            continue
        points.append(_metrics(v, sol))
        solutions.append(sol)
        warm = sol
    return SweepResult(param=param, points=tuple(points), solutions=tuple(solutions))


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection bracket around a cognitive/manual regime flip."""

    param: str
    lo: float
    hi: float
    lo_regime: Regime
    hi_regime: Regime
    tol: float
    converged: bool
    iterations: int
    trace: tuple[tuple[float, str], ...]
    anomalies: tuple[tuple[float, str], ...]
    lo_solution: PlannerSolution
    hi_solution: PlannerSolution

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _solve_point(config: EconomyConfig, param: str, value: float,
                 warms: tuple[PlannerSolution | None, ...]) -> PlannerSolution:
    cfg = with_param(config, param, value)
    last: Exception | None = None
    for warm in (*warms, None):
        try:
            return solve_steady_state(cfg, warm=warm)
        except SolverError as exc:
            last = exc
    raise last  # type: ignore[misc]


def find_threshold(config: EconomyConfig, param: str, lo: float, hi: float,
                   tol_param: float = 1e-3) -> ThresholdResult:
    """Bisect the parameter interval [lo, hi] down to a regime-flip bracket.

    Endpoint order does not matter: flipped arguments give the identical
    bracket.  Both endpoints must solve to single-binding regimes and the
    binding side must differ, otherwise ThresholdRangeError.  A midpoint
    whose regime matches neither endpoint (possible in a vanishing window
    around the flip, where neither constraint binds beyond the solver
    tolerance) is recorded as an anomaly and retried at a deterministic
    off-center point; if that also fails to take a side, bisection stops
    early with converged=False and the current bracket.
    """
    if param not in SWEEP_PARAMS:
        raise DomainError(
            f"unknown sweep parameter {param!r}; allowed: {sorted(SWEEP_PARAMS)}"
        )
    if tol_param <= 0.0:
        raise DomainError(f"tol_param must be positive, got {tol_param}")
    lo, hi = float(min(lo, hi)), float(max(lo, hi))
    if lo == hi:
        raise DomainError("bisection endpoints must differ")

    sol_lo = _solve_point(config, param, lo, ())
    sol_hi = _solve_point(config, param, hi, (sol_lo,))
    trace = [(lo, sol_lo.regime.value), (hi, sol_hi.regime.value)]
    if sol_lo.regime not in _FLIP_REGIMES or sol_hi.regime not in _FLIP_REGIMES \
            or sol_lo.regime == sol_hi.regime:
        raise ThresholdRangeError(
            f"endpoints must bind on different single types; got "
            f"{param}={lo} -> {sol_lo.regime.value}, {param}={hi} -> {sol_hi.regime.value}"
        )

    anomalies: list[tuple[float, str]] = []
    iterations = 0
    converged = True
    max_iter = int(math.ceil(math.log2(max((hi - lo) / tol_param, 1.0)))) + 4
    while hi - lo > tol_param and iterations < max_iter:
        iterations += 1
        took_side = False
        # off-center retry keeps the second probe deterministic
        for frac in (0.5, 0.45):
            mid = lo + frac * (hi - lo)
            try:
                sol_mid = _solve_point(config, param, mid, (sol_lo, sol_hi))
            except SolverError as exc:
                anomalies.append((mid, f"{type(exc).__name__}: {exc}"))
                continue
            trace.append((mid, sol_mid.regime.value))
            if sol_mid.regime == sol_lo.regime:
                lo, sol_lo = mid, sol_mid
                took_side = True
            elif sol_mid.regime == sol_hi.regime:
                hi, sol_hi = mid, sol_mid
                took_side = True
            else:
                anomalies.append((mid, sol_mid.regime.value))
            if took_side:
                break
        if not took_side:
            converged = False
            break

    return ThresholdResult(
        param=param, lo=lo, hi=hi,
        lo_regime=sol_lo.regime, hi_regime=sol_hi.regime,
        tol=tol_param, converged=converged, iterations=iterations,
        trace=tuple(trace), anomalies=tuple(anomalies),
        lo_solution=sol_lo, hi_solution=sol_hi,
    )


def apply_ubi(config: EconomyConfig, ubi: float) -> PlannerSolution:
    """Stationary solve with consumption decomposed as c-tilde = c-bar + ubi.

    Returns the solution in c-tilde terms; the floor component of type h
    is ``c_tilde_h - ubi``.  With ubi = 0 this is exactly
    ``solve_steady_state(config)`` (the same object).  Raises
    UbiInfeasibleError when the transfer leaves no room for a positive
    floor, i.e. ubi is not strictly below the smallest optimal c-tilde.
    """
    if not np.isfinite(ubi) or ubi < 0.0:
        raise DomainError(f"ubi must be a finite nonnegative number, got {ubi}")
    baseline = solve_steady_state(config)
    if ubi == 0.0:
        return baseline
    a = baseline.allocation
    c_min = min(float(a.c_c[0]), float(a.c_m[0]))
    if ubi >= c_min - 10.0 * EPS_C:
        raise UbiInfeasibleError(
            f"ubi = {ubi} leaves no interior floor: smallest optimal "
            f"consumption is {c_min:.6g}"
        )
    return solve_steady_state(config, warm=baseline, ubi=ubi)
