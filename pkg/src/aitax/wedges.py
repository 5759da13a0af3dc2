"""Tax wedges implied by a planner solution, and the six sign claims.

Two equivalent routes to the intertemporal wedge on a capital stock:

* through consumption growth against the wealth return,
  tau = 1 - u'(c_t) / (beta * u'(c_{t+1}) * dFw/di), and
* through the multipliers, tau = -X^i / (lambda * dFw/di),

where X^i is the wage-ratio term the binding incentive constraint puts
into the stock FOC and dFw/di is the derivative of output plus
undepreciated stocks.  The two agree identically at any converged
solution; tests pin the agreement at 1e-8.

The intratemporal (labor) wedge is tau_y = 1 - nu'(l) / (w * u').

Sign claims, verified with margin TOL_SIGN per regime:

* cognitive binds: K out-earns AI in wealth returns (P1); the K wedge is
  positive and the AI wedge negative, both type-independent (P2); the
  cognitive labor wedge is negative, a marginal subsidy (P3);
* manual binds: the mirror image (P1p, P2p, P3p) with AI taxed,
  K subsidized, and manual labor subsidized.

Values inside the margin report "indeterminate", never "pass".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .economy import AgentKind
from .errors import DomainError, OutOfHorizonError
from .planner import PlannerSolution, Regime
from .preferences import nu_prime, u_prime
from .production import marginal_products

TOL_SIGN = 1e-6
TOL_EQUIV = 1e-8

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_INDETERMINATE = "indeterminate"
VERDICT_NOT_APPLICABLE = "not_applicable"

_STOCKS = ("k", "ai")


def intertemporal_wedge_formula(up_now, up_next, beta: float, wealth_return):
    """1 - u'(c_t) / (beta * u'(c_{t+1}) * wealth_return)."""
    return 1.0 - up_now / (beta * up_next * wealth_return)


def intratemporal_wedge_formula(nu_p, wage, up):
    """1 - nu'(l) / (w * u'(c))."""
    return 1.0 - nu_p / (wage * up)


def _wealth_returns(solution: PlannerSolution) -> tuple[np.ndarray, np.ndarray]:
    a = solution.allocation
    n = a.n_periods
    mp = marginal_products(
        solution.config.tech, a.eff_l_c[:n], a.eff_l_m[:n], a.k[:n], a.ai[:n]
    )
    return np.atleast_1d(mp.fw_k), np.atleast_1d(mp.fw_ai)


def _check_stock(stock: str) -> None:
    if stock not in _STOCKS:
        raise DomainError(f"stock must be one of {_STOCKS}, got {stock!r}")


def _transition(solution: PlannerSolution, t: int) -> tuple[int, int]:
    """Map a transition index onto (now, next) periods; stationary accepts any t."""
    n = solution.allocation.n_periods
    if n == 1:
        return 0, 0
    if not 0 <= t < n - 1:
        raise OutOfHorizonError(
            f"transition {t} out of range for horizon with {n} periods"
        )
    return t, t + 1


def intertemporal_wedge(
    solution: PlannerSolution, h: AgentKind, stock: str, t: int = 0
) -> float:
    """Wedge on the t -> t+1 savings margin of type h into the given stock."""
    _check_stock(stock)
    now, nxt = _transition(solution, t)
    prefs = solution.config.prefs
    c = solution.allocation.c_c if h is AgentKind.COGNITIVE else solution.allocation.c_m
    fw_k, fw_ai = _wealth_returns(solution)
    fw = (fw_k if stock == "k" else fw_ai)[nxt]
    return float(
        intertemporal_wedge_formula(
            u_prime(prefs, c[now]), u_prime(prefs, c[nxt]), prefs.beta, fw
        )
    )


def intratemporal_wedge(solution: PlannerSolution, h: AgentKind, t: int = 0) -> float:
    """Labor wedge of type h in period t; nan when the type supplies no labor."""
    a = solution.allocation
    n = a.n_periods
    if n > 1 and not 0 <= t < n:
        raise OutOfHorizonError(f"period {t} out of range for {n} periods")
    idx = 0 if n == 1 else t
    prefs = solution.config.prefs
    if h is AgentKind.COGNITIVE:
        l, c, w = a.l_c[idx], a.c_c[idx], solution.wages_c[idx]
    else:
        l, c, w = a.l_m[idx], a.c_m[idx], solution.wages_m[idx]
    if l <= 0.0:
        return math.nan
    return float(intratemporal_wedge_formula(nu_prime(prefs, l), w, u_prime(prefs, c)))


def wedge_via_multipliers(solution: PlannerSolution, stock: str, t: int = 0) -> float:
    """The same wedge computed as -X^i / (lambda * dFw/di) at the arrival period."""
    _check_stock(stock)
    _, nxt = _transition(solution, t)
    lam = float(solution.multipliers.lam[nxt])
    if lam <= 0.0:
        raise DomainError(f"resource multiplier must be positive, got {lam}")
    x = solution.multipliers.x_k if stock == "k" else solution.multipliers.x_ai
    fw_k, fw_ai = _wealth_returns(solution)
    fw = (fw_k if stock == "k" else fw_ai)[nxt]
    return float(-x[nxt] / (lam * fw))


@dataclass(frozen=True)
class PropositionCheck:
    """Verdict for one sign claim, with the quantities it was judged on."""

    key: str
    description: str
    verdict: str
    observed: dict[str, float]
    margin: float


@dataclass(frozen=True)
class WedgeReport:
    """All wedges of a solution plus the per-claim verdicts."""

    tau_k: dict[AgentKind, float]
    tau_ai: dict[AgentKind, float]
    tau_y: dict[AgentKind, float]
    tau_k_mult: float
    tau_ai_mult: float
    verdicts: dict[str, PropositionCheck]


def _sign_verdict(margin: float, tol: float) -> str:
    if margin > tol:
        return VERDICT_PASS
    if margin < -tol:
        return VERDICT_FAIL
    return VERDICT_INDETERMINATE


def _na(key: str, description: str) -> PropositionCheck:
    return PropositionCheck(key, description, VERDICT_NOT_APPLICABLE, {}, math.nan)


_DESCRIPTIONS = {
    "P1": "traditional capital has the higher wealth return when cognitive binds",
    "P2": "positive K wedge, negative AI wedge, both type-independent",
    "P3": "cognitive labor wedge negative (marginal subsidy)",
    "P1p": "AI capital has the higher wealth return when manual binds",
    "P2p": "positive AI wedge, negative K wedge, both type-independent",
    "P3p": "manual labor wedge negative (marginal subsidy)",
}


def verify_propositions(
    solution: PlannerSolution, tol_sign: float = TOL_SIGN
) -> dict[str, PropositionCheck]:
    """Judge the six sign claims; only the binding regime's side is applicable.

    Finite-horizon solutions are judged on the worst period/transition.
    """
    verdicts = {key: _na(key, desc) for key, desc in _DESCRIPTIONS.items()}
    regime = solution.regime
    if regime not in (Regime.COGNITIVE_BINDS, Regime.MANUAL_BINDS):
        return verdicts

    n = solution.allocation.n_periods
    transitions = range(max(n - 1, 1))
    fw_k, fw_ai = _wealth_returns(solution)

    tau = {
        (h, s): min(intertemporal_wedge(solution, h, s, t) for t in transitions)
        for h in AgentKind
        for s in _STOCKS
    }
    tau_max = {
        (h, s): max(intertemporal_wedge(solution, h, s, t) for t in transitions)
        for h in AgentKind
        for s in _STOCKS
    }
    type_gap = max(
        max(
            abs(
                intertemporal_wedge(solution, AgentKind.COGNITIVE, s, t)
                - intertemporal_wedge(solution, AgentKind.MANUAL, s, t)
            )
            for t in transitions
        )
        for s in _STOCKS
    )

    if regime is Regime.COGNITIVE_BINDS:
        taxed, subsidized, labor_kind = "k", "ai", AgentKind.COGNITIVE
        fw_margin = float(np.min(fw_k[1:] - fw_ai[1:])) if n > 1 else float(fw_k[0] - fw_ai[0])
        keys = ("P1", "P2", "P3")
    else:
        taxed, subsidized, labor_kind = "ai", "k", AgentKind.MANUAL
        fw_margin = float(np.min(fw_ai[1:] - fw_k[1:])) if n > 1 else float(fw_ai[0] - fw_k[0])
        keys = ("P1p", "P2p", "P3p")

    k1, k2, k3 = keys
    verdicts[k1] = PropositionCheck(
        k1, _DESCRIPTIONS[k1], _sign_verdict(fw_margin, tol_sign),
        {"fw_k": float(fw_k[-1]), "fw_ai": float(fw_ai[-1])}, fw_margin,
    )

    sign_margin = min(
        tau[(AgentKind.COGNITIVE, taxed)],
        -tau_max[(AgentKind.COGNITIVE, subsidized)],
    )
    verdict2 = _sign_verdict(sign_margin, tol_sign)
    if verdict2 == VERDICT_PASS and type_gap > tol_sign:
        verdict2 = VERDICT_FAIL
    verdicts[k2] = PropositionCheck(
        k2, _DESCRIPTIONS[k2], verdict2,
        {
            "tau_k": tau[(AgentKind.COGNITIVE, "k")],
            "tau_ai": tau[(AgentKind.COGNITIVE, "ai")],
            "type_gap": type_gap,
        },
        sign_margin,
    )

    periods = range(n)
    tau_y_vals = [intratemporal_wedge(solution, labor_kind, t) for t in periods]
    labor_margin = -max(tau_y_vals)
    verdicts[k3] = PropositionCheck(
        k3, _DESCRIPTIONS[k3], _sign_verdict(labor_margin, tol_sign),
        {"tau_y": max(tau_y_vals)}, labor_margin,
    )
    return verdicts


def compute_wedge_report(solution: PlannerSolution) -> WedgeReport:
    """Wedges at the first transition/period plus all claim verdicts."""
    return WedgeReport(
        tau_k={h: intertemporal_wedge(solution, h, "k") for h in AgentKind},
        tau_ai={h: intertemporal_wedge(solution, h, "ai") for h in AgentKind},
        tau_y={h: intratemporal_wedge(solution, h) for h in AgentKind},
        tau_k_mult=wedge_via_multipliers(solution, "k"),
        tau_ai_mult=wedge_via_multipliers(solution, "ai"),
        verdicts=verify_propositions(solution),
    )
