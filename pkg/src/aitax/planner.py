"""Constrained-efficient planner: first best, steady state, finite horizon.

The planner maximizes population-weighted lifetime utility subject to the
resource constraint and, when they bind, incentive-compatibility
constraints (each type must prefer its own bundle to mimicking the other's
labor income).  Binding constraints put wage-ratio terms into the
first-order conditions:

* stock FOCs gain X-terms, mu * nu'(mimic labor) * l_other * d(wage ratio)/d(stock),
  which generate the capital and AI wedges;
* labor FOCs gain Y-terms from the same wage-ratio channel.

Solution method: active-set Newton.  Solve without constraints; if an
incentive constraint is violated impose it as an equality with its
multiplier as an unknown, and accept the first regime that converges with
an admissible multiplier and a slack other constraint.  Regimes are tried
most-violated first, then the other single constraint, then both.

All solves are deterministic: fixed restart schedule, no randomness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .economy import (
    AgentKind,
    Allocation,
    EconomyConfig,
    SolveMode,
    validate_config,
)
from .errors import (
    ConfigError,
    InconsistentMultipliersError,
    NoInteriorSolutionError,
    NoRegimeFoundError,
    SolverError,
)
from .newton import newton_solve
from .preferences import nu_eval, nu_prime, u_eval, u_prime
from .production import (
    AssumptionReport,
    Grid4,
    TechEvaluation,
    check_assumptions,
    evaluate,
    marginal_products,
    mpl_ratio_gradient,
    output,
)

TOL_NEWTON = 1e-10
TOL_ICC = 1e-8
EPS_C = 1e-10

# restart schedule: log-spaced scalings applied to the cold-start point
RESTART_SCALINGS = (1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0, 0.0625)

_MU_INIT_FRACTION = 0.05


class Regime(str, enum.Enum):
    NONE_BIND = "none_bind"
    COGNITIVE_BINDS = "cognitive_binds"
    MANUAL_BINDS = "manual_binds"
    BOTH_BIND = "both_bind"


@dataclass(frozen=True)
class Multipliers:
    """Shadow values attached to a planner solution.

    ``lam`` is the per-period resource multiplier in current value; mu_c and
    mu_m are the lifetime incentive-constraint multipliers.  ``x_k`` and
    ``x_ai`` are the wage-ratio terms appearing in the stock FOCs, and
    ``y_term`` the wage-ratio term in the binding type's own-labor FOC
    (zero when nothing binds).
    """

    lam: np.ndarray
    mu_c: float
    mu_m: float
    x_k: np.ndarray
    x_ai: np.ndarray
    y_term: np.ndarray


@dataclass(frozen=True)
class PlannerSolution:
    config: EconomyConfig
    regime: Regime
    allocation: Allocation
    multipliers: Multipliers
    wages_c: np.ndarray
    wages_m: np.ndarray
    slack_c: float
    slack_m: float
    objective: float
    foc_residual: float
    assumptions: AssumptionReport
    warnings: tuple[str, ...] = ()

    @property
    def stationary(self) -> bool:
        return self.allocation.n_periods == 1


@dataclass(frozen=True)
class _ChainTerms:
    """Wage-ratio pieces of the FOCs at one point (scalar or per-period arrays)."""

    ev: TechEvaluation
    r_mc: object  # w_m / w_c
    r_cm: object
    lt_c: object  # labor the cognitive type supplies when mimicking
    lt_m: object
    x_k: object
    x_ai: object
    y_c: object  # ICC_c wage term in the l_c FOC (the Y-term when cognitive binds)
    y_m: object
    cross_c: object  # ICC_m terms entering the l_c FOC
    cross_m: object


def _chain_terms(config: EconomyConfig, l_c, l_m, el_c, el_m, k, ai, mu_c, mu_m) -> _ChainTerms:
    prefs = config.prefs
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    ev = evaluate(config.tech, config, el_c, el_m, k, ai)

    ratio = ev.mp.f_lc / ev.mp.f_lm
    grad = mpl_ratio_gradient(config.tech, el_c, el_m, k, ai)
    zr = z_m / z_c
    r_mc = zr / ratio
    g_mc = tuple(-zr * g / ratio**2 for g in grad)
    r_cm = 1.0 / r_mc
    g_cm = tuple(g / zr for g in grad)

    lt_c = l_m * r_mc
    lt_m = l_c * r_cm
    nup_lt_c = nu_prime(prefs, lt_c)
    nup_lt_m = nu_prime(prefs, lt_m)

    x_k = mu_c * nup_lt_c * l_m * g_mc[2] + mu_m * nup_lt_m * l_c * g_cm[2]
    x_ai = mu_c * nup_lt_c * l_m * g_mc[3] + mu_m * nup_lt_m * l_c * g_cm[3]

    y_c = mu_c * nup_lt_c * l_m * g_mc[0] * pi_c * z_c
    y_m = mu_m * nup_lt_m * l_c * g_cm[1] * pi_m * z_m
    cross_c = mu_m * nup_lt_m * (r_cm + l_c * g_cm[0] * pi_c * z_c)
    cross_m = mu_c * nup_lt_c * (r_mc + l_m * g_mc[1] * pi_m * z_m)

    return _ChainTerms(
        ev=ev, r_mc=r_mc, r_cm=r_cm, lt_c=lt_c, lt_m=lt_m,
        x_k=x_k, x_ai=x_ai, y_c=y_c, y_m=y_m, cross_c=cross_c, cross_m=cross_m,
    )


def _flow_slacks(prefs, ct_c, ct_m, l_c, l_m, lt_c, lt_m):
    base_c = u_eval(prefs, ct_c) - nu_eval(prefs, l_c)
    base_m = u_eval(prefs, ct_m) - nu_eval(prefs, l_m)
    slack_c = base_c - (u_eval(prefs, ct_m) - nu_eval(prefs, lt_c))
    slack_m = base_m - (u_eval(prefs, ct_c) - nu_eval(prefs, lt_m))
    return slack_c, slack_m


def _active_mus(x, active):
    mu_c = mu_m = 0.0
    idx = 7
    if AgentKind.COGNITIVE in active:
        mu_c = x[idx]
        idx += 1
    if AgentKind.MANUAL in active:
        mu_m = x[idx]
    return mu_c, mu_m


def _stationary_residual_fn(config: EconomyConfig, active: tuple, ubi: float):
    prefs, tech = config.prefs, config.tech
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    beta = prefs.beta
    g = config.g

    def f(x: np.ndarray) -> np.ndarray:
        cb_c, cb_m, l_c, l_m, k, ai, lam = x[:7]
        mu_c, mu_m = _active_mus(x, active)
        ct_c = cb_c + ubi
        ct_m = cb_m + ubi
        el_c = pi_c * l_c * z_c
        el_m = pi_m * l_m * z_m
        ch = _chain_terms(config, l_c, l_m, el_c, el_m, k, ai, mu_c, mu_m)
        ev = ch.ev

        r = np.empty(7 + len(active))
        r[0] = u_prime(prefs, ct_c) * (pi_c + mu_c - mu_m) - lam * pi_c
        r[1] = u_prime(prefs, ct_m) * (pi_m + mu_m - mu_c) - lam * pi_m
        r[2] = -(pi_c + mu_c) * nu_prime(prefs, l_c) + ch.y_c + ch.cross_c + lam * pi_c * ev.w_c
        r[3] = -(pi_m + mu_m) * nu_prime(prefs, l_m) + ch.y_m + ch.cross_m + lam * pi_m * ev.w_m
        r[4] = 1.0 - beta * ev.mp.fw_k - beta * ch.x_k / lam
        r[5] = 1.0 - beta * ev.mp.fw_ai - beta * ch.x_ai / lam
        r[6] = ev.y - pi_c * ct_c - pi_m * ct_m - tech.delta_k * k - tech.delta_ai * ai - g
        idx = 7
        slack_c, slack_m = _flow_slacks(prefs, ct_c, ct_m, l_c, l_m, ch.lt_c, ch.lt_m)
        if AgentKind.COGNITIVE in active:
            r[idx] = slack_c
            idx += 1
        if AgentKind.MANUAL in active:
            r[idx] = slack_m
        return r

    return f


def _stationary_bounds(active: tuple) -> np.ndarray:
    lo = np.array([EPS_C, EPS_C, 1e-10, 1e-10, 1e-10, 1e-10, 1e-12])
    return np.concatenate([lo, np.full(len(active), -np.inf)])


def _capital_subsolve(config: EconomyConfig, el_c: float, el_m: float):
    """Stocks consistent with the no-ICC stationary stock FOCs, labor held fixed.

    A coarse log-grid presolve picks Newton starts; marginal products can
    vary by orders of magnitude across technologies, so fixed starts are
    not reliable.  Returns None when no interior stock pair is found.
    """
    beta, tech = config.prefs.beta, config.tech

    def f(u):
        k, ai = np.exp(u)
        mp = marginal_products(tech, el_c, el_m, k, ai)
        return np.array([beta * mp.fw_k - 1.0, beta * mp.fw_ai - 1.0])

    grid = np.linspace(np.log(1e-3), np.log(1e4), 25)
    kk, aa = np.meshgrid(grid, grid, indexing="ij")
    with np.errstate(all="ignore"):
        mp = marginal_products(tech, el_c, el_m, np.exp(kk), np.exp(aa))
        score = np.abs(beta * mp.fw_k - 1.0) + np.abs(beta * mp.fw_ai - 1.0)
    score = np.where(np.isfinite(score), score, np.inf)
    order = np.argsort(score, axis=None)
    for flat in order[:5]:
        i, j = np.unravel_index(flat, score.shape)
        res = newton_solve(f, np.array([kk[i, j], aa[i, j]]), tol=1e-9, max_iter=80)
        if res.converged:
            k, ai = np.exp(res.x)
            if k < 1e9 and ai < 1e9:
                return float(k), float(ai)
    return None


def _cold_start(config: EconomyConfig, ubi: float) -> np.ndarray:
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    l0 = 0.5
    el_c = pi_c * l0 * z_c
    el_m = pi_m * l0 * z_m
    stocks = _capital_subsolve(config, el_c, el_m)
    k0, ai0 = stocks if stocks is not None else (1.0, 1.0)
    y = output(config.tech, el_c, el_m, k0, ai0)
    spend = y - config.tech.delta_k * k0 - config.tech.delta_ai * ai0 - config.g
    c0 = spend if spend > 0.05 * y else 0.05 * y
    cb = max(c0 - ubi, 0.05 * c0)
    lam0 = float(u_prime(config.prefs, cb + ubi))
    return np.array([cb, cb, l0, l0, k0, ai0, lam0])


def _scaled_start(base: np.ndarray, s: float, config: EconomyConfig, active: tuple, ubi: float) -> np.ndarray:
    x = base.copy()
    x[:6] *= s
    x[6] = float(u_prime(config.prefs, max(x[0] + ubi, EPS_C)))
    mu0 = _MU_INIT_FRACTION * min(config.cognitive.pi, config.manual.pi)
    return np.concatenate([x, np.full(len(active), mu0)])


def _solve_active(
    config: EconomyConfig,
    active: tuple,
    ubi: float,
    warm_x: np.ndarray | None,
    base: np.ndarray | None,
) -> np.ndarray:
    f = _stationary_residual_fn(config, active, ubi)
    lower = _stationary_bounds(active)
    starts = []
    if warm_x is not None:
        starts.append(np.maximum(warm_x, lower + 1e-12))
    if base is None:
        base = _cold_start(config, ubi)
    for s in RESTART_SCALINGS:
        starts.append(_scaled_start(base[:7], s, config, active, ubi))
    for x0 in starts:
        res = newton_solve(f, x0, tol=TOL_NEWTON, lower=lower)
        if res.converged:
            return res.x
    label = "+".join(k.value for k in active) or "none"
    raise NoInteriorSolutionError(
        f"stationary Newton failed from all restarts (active: {label})"
    )


def _classify(mu_c: float, mu_m: float, slack_c: float, slack_m: float, strict: bool = False) -> Regime:
    binds = []
    for kind, mu, slack in (
        (AgentKind.COGNITIVE, mu_c, slack_c),
        (AgentKind.MANUAL, mu_m, slack_m),
    ):
        if mu > TOL_ICC:
            if abs(slack) > TOL_ICC and strict:
                raise InconsistentMultipliersError(
                    f"{kind.value} multiplier {mu:.3e} positive but slack {slack:.3e} nonzero"
                )
            binds.append(kind)
    if not binds:
        return Regime.NONE_BIND
    if binds == [AgentKind.COGNITIVE]:
        return Regime.COGNITIVE_BINDS
    if binds == [AgentKind.MANUAL]:
        return Regime.MANUAL_BINDS
    return Regime.BOTH_BIND


def detect_regime(solution: PlannerSolution) -> Regime:
    """Classify a solution from its multipliers and incentive slacks.

    A type binds when its multiplier exceeds TOL_ICC and its slack is zero
    within TOL_ICC; a positive multiplier with nonzero slack raises
    InconsistentMultipliersError.
    """
    return _classify(
        solution.multipliers.mu_c,
        solution.multipliers.mu_m,
        solution.slack_c,
        solution.slack_m,
        strict=True,
    )


def _build_stationary(config: EconomyConfig, active: tuple, x: np.ndarray, ubi: float) -> PlannerSolution:
    prefs = config.prefs
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    cb_c, cb_m, l_c, l_m, k, ai, lam = (float(v) for v in x[:7])
    mu_c, mu_m = (float(v) for v in _active_mus(x, active))
    ct_c = cb_c + ubi
    ct_m = cb_m + ubi
    el_c = pi_c * l_c * z_c
    el_m = pi_m * l_m * z_m
    ch = _chain_terms(config, l_c, l_m, el_c, el_m, k, ai, mu_c, mu_m)
    flow_c, flow_m = _flow_slacks(prefs, ct_c, ct_m, l_c, l_m, ch.lt_c, ch.lt_m)
    scale = 1.0 / (1.0 - prefs.beta)
    slack_c = float(flow_c) * scale
    slack_m = float(flow_m) * scale

    arr = lambda v: np.array([float(v)])
    alloc = Allocation(
        c_c=arr(ct_c), c_m=arr(ct_m), l_c=arr(l_c), l_m=arr(l_m),
        eff_l_c=arr(el_c), eff_l_m=arr(el_m),
        k=np.array([k, k]), ai=np.array([ai, ai]),
    )
    y_term = ch.y_c if mu_c > 0.0 else ch.y_m
    mults = Multipliers(
        lam=arr(lam), mu_c=mu_c, mu_m=mu_m,
        x_k=arr(ch.x_k), x_ai=arr(ch.x_ai), y_term=arr(y_term),
    )
    res = foc_residuals(config, alloc, mults)
    foc_norm = max(float(np.max(np.abs(np.atleast_1d(v)))) for v in res.values())
    flows = pi_c * (u_eval(prefs, ct_c) - nu_eval(prefs, l_c)) + pi_m * (
        u_eval(prefs, ct_m) - nu_eval(prefs, l_m)
    )
    warnings = []
    if mu_c > pi_m - 1e-9:
        warnings.append(f"mu_c = {mu_c:.6g} is not below pi_m = {pi_m:.6g}")
    if mu_m > pi_c - 1e-9:
        warnings.append(f"mu_m = {mu_m:.6g} is not below pi_c = {pi_c:.6g}")
    report = check_assumptions(config.tech, Grid4.log_around((el_c, el_m, k, ai)))
    return PlannerSolution(
        config=config,
        regime=_classify(mu_c, mu_m, slack_c, slack_m),
        allocation=alloc,
        multipliers=mults,
        wages_c=arr(ch.ev.w_c),
        wages_m=arr(ch.ev.w_m),
        slack_c=slack_c,
        slack_m=slack_m,
        objective=float(flows) * scale,
        foc_residual=foc_norm,
        assumptions=report,
        warnings=tuple(warnings),
    )


def _require_valid(config: EconomyConfig) -> None:
    report = validate_config(config)
    if not report.ok:
        raise ConfigError("; ".join(report.messages()))


def _warm_vector(warm: PlannerSolution | None, active: tuple, ubi: float) -> np.ndarray | None:
    if warm is None or warm.allocation.n_periods != 1:
        return None
    a = warm.allocation
    head = np.array([
        max(float(a.c_c[0]) - ubi, EPS_C),
        max(float(a.c_m[0]) - ubi, EPS_C),
        float(a.l_c[0]), float(a.l_m[0]), float(a.k[0]), float(a.ai[0]),
        float(warm.multipliers.lam[0]),
    ])
    mus = []
    stored = {AgentKind.COGNITIVE: warm.multipliers.mu_c, AgentKind.MANUAL: warm.multipliers.mu_m}
    mu0 = _MU_INIT_FRACTION * 0.5
    for kind in (AgentKind.COGNITIVE, AgentKind.MANUAL):
        if kind in active:
            mus.append(stored[kind] if stored[kind] > 0.0 else mu0)
    return np.concatenate([head, np.asarray(mus)])


def first_best(config: EconomyConfig, *, ubi: float = 0.0, warm: PlannerSolution | None = None) -> PlannerSolution:
    """Planner optimum ignoring both incentive constraints.

    The returned slacks report whether that optimum is incentive-compatible;
    negative slack means the corresponding constraint would bind.
    """
    _require_valid(config)
    x = _solve_active(config, (), ubi, _warm_vector(warm, (), ubi), None)
    return _build_stationary(config, (), x, ubi)


def solve_steady_state(
    config: EconomyConfig,
    *,
    warm: PlannerSolution | None = None,
    ubi: float = 0.0,
) -> PlannerSolution:
    """Stationary constrained-efficient allocation via active-set Newton."""
    _require_valid(config)
    fb_x = _solve_active(config, (), ubi, _warm_vector(warm, (), ubi), None)
    fb = _build_stationary(config, (), fb_x, ubi)
    if fb.slack_c >= -TOL_ICC and fb.slack_m >= -TOL_ICC:
        return fb

    first = AgentKind.COGNITIVE if fb.slack_c <= fb.slack_m else AgentKind.MANUAL
    ladder = [
        (first,),
        (first.other,),
        (AgentKind.COGNITIVE, AgentKind.MANUAL),
    ]
    failures = [f"first_best slacks ({fb.slack_c:.3e}, {fb.slack_m:.3e})"]
    for active in ladder:
        try:
            x = _solve_active(config, active, ubi, _warm_vector(warm, active, ubi), fb_x)
        except SolverError as exc:
            failures.append(str(exc))
            continue
        sol = _build_stationary(config, active, x, ubi)
        mu_ok = all(
            (sol.multipliers.mu_c if kind is AgentKind.COGNITIVE else sol.multipliers.mu_m) >= 0.0
            for kind in active
        )
        slack_ok = all(
            (sol.slack_c if kind is AgentKind.COGNITIVE else sol.slack_m) >= -TOL_ICC
            for kind in (AgentKind.COGNITIVE, AgentKind.MANUAL)
            if kind not in active
        )
        if mu_ok and slack_ok:
            return sol
        label = "+".join(k.value for k in active)
        failures.append(
            f"{label}: converged but inadmissible "
            f"(mu=({sol.multipliers.mu_c:.3e}, {sol.multipliers.mu_m:.3e}), "
            f"slacks=({sol.slack_c:.3e}, {sol.slack_m:.3e}))"
        )
    raise NoRegimeFoundError("; ".join(failures))


# ---------------------------------------------------------------------------
# Residual evaluation for externally supplied candidates
# ---------------------------------------------------------------------------

def foc_residuals(config: EconomyConfig, alloc: Allocation, mults: Multipliers) -> dict:
    """Named KKT residuals at a candidate (allocation, multipliers).

    Incentive constraints enter as complementary-slackness rows
    mu_h * slack_h, so the map is defined for any candidate regardless of
    which constraints were imposed.  Stationary candidates (one period)
    return scalar components; finite-horizon candidates return per-period
    arrays for the sequential rows.
    """
    if alloc.n_periods == 1:
        return _foc_residuals_stationary(config, alloc, mults)
    return _foc_residuals_finite(config, alloc, mults)


def _foc_residuals_stationary(config: EconomyConfig, alloc: Allocation, mults: Multipliers) -> dict:
    prefs, tech = config.prefs, config.tech
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    beta = prefs.beta
    ct_c, ct_m = float(alloc.c_c[0]), float(alloc.c_m[0])
    l_c, l_m = float(alloc.l_c[0]), float(alloc.l_m[0])
    k, ai = float(alloc.k[0]), float(alloc.ai[0])
    lam = float(mults.lam[0])
    mu_c, mu_m = mults.mu_c, mults.mu_m
    el_c = pi_c * l_c * z_c
    el_m = pi_m * l_m * z_m
    ch = _chain_terms(config, l_c, l_m, el_c, el_m, k, ai, mu_c, mu_m)
    ev = ch.ev
    slack_c, slack_m = _flow_slacks(prefs, ct_c, ct_m, l_c, l_m, ch.lt_c, ch.lt_m)
    scale = 1.0 / (1.0 - beta)
    return {
        "c_c": float(u_prime(prefs, ct_c) * (pi_c + mu_c - mu_m) - lam * pi_c),
        "c_m": float(u_prime(prefs, ct_m) * (pi_m + mu_m - mu_c) - lam * pi_m),
        "l_c": float(-(pi_c + mu_c) * nu_prime(prefs, l_c) + ch.y_c + ch.cross_c + lam * pi_c * ev.w_c),
        "l_m": float(-(pi_m + mu_m) * nu_prime(prefs, l_m) + ch.y_m + ch.cross_m + lam * pi_m * ev.w_m),
        "k": float(1.0 - beta * ev.mp.fw_k - beta * ch.x_k / lam),
        "ai": float(1.0 - beta * ev.mp.fw_ai - beta * ch.x_ai / lam),
        "feasibility": float(
            ev.y - pi_c * ct_c - pi_m * ct_m - tech.delta_k * k - tech.delta_ai * ai - config.g
        ),
        "comp_slack_c": float(mu_c * slack_c * scale),
        "comp_slack_m": float(mu_m * slack_m * scale),
    }


def _foc_residuals_finite(config: EconomyConfig, alloc: Allocation, mults: Multipliers) -> dict:
    prefs, tech = config.prefs, config.tech
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    beta = prefs.beta
    n = alloc.n_periods
    ct_c, ct_m = alloc.c_c, alloc.c_m
    l_c, l_m = alloc.l_c, alloc.l_m
    el_c, el_m = alloc.eff_l_c, alloc.eff_l_m
    k_now, ai_now = alloc.k[:n], alloc.ai[:n]
    k_next, ai_next = alloc.k[1 : n + 1], alloc.ai[1 : n + 1]
    lam = mults.lam
    mu_c, mu_m = mults.mu_c, mults.mu_m

    ch = _chain_terms(config, l_c, l_m, el_c, el_m, k_now, ai_now, mu_c, mu_m)
    ev = ch.ev
    slack_c, slack_m = _flow_slacks(prefs, ct_c, ct_m, l_c, l_m, ch.lt_c, ch.lt_m)
    betas = beta ** np.arange(n)
    return {
        "c_c": u_prime(prefs, ct_c) * (pi_c + mu_c - mu_m) - lam * pi_c,
        "c_m": u_prime(prefs, ct_m) * (pi_m + mu_m - mu_c) - lam * pi_m,
        "l_c": -(pi_c + mu_c) * nu_prime(prefs, l_c) + ch.y_c + ch.cross_c + lam * pi_c * ev.w_c,
        "l_m": -(pi_m + mu_m) * nu_prime(prefs, l_m) + ch.y_m + ch.cross_m + lam * pi_m * ev.w_m,
        "k": lam[:-1] - beta * lam[1:] * ev.mp.fw_k[1:] - beta * ch.x_k[1:],
        "ai": lam[:-1] - beta * lam[1:] * ev.mp.fw_ai[1:] - beta * ch.x_ai[1:],
        "feasibility": (
            ev.y
            + (1.0 - tech.delta_k) * k_now
            + (1.0 - tech.delta_ai) * ai_now
            - pi_c * ct_c
            - pi_m * ct_m
            - k_next
            - ai_next
            - config.g
        ),
        "comp_slack_c": float(mu_c * np.dot(betas, slack_c)),
        "comp_slack_m": float(mu_m * np.dot(betas, slack_m)),
    }


# ---------------------------------------------------------------------------
# Finite horizon
# ---------------------------------------------------------------------------

def _finite_residual_fn(config: EconomyConfig, active: tuple, k0: float, ai0: float,
                        k_term: float, ai_term: float, n: int):
    prefs, tech = config.prefs, config.tech
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    beta = prefs.beta
    g = config.g
    t_free = n - 1  # interior stock choices K_1 .. K_{T}
    betas = beta ** np.arange(n)

    def f(x: np.ndarray) -> np.ndarray:
        cc = x[0:n]
        cm = x[n : 2 * n]
        lc = x[2 * n : 3 * n]
        lm = x[3 * n : 4 * n]
        k_in = x[4 * n : 4 * n + t_free]
        ai_in = x[4 * n + t_free : 4 * n + 2 * t_free]
        lam = x[4 * n + 2 * t_free : 5 * n + 2 * t_free]
        mu_c = mu_m = 0.0
        idx = 5 * n + 2 * t_free
        if AgentKind.COGNITIVE in active:
            mu_c = x[idx]
            idx += 1
        if AgentKind.MANUAL in active:
            mu_m = x[idx]

        k_full = np.concatenate(([k0], k_in, [k_term]))
        ai_full = np.concatenate(([ai0], ai_in, [ai_term]))
        el_c = pi_c * z_c * lc
        el_m = pi_m * z_m * lm
        ch = _chain_terms(config, lc, lm, el_c, el_m, k_full[:n], ai_full[:n], mu_c, mu_m)
        ev = ch.ev

        r_cc = u_prime(prefs, cc) * (pi_c + mu_c - mu_m) - lam * pi_c
        r_cm = u_prime(prefs, cm) * (pi_m + mu_m - mu_c) - lam * pi_m
        r_lc = -(pi_c + mu_c) * nu_prime(prefs, lc) + ch.y_c + ch.cross_c + lam * pi_c * ev.w_c
        r_lm = -(pi_m + mu_m) * nu_prime(prefs, lm) + ch.y_m + ch.cross_m + lam * pi_m * ev.w_m
        r_k = lam[:-1] - beta * lam[1:] * ev.mp.fw_k[1:] - beta * ch.x_k[1:]
        r_ai = lam[:-1] - beta * lam[1:] * ev.mp.fw_ai[1:] - beta * ch.x_ai[1:]
        r_feas = (
            ev.y
            + (1.0 - tech.delta_k) * k_full[:n]
            + (1.0 - tech.delta_ai) * ai_full[:n]
            - pi_c * cc
            - pi_m * cm
            - k_full[1 : n + 1]
            - ai_full[1 : n + 1]
            - g
        )
        parts = [r_cc, r_cm, r_lc, r_lm, r_k, r_ai, r_feas]
        slack_c, slack_m = _flow_slacks(prefs, cc, cm, lc, lm, ch.lt_c, ch.lt_m)
        if AgentKind.COGNITIVE in active:
            parts.append(np.array([np.dot(betas, slack_c)]))
        if AgentKind.MANUAL in active:
            parts.append(np.array([np.dot(betas, slack_m)]))
        return np.concatenate(parts)

    return f


def _finite_bounds(n: int, active: tuple) -> np.ndarray:
    t_free = n - 1
    lo = np.concatenate([
        np.full(2 * n, EPS_C),          # consumptions
        np.full(2 * n, 1e-10),          # labors
        np.full(2 * t_free, 1e-10),     # interior stocks
        np.full(n, 1e-12),              # lambdas
        np.full(len(active), -np.inf),  # mus
    ])
    return lo


def _finite_start(ss: PlannerSolution, n: int, active: tuple) -> np.ndarray:
    a = ss.allocation
    t_free = n - 1
    rep = lambda v: np.full(n, float(v))
    mus = []
    stored = {AgentKind.COGNITIVE: ss.multipliers.mu_c, AgentKind.MANUAL: ss.multipliers.mu_m}
    for kind in (AgentKind.COGNITIVE, AgentKind.MANUAL):
        if kind in active:
            mus.append(stored[kind] if stored[kind] > 0.0 else _MU_INIT_FRACTION * 0.5)
    return np.concatenate([
        rep(a.c_c[0]), rep(a.c_m[0]), rep(a.l_c[0]), rep(a.l_m[0]),
        np.full(t_free, float(a.k[0])), np.full(t_free, float(a.ai[0])),
        rep(ss.multipliers.lam[0]),
        np.asarray(mus),
    ])


def _build_finite(config: EconomyConfig, active: tuple, x: np.ndarray,
                  k0: float, ai0: float, k_term: float, ai_term: float, n: int) -> PlannerSolution:
    prefs = config.prefs
    pi_c, z_c = config.cognitive.pi, config.cognitive.z
    pi_m, z_m = config.manual.pi, config.manual.z
    t_free = n - 1
    cc = x[0:n].copy()
    cm = x[n : 2 * n].copy()
    lc = x[2 * n : 3 * n].copy()
    lm = x[3 * n : 4 * n].copy()
    k_full = np.concatenate(([k0], x[4 * n : 4 * n + t_free], [k_term]))
    ai_full = np.concatenate(([ai0], x[4 * n + t_free : 4 * n + 2 * t_free], [ai_term]))
    lam = x[4 * n + 2 * t_free : 5 * n + 2 * t_free].copy()
    mu_c = mu_m = 0.0
    idx = 5 * n + 2 * t_free
    if AgentKind.COGNITIVE in active:
        mu_c = float(x[idx])
        idx += 1
    if AgentKind.MANUAL in active:
        mu_m = float(x[idx])

    el_c = pi_c * z_c * lc
    el_m = pi_m * z_m * lm
    ch = _chain_terms(config, lc, lm, el_c, el_m, k_full[:n], ai_full[:n], mu_c, mu_m)
    slack_c_flow, slack_m_flow = _flow_slacks(prefs, cc, cm, lc, lm, ch.lt_c, ch.lt_m)
    betas = prefs.beta ** np.arange(n)
    alloc = Allocation(
        c_c=cc, c_m=cm, l_c=lc, l_m=lm, eff_l_c=el_c, eff_l_m=el_m,
        k=k_full, ai=ai_full,
    )
    y_term = ch.y_c if mu_c > 0.0 else ch.y_m
    mults = Multipliers(
        lam=lam, mu_c=mu_c, mu_m=mu_m,
        x_k=np.asarray(ch.x_k, dtype=float) * np.ones(n),
        x_ai=np.asarray(ch.x_ai, dtype=float) * np.ones(n),
        y_term=np.asarray(y_term, dtype=float) * np.ones(n),
    )
    res = foc_residuals(config, alloc, mults)
    foc_norm = max(float(np.max(np.abs(np.atleast_1d(v)))) for v in res.values())
    slack_c = float(np.dot(betas, slack_c_flow))
    slack_m = float(np.dot(betas, slack_m_flow))
    flows = pi_c * (u_eval(prefs, cc) - nu_eval(prefs, lc)) + pi_m * (
        u_eval(prefs, cm) - nu_eval(prefs, lm)
    )
    mid = (
        float(np.exp(np.mean(np.log(el_c)))),
        float(np.exp(np.mean(np.log(el_m)))),
        float(np.exp(np.mean(np.log(k_full[:n])))),
        float(np.exp(np.mean(np.log(ai_full[:n])))),
    )
    report = check_assumptions(config.tech, Grid4.log_around(mid))
    warnings = []
    if mu_c > pi_m - 1e-9:
        warnings.append(f"mu_c = {mu_c:.6g} is not below pi_m = {pi_m:.6g}")
    if mu_m > pi_c - 1e-9:
        warnings.append(f"mu_m = {mu_m:.6g} is not below pi_c = {pi_c:.6g}")
    return PlannerSolution(
        config=config,
        regime=_classify(mu_c, mu_m, slack_c, slack_m),
        allocation=alloc,
        multipliers=mults,
        wages_c=np.asarray(ch.ev.w_c, dtype=float) * np.ones(n),
        wages_m=np.asarray(ch.ev.w_m, dtype=float) * np.ones(n),
        slack_c=slack_c,
        slack_m=slack_m,
        objective=float(np.dot(betas, flows)),
        foc_residual=foc_norm,
        assumptions=report,
        warnings=tuple(warnings),
    )


def solve_finite_horizon(config: EconomyConfig) -> PlannerSolution:
    """Direct transcription of the T-period problem, terminal stocks pinned
    to the steady state of the same economy."""
    _require_valid(config)
    if config.mode is not SolveMode.FINITE_HORIZON or config.horizon is None:
        raise ConfigError("solve_finite_horizon needs mode = finite_horizon with T set")
    if config.k0 <= 0.0 or config.ai0 <= 0.0:
        raise ConfigError("finite horizon requires strictly positive initial stocks k0, ai0")
    n = config.horizon + 1

    ss_config = replace(config, mode=SolveMode.STEADY_STATE, horizon=None)
    ss = solve_steady_state(ss_config)
    k_term = float(ss.allocation.k[0])
    ai_term = float(ss.allocation.ai[0])
    k0, ai0 = config.k0, config.ai0

    ss_active = {
        Regime.NONE_BIND: (),
        Regime.COGNITIVE_BINDS: (AgentKind.COGNITIVE,),
        Regime.MANUAL_BINDS: (AgentKind.MANUAL,),
        Regime.BOTH_BIND: (AgentKind.COGNITIVE, AgentKind.MANUAL),
    }[ss.regime]
    ladder = [ss_active]
    for cand in ((), (AgentKind.COGNITIVE,), (AgentKind.MANUAL,),
                 (AgentKind.COGNITIVE, AgentKind.MANUAL)):
        if cand not in ladder:
            ladder.append(cand)

    failures = []
    for active in ladder:
        f = _finite_residual_fn(config, active, k0, ai0, k_term, ai_term, n)
        x0 = _finite_start(ss, n, active)
        res = newton_solve(f, x0, tol=TOL_NEWTON, lower=_finite_bounds(n, active))
        if not res.converged:
            failures.append(f"{'+'.join(k.value for k in active) or 'none'}: no convergence "
                            f"(residual {res.residual_norm:.3e})")
            continue
        sol = _build_finite(config, active, res.x, k0, ai0, k_term, ai_term, n)
        mu_ok = all(
            (sol.multipliers.mu_c if kind is AgentKind.COGNITIVE else sol.multipliers.mu_m) >= 0.0
            for kind in active
        )
        slack_ok = all(
            (sol.slack_c if kind is AgentKind.COGNITIVE else sol.slack_m) >= -TOL_ICC
            for kind in (AgentKind.COGNITIVE, AgentKind.MANUAL)
            if kind not in active
        )
        if mu_ok and slack_ok:
            return sol
        failures.append(f"{'+'.join(k.value for k in active) or 'none'}: inadmissible")
    raise NoRegimeFoundError("; ".join(failures))
