"""Result serialization: JSON documents, CSV tables, and run manifests.

Both emitters render every float through the same 17-significant-digit
formatter, so a value appearing in a CSV cell and in the JSON payload of
the same run is textually identical and survives a text round-trip at
full double precision.  Non-finite values use the NaN / Infinity /
-Infinity spellings that ``json.loads`` accepts.

Solution JSON documents carry enough of the solve (config, allocation,
multipliers) to be re-ingested and re-checked: ``load_solution`` rebuilds
the dataclasses so KKT residuals can be recomputed on the loaded copy.
CSV outputs get a ``<path>.manifest.json`` sidecar holding the manifest
plus the scalar fields that do not fit a per-period table.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .configio import config_from_dict, config_to_dict
from .economy import Allocation, EconomyConfig
from .errors import ConfigError
from .planner import Multipliers, PlannerSolution, Regime
from .production import AssumptionReport
from .sweep import SweepResult, ThresholdResult
from .wedges import WedgeReport


def render_float(x: float) -> str:
    """17-significant-digit decimal rendering; bit-faithful for doubles."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def render_value(v) -> str:
    """CSV cell rendering, sharing render_float with the JSON emitter."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return render_float(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, enum.Enum):
        return str(v.value)
    return str(v)


def _emit(obj, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (float, np.floating)):
        out.append(render_float(float(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, enum.Enum):
        out.append(json.dumps(obj.value))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), indent, out)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(str(k))}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Serialize to JSON text with the shared float rendering."""
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to (or inside) every output file."""

    config_digest: str
    subcommand: str
    parameters: dict
    version: str
    duration_s: float
    outcome: str

    def to_dict(self) -> dict:
        return {
            "config_digest": self.config_digest,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "version": self.version,
            "duration_s": self.duration_s,
            "outcome": self.outcome,
        }


def allocation_payload(a: Allocation) -> dict:
    return {
        "n_periods": a.n_periods,
        "c_c": a.c_c, "c_m": a.c_m,
        "l_c": a.l_c, "l_m": a.l_m,
        "eff_l_c": a.eff_l_c, "eff_l_m": a.eff_l_m,
        "k": a.k, "ai": a.ai,
    }


def multipliers_payload(m: Multipliers) -> dict:
    return {
        "lam": m.lam, "mu_c": m.mu_c, "mu_m": m.mu_m,
        "x_k": m.x_k, "x_ai": m.x_ai, "y_term": m.y_term,
    }


def wedge_payload(report: WedgeReport) -> dict:
    return {
        "tau_k": {h.value: v for h, v in report.tau_k.items()},
        "tau_ai": {h.value: v for h, v in report.tau_ai.items()},
        "tau_y": {h.value: v for h, v in report.tau_y.items()},
        "tau_k_mult": report.tau_k_mult,
        "tau_ai_mult": report.tau_ai_mult,
        "verdicts": {
            key: {
                "description": c.description,
                "verdict": c.verdict,
                "margin": c.margin,
                "observed": c.observed,
            }
            for key, c in report.verdicts.items()
        },
    }


def assumption_payload(report: AssumptionReport) -> dict:
    return {
        "all_pass": report.all_pass,
        "checks": {
            c.name: {
                "verdict": c.verdict,
                "axis": c.axis,
                "worst_value": c.worst_value,
                "worst_point": list(c.worst_point),
            }
            for c in report.checks()
        },
    }


def solution_payload(solution: PlannerSolution, wedges: WedgeReport) -> dict:
    return {
        "config": config_to_dict(solution.config),
        "regime": solution.regime,
        "objective": solution.objective,
        "foc_residual": solution.foc_residual,
        "slack_c": solution.slack_c,
        "slack_m": solution.slack_m,
        "allocation": allocation_payload(solution.allocation),
        "multipliers": multipliers_payload(solution.multipliers),
        "wages_c": solution.wages_c,
        "wages_m": solution.wages_m,
        "wedges": wedge_payload(wedges),
        "assumptions": assumption_payload(solution.assumptions),
        "warnings": list(solution.warnings),
    }


def sweep_payload(result: SweepResult) -> dict:
    return {
        "param": result.param,
        "n_failures": result.n_failures,
        "threshold_bracket": list(result.threshold_bracket) if result.threshold_bracket else None,
        "points": [
            {
                "value": p.value, "regime": p.regime,
                "tau_k": p.tau_k, "tau_ai": p.tau_ai,
                "tau_y_c": p.tau_y_c, "tau_y_m": p.tau_y_m,
                "wage_ratio": p.wage_ratio, "objective": p.objective,
                "error": p.error,
            }
            for p in result.points
        ],
    }


def threshold_payload(th: ThresholdResult) -> dict:
    return {
        "param": th.param,
        "lo": th.lo, "hi": th.hi, "width": th.width,
        "lo_regime": th.lo_regime, "hi_regime": th.hi_regime,
        "tol": th.tol, "converged": th.converged,
        "iterations": th.iterations,
        "trace": [list(entry) for entry in th.trace],
        "anomalies": [list(entry) for entry in th.anomalies],
    }


def write_json(path: str | Path, manifest: RunManifest, payload: dict) -> None:
    Path(path).write_text(dumps({"manifest": manifest.to_dict(), "payload": payload}))


def write_manifest_sidecar(path: str | Path, manifest: RunManifest, extra: dict) -> Path:
    side = Path(str(path) + ".manifest.json")
    side.write_text(dumps({"manifest": manifest.to_dict(), "payload": extra}))
    return side


_SOLUTION_COLUMNS = ("t", "c_c", "c_m", "l_c", "l_m", "eff_l_c", "eff_l_m",
                     "k", "ai", "k_next", "ai_next", "lam", "w_c", "w_m")


def write_solution_csv(path: str | Path, solution: PlannerSolution) -> None:
    """One row per period; carried-out stocks appear as k_next/ai_next."""
    a = solution.allocation
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_SOLUTION_COLUMNS)
        for t in range(a.n_periods):
            row = (t, a.c_c[t], a.c_m[t], a.l_c[t], a.l_m[t],
                   a.eff_l_c[t], a.eff_l_m[t], a.k[t], a.ai[t],
                   a.k[t + 1], a.ai[t + 1], solution.multipliers.lam[t],
                   solution.wages_c[t], solution.wages_m[t])
            writer.writerow([render_value(v) for v in row])


_SWEEP_COLUMNS = ("value", "regime", "tau_k", "tau_ai", "tau_y_c", "tau_y_m",
                  "wage_ratio", "objective", "error")


def write_sweep_csv(path: str | Path, result: SweepResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_SWEEP_COLUMNS)
        for p in result.points:
            row = (p.value, p.regime, p.tau_k, p.tau_ai, p.tau_y_c,
                   p.tau_y_m, p.wage_ratio, p.objective, p.error)
            writer.writerow([render_value(v) for v in row])


@dataclass(frozen=True)
class LoadedSolution:
    """A solution document read back from disk, rebuilt as dataclasses."""

    config: EconomyConfig
    regime: Regime
    allocation: Allocation
    multipliers: Multipliers
    payload: dict
    manifest: dict


def load_solution(path: str | Path) -> LoadedSolution:
    """Re-ingest a solution JSON document written by write_json."""
    try:
        doc = json.loads(Path(path).read_text())
        payload = doc["payload"]
        ap = payload["allocation"]
        arr = lambda key: np.asarray(ap[key], dtype=float)
        allocation = Allocation(
            c_c=arr("c_c"), c_m=arr("c_m"), l_c=arr("l_c"), l_m=arr("l_m"),
            eff_l_c=arr("eff_l_c"), eff_l_m=arr("eff_l_m"),
            k=arr("k"), ai=arr("ai"),
        )
        mp = payload["multipliers"]
        multipliers = Multipliers(
            lam=np.asarray(mp["lam"], dtype=float),
            mu_c=float(mp["mu_c"]), mu_m=float(mp["mu_m"]),
            x_k=np.asarray(mp["x_k"], dtype=float),
            x_ai=np.asarray(mp["x_ai"], dtype=float),
            y_term=np.asarray(mp["y_term"], dtype=float),
        )
        return LoadedSolution(
            config=config_from_dict(payload["config"]),
            regime=Regime(payload["regime"]),
            allocation=allocation,
            multipliers=multipliers,
            payload=payload,
            manifest=doc.get("manifest", {}),
        )
    except (OSError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot load solution file {path}: {exc!r}") from None
