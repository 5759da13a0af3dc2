"""Reading and writing economy configurations.

The canonical on-disk format is a flat text file of dotted keys mirroring
the config dataclasses::

    # desk instance
    agents.cognitive.pi = 0.5
    agents.cognitive.z  = 2.0
    prefs.beta          = 0.96
    tech.form           = nest_complements
    mode                = steady_state

``#`` starts a comment, blank lines are skipped, later sections may appear
in any order.  Unknown and duplicated keys are hard errors: a silently
dropped typo in an economics parameter would change the economy being
solved.  Values are parsed by the declared type of the target field;
enums accept their string values.
"""

from __future__ import annotations

import enum
from pathlib import Path

from .economy import (
    AgentKind,
    AgentTypeParams,
    EconomyConfig,
    PreferenceParams,
    SolveMode,
    TechForm,
    TechnologyParams,
    UtilityForm,
)
from .errors import ConfigError

# key -> (constructor group, field name, parser); groups are assembled into
# the nested dataclasses at the end of parsing
_SCHEMA: dict[str, tuple[str, str, object]] = {}


def _register(group: str, prefix: str, fields: dict[str, object]) -> None:
    for name, parser in fields.items():
        _SCHEMA[f"{prefix}{name}"] = (group, name, parser)


def _enum_parser(enum_cls: type[enum.Enum]):
    def parse(text: str):
        try:
            return enum_cls(text)
        except ValueError:
            allowed = ", ".join(m.value for m in enum_cls)
            raise ConfigError(f"expected one of [{allowed}], got {text!r}") from None
    return parse


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}") from None


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None


_register("cognitive", "agents.cognitive.", {"pi": _float, "z": _float})
_register("manual", "agents.manual.", {"pi": _float, "z": _float})
_register("prefs", "prefs.", {
    "beta": _float,
    "u_form": _enum_parser(UtilityForm),
    "gamma": _float,
    "psi": _float,
    "phi": _float,
})
_register("tech", "tech.", {
    "form": _enum_parser(TechForm),
    "a": _float,
    "mu_top": _float,
    "lambda_c": _float,
    "theta_m": _float,
    "sigma_top": _float,
    "rho_c": _float,
    "rho_m": _float,
    "a_ai": _float,
    "delta_k": _float,
    "delta_ai": _float,
})
_register("top", "", {
    "g": _float,
    "k0": _float,
    "ai0": _float,
    "mode": _enum_parser(SolveMode),
    "T": _int,
})

_REQUIRED = (
    "agents.cognitive.pi", "agents.cognitive.z",
    "agents.manual.pi", "agents.manual.z",
    "prefs.beta", "tech.form",
)


def parse_config(text: str, source: str = "<string>") -> EconomyConfig:
    """Parse config text; see the module docstring for the format."""
    groups: dict[str, dict[str, object]] = {
        "cognitive": {}, "manual": {}, "prefs": {}, "tech": {}, "top": {},
    }
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _SCHEMA:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        seen.add(key)
        group, field, parser = _SCHEMA[key]
        try:
            groups[group][field] = parser(value)
        except ConfigError as exc:
            raise ConfigError(f"{where}: {key}: {exc}") from None

    missing = [k for k in _REQUIRED if k not in seen]
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}")

    top = groups["top"]
    if "T" in top:
        top["horizon"] = top.pop("T")
    try:
        return EconomyConfig(
            cognitive=AgentTypeParams(kind=AgentKind.COGNITIVE, **groups["cognitive"]),
            manual=AgentTypeParams(kind=AgentKind.MANUAL, **groups["manual"]),
            prefs=PreferenceParams(**groups["prefs"]),
            tech=TechnologyParams(**groups["tech"]),
            **top,
        )
    except TypeError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path: str | Path) -> tuple[EconomyConfig, bytes]:
    """Read and parse a config file; returns the config and the raw bytes.

    The raw bytes are what run manifests digest, so the hash identifies the
    file as written, comments and all.
    """
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{p} is not utf-8 text: {exc}") from None
    return parse_config(text, source=str(p)), raw


def config_to_dict(config: EconomyConfig) -> dict:
    """Nested plain-dict form of a config, enums as their string values."""
    p, t = config.prefs, config.tech
    return {
        "agents": {
            slot: {"pi": getattr(config, slot).pi, "z": getattr(config, slot).z}
            for slot in ("cognitive", "manual")
        },
        "prefs": {
            "beta": p.beta, "u_form": p.u_form.value, "gamma": p.gamma,
            "psi": p.psi, "phi": p.phi,
        },
        "tech": {
            "form": t.form.value, "a": t.a, "mu_top": t.mu_top,
            "lambda_c": t.lambda_c, "theta_m": t.theta_m,
            "sigma_top": t.sigma_top, "rho_c": t.rho_c, "rho_m": t.rho_m,
            "a_ai": t.a_ai, "delta_k": t.delta_k, "delta_ai": t.delta_ai,
        },
        "g": config.g, "k0": config.k0, "ai0": config.ai0,
        "mode": config.mode.value, "T": config.horizon,
    }


def config_from_dict(data: dict) -> EconomyConfig:
    """Inverse of config_to_dict; raises ConfigError on malformed input."""
    try:
        prefs = dict(data["prefs"])
        prefs["u_form"] = UtilityForm(prefs["u_form"])
        tech = dict(data["tech"])
        tech["form"] = TechForm(tech["form"])
        return EconomyConfig(
            cognitive=AgentTypeParams(kind=AgentKind.COGNITIVE, **data["agents"]["cognitive"]),
            manual=AgentTypeParams(kind=AgentKind.MANUAL, **data["agents"]["manual"]),
            prefs=PreferenceParams(**prefs),
            tech=TechnologyParams(**tech),
            g=data["g"], k0=data["k0"], ai0=data["ai0"],
            mode=SolveMode(data["mode"]), horizon=data["T"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config dict: {exc!r}") from None


def dump_config(config: EconomyConfig) -> str:
    """Render a config in the canonical file format (round-trips exactly)."""
    def fmt(v: object) -> str:
        if isinstance(v, enum.Enum):
            return v.value
        return repr(v)

    lines = []
    for slot in ("cognitive", "manual"):
        agent = getattr(config, slot)
        lines.append(f"agents.{slot}.pi = {fmt(agent.pi)}")
        lines.append(f"agents.{slot}.z = {fmt(agent.z)}")
    p = config.prefs
    lines.append(f"prefs.beta = {fmt(p.beta)}")
    lines.append(f"prefs.u_form = {fmt(p.u_form)}")
    if p.gamma is not None:
        lines.append(f"prefs.gamma = {fmt(p.gamma)}")
    lines.append(f"prefs.psi = {fmt(p.psi)}")
    lines.append(f"prefs.phi = {fmt(p.phi)}")
    t = config.tech
    lines.append(f"tech.form = {fmt(t.form)}")
    for name in ("a", "mu_top", "lambda_c", "theta_m", "sigma_top",
                 "rho_c", "rho_m", "a_ai", "delta_k", "delta_ai"):
        lines.append(f"tech.{name} = {fmt(getattr(t, name))}")
    lines.append(f"g = {fmt(config.g)}")
    lines.append(f"k0 = {fmt(config.k0)}")
    lines.append(f"ai0 = {fmt(config.ai0)}")
    lines.append(f"mode = {fmt(config.mode)}")
    if config.horizon is not None:
        lines.append(f"T = {fmt(config.horizon)}")
    return "\n".join(lines) + "\n"
