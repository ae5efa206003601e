"""Run configuration: a JSON document with five blocks, overridable by CLI flags.

Example::

    {
      "system":  {"kind": "DHO", "omega": 1.0, "kappa": 2.0},
      "initial": {"rep": "xp", "x0": 1.0, "p0": 0.0, "r": 0.5, "theta": 0.0},
      "time":    {"tau_max": 10.0, "dt_output": 0.05},
      "oracle":  {"enabled": false, "grid_n": 4096, "domain": 30.0, "dt": 0.001},
      "output":  {"path": "run.csv", "format": "csv", "plot": false}
    }

A custom system replaces the catalog parameters with expressions in ``t``::

    {"kind": "custom", "g2": "0.5 + 0.1*cos(t)", "g1": "0", "g0": "0"}

``initial.rep`` selects the initial-condition style:

* ``xp``: ``x0, p0, r, theta``
* ``alpha-z``: ``alpha, delta, r, theta`` (displace after squeezing)
* ``z-alpha``: ``r, theta`` plus either ``x0, p0`` or ``alpha, delta``
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional

from .errors import ValidationError
from .systems import SystemKind, SystemSpec, make_system

REPS = ("xp", "alpha-z", "z-alpha")
SYSTEM_KEYS = {"kind", "omega", "Omega", "kappa", "drive", "g2", "g1", "g0", "constants", "ics", "label"}
INITIAL_KEYS = {"rep", "x0", "p0", "alpha", "delta", "r", "theta"}
TIME_KEYS = {"tau_max", "dt_output"}
ORACLE_KEYS = {"enabled", "grid_n", "domain", "dt"}
OUTPUT_KEYS = {"path", "format", "plot"}


@dataclass(frozen=True)
class InitialBlock:
    rep: str = "xp"
    x0: Optional[float] = None
    p0: Optional[float] = None
    alpha: Optional[float] = None
    delta: Optional[float] = None
    r: float = 0.0
    theta: float = 0.0

    def validated(self) -> "InitialBlock":
        if self.rep not in REPS:
            raise ValidationError(f"initial.rep must be one of {REPS}, got {self.rep!r}")
        has_xp = self.x0 is not None or self.p0 is not None
        has_alpha = self.alpha is not None or self.delta is not None
        if self.rep == "xp" and has_alpha:
            raise ValidationError("rep 'xp' takes x0, p0; alpha and delta belong to the alpha-z/z-alpha styles")
        if self.rep == "alpha-z" and has_xp:
            raise ValidationError("rep 'alpha-z' takes alpha, delta; x0 and p0 belong to the xp style")
        if self.rep == "z-alpha" and has_xp and has_alpha:
            raise ValidationError("rep 'z-alpha' takes either (x0, p0) or (alpha, delta), not both")
        if not self.r >= 0:
            raise ValidationError(f"r must be non-negative, got {self.r!r}")
        if self.alpha is not None and not self.alpha >= 0:
            raise ValidationError(f"alpha is a modulus and must be non-negative, got {self.alpha!r}")
        for name in ("x0", "p0", "alpha", "delta", "r", "theta"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ValidationError(f"initial.{name} must be finite")
        return self


@dataclass(frozen=True)
class TimeBlock:
    tau_max: float = 10.0
    dt_output: float = 0.1

    def validated(self) -> "TimeBlock":
        if not (math.isfinite(self.tau_max) and self.tau_max > 0):
            raise ValidationError(f"tau_max must be positive, got {self.tau_max!r}")
        if not (math.isfinite(self.dt_output) and self.dt_output > 0):
            raise ValidationError(f"dt_output must be positive, got {self.dt_output!r}")
        return self


@dataclass(frozen=True)
class OracleBlock:
    enabled: bool = False
    grid_n: int = 4096
    domain: float = 30.0
    dt: float = 1e-3

    def validated(self) -> "OracleBlock":
        if not self.domain > 0:
            raise ValidationError(f"oracle.domain is the grid half-width and must be positive, got {self.domain!r}")
        if not self.dt > 0:
            raise ValidationError(f"oracle.dt must be positive, got {self.dt!r}")
        return self


@dataclass(frozen=True)
class OutputBlock:
    path: Optional[str] = None
    format: str = "csv"
    plot: bool = False

    def validated(self) -> "OutputBlock":
        if self.format not in ("csv", "json"):
            raise ValidationError(f"output.format must be 'csv' or 'json', got {self.format!r}")
        if self.plot and not self.path:
            raise ValidationError("plots need an output path")
        return self


@dataclass(frozen=True)
class RunConfig:
    system: dict = field(default_factory=lambda: {"kind": "HO", "omega": 1.0})
    initial: InitialBlock = field(default_factory=InitialBlock)
    time: TimeBlock = field(default_factory=TimeBlock)
    oracle: OracleBlock = field(default_factory=OracleBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def build_system(self) -> SystemSpec:
        params = dict(self.system)
        kind = params.pop("kind", None)
        if kind is None:
            raise ValidationError("system.kind is required")
        label = params.pop("label", None)
        s = make_system(kind, **params)
        return replace(s, label=label) if label else s

    def validated(self) -> "RunConfig":
        self.initial.validated()
        self.time.validated()
        self.oracle.validated()
        self.output.validated()
        self.build_system()
        return self


def _block(data: dict, name: str, allowed: set) -> dict:
    block = data.get(name, {})
    if not isinstance(block, dict):
        raise ValidationError(f"config block {name!r} must be an object")
    unknown = set(block) - allowed
    if unknown:
        raise ValidationError(f"unknown keys in {name!r}: {sorted(unknown)}")
    return block


def _floats(block: dict, skip=()) -> dict:
    out = {}
    for k, v in block.items():
        if k in skip or v is None:
            out[k] = v
            continue
        try:
            out[k] = float(v)
        except (TypeError, ValueError):
            raise ValidationError(f"{k} must be a number, got {v!r}") from None
    return out


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(data) - {"system", "initial", "time", "oracle", "output"}
    if unknown:
        raise ValidationError(f"unknown config blocks: {sorted(unknown)}")
    system = dict(_block(data, "system", SYSTEM_KEYS)) or {"kind": "HO", "omega": 1.0}
    initial = _floats(_block(data, "initial", INITIAL_KEYS), skip=("rep",))
    time = _floats(_block(data, "time", TIME_KEYS))
    oracle = dict(_block(data, "oracle", ORACLE_KEYS))
    if "grid_n" in oracle:
        oracle["grid_n"] = int(oracle["grid_n"])
    oracle = {k: (v if k in ("enabled", "grid_n") else float(v)) for k, v in oracle.items()}
    output = dict(_block(data, "output", OUTPUT_KEYS))
    return RunConfig(system, InitialBlock(**initial), TimeBlock(**time), OracleBlock(**oracle), OutputBlock(**output))


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return config_from_dict(data)


def config_to_dict(cfg: RunConfig) -> dict:
    init = {k: v for k, v in vars(cfg.initial).items() if v is not None}
    return {
        "system": dict(cfg.system),
        "initial": init,
        "time": dict(vars(cfg.time)),
        "oracle": dict(vars(cfg.oracle)),
        "output": dict(vars(cfg.output)),
    }


def apply_overrides(cfg: RunConfig, flags: dict[str, Any]) -> RunConfig:
    """Merge command-line values (``None`` means not given) over a config."""
    f = {k: v for k, v in flags.items() if v is not None}
    system = dict(cfg.system)
    if "system" in f and SystemKind.coerce(f["system"]) is not SystemKind.coerce(system.get("kind", "HO")):
        # a different system invalidates the configured parameters
        system = {"kind": f["system"]}
    for key in ("omega", "Omega", "kappa"):
        if key in f:
            system[key] = f[key]

    init = cfg.initial
    if "rep" in f and f["rep"] != init.rep:
        init = InitialBlock(rep=f["rep"], r=init.r, theta=init.theta)
    init = replace(init, **{k: f[k] for k in ("x0", "p0", "alpha", "delta", "r", "theta") if k in f})

    time = replace(cfg.time, **{k: f[src] for src, k in (("tau_max", "tau_max"), ("dt_out", "dt_output")) if src in f})
    oracle = replace(cfg.oracle, **{k: f[src] for src, k in (("oracle", "enabled"), ("grid_n", "grid_n"),
                                                              ("grid_domain", "domain"), ("oracle_dt", "dt"))
                                    if src in f})
    output = replace(cfg.output, **{k: f[src] for src, k in (("out", "path"), ("format", "format"), ("plot", "plot"))
                                    if src in f})
    return RunConfig(system, init, time, oracle, output)
