"""Flat ``key = value`` run configuration."""
import math
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigurationError

AMPLITUDE_CAP = 0.1
PERTURBATION_KINDS = ("gaussian",)
PERTURBATION_TARGETS = ("v", "u")


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str = "gaussian"
    target: str = "v"
    amplitude: float = 0.0
    center: float = 0.0
    width: float = 5.0


@dataclass(frozen=True)
class RunConfig:
    gamma: float = 5.0 / 3.0
    v_plus: float = 1.0
    u_plus: float = 0.0
    v_m: float = 0.9
    v_minus: float = 0.8
    lambda_weight: float = None  # default sqrt(delta_S)
    xi_min: float = None  # default -W - |lambda_1(v_minus) - sigma| t_end, W = 40/max(delta_S, 0.1)
    xi_max: float = None  # default W
    n_cells: int = 4096
    cfl: float = 0.4
    t_end: float = 100.0
    output_interval: float = 1.0
    snapshot_times: tuple = ()
    perturbations: tuple = ()
    seed: int = 0


DEFAULTS_HELP = """\
configuration keys (flat `key = value`, `#` comments):
  gamma            adiabatic exponent, > 1                  [5/3]
  v_plus, u_plus   right state                              [1.0, 0.0]
  v_m              middle state volume, v_minus < v_m < v_plus  [0.9]
  v_minus          left state volume                        [0.8]
  lambda_weight    weight amplitude, delta_S < lambda <= sqrt(delta_S)  [sqrt(delta_S)]
  xi_min, xi_max   domain in shock frame   [-W - |lambda_1(v_minus) - sigma| t_end, W],
                   W = 40/max(delta_S, 0.1)
  n_cells          number of grid nodes, >= 16              [4096]
  cfl              time-step safety factor in (0, 1]        [0.4]
  t_end            final time, >= 0                         [100]
  output_interval  diagnostics spacing, > 0                 [1]
  snapshot_times   comma separated times                    []
  perturbation.N.{kind,target,amplitude,center,width}   gaussian bumps on v or u
  seed             integer seed                             [0]
"""

_SCALAR_KEYS = {
    "gamma": float, "v_plus": float, "u_plus": float, "v_m": float, "v_minus": float,
    "lambda_weight": float, "xi_min": float, "xi_max": float, "n_cells": int, "cfl": float,
    "t_end": float, "output_interval": float, "seed": int,
}
_PERT_KEYS = {"kind": str, "target": str, "amplitude": float, "center": float, "width": float}


def _convert(key, typ, raw):
    try:
        if typ is int:
            val = float(raw)
            if not val.is_integer():
                raise ValueError
            return int(val)
        if typ is float:
            val = float(raw)
            if not math.isfinite(val):
                raise ValueError
            return val
        return raw.strip()
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {raw!r} as {typ.__name__}") from None


def parse_pairs(pairs, base=None):
    """Apply ``(key, raw_value)`` pairs on top of ``base`` and validate."""
    values = {}
    perts = {}
    if base is not None:
        values = {f.name: getattr(base, f.name) for f in fields(base) if f.name != "perturbations"}
        for i, p in enumerate(base.perturbations):
            perts[i] = {f.name: getattr(p, f.name) for f in fields(p)}
    for key, raw in pairs:
        key = key.strip()
        if key in _SCALAR_KEYS:
            values[key] = _convert(key, _SCALAR_KEYS[key], raw)
        elif key == "snapshot_times":
            items = [s for s in raw.replace(",", " ").split() if s]
            values[key] = tuple(sorted(_convert(key, float, s) for s in items))
        elif key.startswith("perturbation."):
            parts = key.split(".")
            if len(parts) != 3 or not parts[1].isdigit() or parts[2] not in _PERT_KEYS:
                raise ConfigurationError(f"unknown key {key!r}")
            idx = int(parts[1])
            perts.setdefault(idx, {})[parts[2]] = _convert(key, _PERT_KEYS[parts[2]], raw)
        else:
            raise ConfigurationError(f"unknown key {key!r}")
    values["perturbations"] = tuple(PerturbationSpec(**perts[i]) for i in sorted(perts))
    cfg = replace(RunConfig(), **values)
    validate(cfg)
    return cfg


def parse_config(text, base=None):
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected `key = value`, got {line!r}")
        key, raw = line.split("=", 1)
        pairs.append((key.strip(), raw.strip()))
    return parse_pairs(pairs, base)


def validate(cfg):
    if not cfg.gamma > 1.0:
        raise ConfigurationError("gamma must exceed 1")
    if not (0.0 < cfg.v_minus <= cfg.v_m <= cfg.v_plus):
        raise ConfigurationError(
            "volumes must satisfy the ordering v_minus < v_m < v_plus "
            f"(got v_minus={cfg.v_minus}, v_m={cfg.v_m}, v_plus={cfg.v_plus})"
        )
    if cfg.lambda_weight is not None and not cfg.lambda_weight > 0.0:
        raise ConfigurationError("lambda_weight must be positive")
    if cfg.n_cells < 16:
        raise ConfigurationError("n_cells must be at least 16")
    if not (0.0 < cfg.cfl <= 1.0):
        raise ConfigurationError("cfl must lie in (0, 1]")
    if cfg.t_end < 0.0:
        raise ConfigurationError("t_end must be nonnegative")
    if not cfg.output_interval > 0.0:
        raise ConfigurationError("output_interval must be positive")
    if cfg.xi_min is not None and not cfg.xi_min < 0.0:
        raise ConfigurationError("xi_min must be negative")
    if cfg.xi_max is not None and not cfg.xi_max > 0.0:
        raise ConfigurationError("xi_max must be positive")
    if any(t < 0.0 or t > cfg.t_end for t in cfg.snapshot_times):
        raise ConfigurationError("snapshot_times must lie in [0, t_end]")
    for i, p in enumerate(cfg.perturbations):
        if p.kind not in PERTURBATION_KINDS:
            raise ConfigurationError(f"perturbation.{i}.kind must be one of {PERTURBATION_KINDS}")
        if p.target not in PERTURBATION_TARGETS:
            raise ConfigurationError(f"perturbation.{i}.target must be one of {PERTURBATION_TARGETS}")
        if abs(p.amplitude) > AMPLITUDE_CAP:
            raise ConfigurationError(f"perturbation.{i}.amplitude must not exceed {AMPLITUDE_CAP} in magnitude")
        if not p.width > 0.0:
            raise ConfigurationError(f"perturbation.{i}.width must be positive")


def format_config(cfg):
    """Inverse of :func:`parse_config` (used for per-run records in sweeps)."""
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if f.name == "perturbations":
            for i, p in enumerate(val):
                for pf in fields(p):
                    lines.append(f"perturbation.{i}.{pf.name} = {getattr(p, pf.name)!r}".replace("'", ""))
        elif f.name == "snapshot_times":
            if val:
                lines.append("snapshot_times = " + ", ".join(repr(t) for t in val))
        elif val is not None:
            lines.append(f"{f.name} = {val!r}")
    return "\n".join(lines) + "\n"


BASELINE_PERTURBATIONS = (
    PerturbationSpec("gaussian", "v", 0.01, 0.0, 5.0),
    PerturbationSpec("gaussian", "u", 0.01, 0.0, 5.0),
)


def baseline_config(**overrides):
    """Reference stability run: gamma=5/3, v_plus=1, v_m=0.9, v_minus=0.8, two 0.01 bumps."""
    return replace(RunConfig(perturbations=BASELINE_PERTURBATIONS), **overrides)
