"""Run configuration: a flat sectioned key = value file with SI unit suffixes.

Example::

    [beam]
    energy = 200e3 eV
    waist = 1000e-9 m

    [hologram]
    m = 200
    period = 8e-9 m

Dimensional values must carry exactly the unit listed in ``SCHEMA``;
dimensionless ones must not carry any. Unknown sections or keys, repeated
keys and malformed lines are errors reported with their line number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .hologram import ELECTRON_REST_ENERGY_EV, BeamParams, HologramSpec
from .field import GridSpec


class ConfigError(ValueError):
    def __init__(self, field: str, message: str, line: int | None = None):
        self.field = field
        self.message = message
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{field}: {where}{message}")


# kind is one of: float (with unit or None), int, bool, choice
@dataclass(frozen=True)
class _Key:
    kind: str
    unit: str | None = None
    choices: tuple = ()
    default: object = None


SCHEMA: dict[str, dict[str, _Key]] = {
    "beam": {
        "energy": _Key("float", "eV"),
        "waist": _Key("float", "m"),
        "rest_energy": _Key("float", "eV", default=ELECTRON_REST_ENERGY_EV),
    },
    "grid": {
        "n": _Key("int"),
        "pitch": _Key("float", "m"),
    },
    "hologram": {
        "m": _Key("int"),
        "period": _Key("float", "m"),
        "depth": _Key("float", "m"),
        "v_mip": _Key("float", "V"),
        "base": _Key("float", "m", default=0.0),
        "aperture_radius": _Key("float", "m", default=math.inf),
        "dead_zone_radius": _Key("float", "m", default=0.0),
        "map_scale": _Key("float", "m", default=1e-10),  # meters per PGM gray level
    },
    "propagation": {
        "mode": _Key("choice", choices=("fraunhofer", "fresnel"), default="fraunhofer"),
        "z": _Key("float", "m", default=None),
        "method": _Key("choice", choices=("auto", "single-fft", "angular-spectrum"), default="auto"),
        "illuminate": _Key("bool", default=True),
    },
    "analysis": {
        "select_order": _Key("bool", default=True),
        "order": _Key("int", default=1),
        "order_radius": _Key("float", default=0.5),  # fraction of the order separation
        "axis": _Key("choice", choices=("centroid", "order"), default="centroid"),
        "n_r": _Key("int", default=256),
        "n_phi": _Key("int", default=0),  # 0: next power of two >= 4|m| + 4
        "r_max": _Key("float", default=0.98),  # fraction of the analysis radius
        "charge_radius": _Key("float", default=0.7),  # fraction of the analysis radius
        "threshold": _Key("float", default=1e-4),  # singularity map
        "charge_threshold": _Key("float", default=0.0),  # enclosed charge: 0 counts the full loop
        "profile_bins": _Key("int", default=128),
    },
    "modal": {
        "m": _Key("int", default=None),  # defaults to hologram.m
        "p_max": _Key("int", default=None),
        "z": _Key("float", "m", default=None),
        "r_min": _Key("float", "m", default=0.0),
        "r_max": _Key("float", "m", default=math.inf),
        "profile_r_max": _Key("float", "m", default=None),
        "profile_points": _Key("int", default=256),
    },
    "render": {
        "beam_stop": _Key("bool", default=False),
        "beam_stop_radius": _Key("float", default=0.5),  # fraction of the order separation
    },
}


@dataclass
class RunConfig:
    values: dict[str, dict[str, object]] = field(default_factory=dict)
    lines: dict[str, int] = field(default_factory=dict)
    sections: set[str] = field(default_factory=set)

    def has(self, section: str, key: str) -> bool:
        return key in self.values.get(section, {})

    def get(self, section: str, key: str):
        """Parsed value, the schema default, or ConfigError if required and absent."""
        spec = SCHEMA[section][key]
        if self.has(section, key):
            return self.values[section][key]
        if spec.default is None and spec.kind != "choice":
            raise ConfigError(f"{section}.{key}", "missing required key")
        return spec.default

    def get_optional(self, section: str, key: str):
        return self.values.get(section, {}).get(key, SCHEMA[section][key].default)

    def line(self, section: str, key: str) -> int | None:
        return self.lines.get(f"{section}.{key}")

    # builders: translate module errors into field-named config errors

    def beam(self) -> BeamParams:
        return _build(self, "beam", lambda: BeamParams(
            self.get("beam", "energy"), self.get("beam", "waist"), self.get("beam", "rest_energy")
        ))

    def grid(self) -> GridSpec:
        n = self.get("grid", "n")
        if n < 2:
            raise ConfigError("grid.n", "must be at least 2", self.line("grid", "n"))
        pitch = self.get("grid", "pitch")
        if not pitch > 0:
            raise ConfigError("grid.pitch", "must be positive", self.line("grid", "pitch"))
        return GridSpec.square(n, pitch)

    def hologram(self) -> HologramSpec:
        h = lambda k: self.get("hologram", k)
        return _build(self, "hologram", lambda: HologramSpec(
            h("m"), h("period"), h("depth"), h("v_mip"), h("base"),
            h("aperture_radius"), h("dead_zone_radius"),
        ))


_FIELD_HINTS = {
    "kinetic_energy": "energy", "waist": "waist", "rest_energy": "rest_energy",
    "period": "period", "depth": "depth", "base": "base",
    "aperture_radius": "aperture_radius", "dead_zone_radius": "dead_zone_radius",
    "m must": "m",
}


def _build(cfg: RunConfig, section: str, fn):
    try:
        return fn()
    except ConfigError:
        raise
    except ValueError as e:
        msg = str(e)
        key = next((k for hint, k in _FIELD_HINTS.items() if msg.startswith(hint)), None)
        if key is None or key not in SCHEMA[section]:
            raise ConfigError(section, msg) from None
        raise ConfigError(f"{section}.{key}", msg, cfg.line(section, key)) from None


def _parse_value(name: str, spec: _Key, text: str, lineno: int):
    parts = text.split()
    if not parts:
        raise ConfigError(name, "empty value", lineno)
    if spec.kind == "bool":
        if len(parts) == 1 and parts[0].lower() in ("true", "false"):
            return parts[0].lower() == "true"
        raise ConfigError(name, f"expected true or false, got {text!r}", lineno)
    if spec.kind == "choice":
        if len(parts) == 1 and parts[0] in spec.choices:
            return parts[0]
        raise ConfigError(name, f"expected one of {', '.join(spec.choices)}, got {text!r}", lineno)
    if spec.kind == "int":
        if len(parts) != 1:
            raise ConfigError(name, "dimensionless integer takes no unit", lineno)
        try:
            return int(parts[0])
        except ValueError:
            raise ConfigError(name, f"expected an integer, got {parts[0]!r}", lineno) from None
    # float
    if spec.unit is None:
        if len(parts) != 1:
            raise ConfigError(name, "dimensionless value takes no unit", lineno)
    else:
        if len(parts) == 1:
            raise ConfigError(name, f"missing unit (expected '{spec.unit}')", lineno)
        if len(parts) != 2 or parts[1] != spec.unit:
            raise ConfigError(name, f"expected unit '{spec.unit}', got {' '.join(parts[1:])!r}", lineno)
    try:
        v = float(parts[0])
    except ValueError:
        raise ConfigError(name, f"expected a number, got {parts[0]!r}", lineno) from None
    if math.isnan(v):
        raise ConfigError(name, "NaN is not allowed", lineno)
    return v


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("config", f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(section, "unknown section", lineno)
            cfg.sections.add(section)
            cfg.values.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigError("config", f"expected 'key = value', got {line!r}", lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if section is None:
            raise ConfigError(key or "config", "key outside any section", lineno)
        name = f"{section}.{key}"
        if key not in SCHEMA[section]:
            raise ConfigError(name, "unknown key", lineno)
        if key in cfg.values[section]:
            raise ConfigError(name, f"duplicate key (first set on line {cfg.lines[name]})", lineno)
        cfg.values[section][key] = _parse_value(name, SCHEMA[section][key], val, lineno)
        cfg.lines[name] = lineno
    return cfg


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
