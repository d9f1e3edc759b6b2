"""Run configuration: a flat ``key = value`` file plus command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    problem: str = "taylor-green"
    m: int = 2
    nx: int = 16
    ny: Optional[int] = None  # defaults to nx
    t_final: float = 0.5
    cfl: float = 0.05
    dt_cap_coefficient: float = 0.05  # dt <= c0 * h**((m+1)/2); 0 disables
    gamma: float = 5.0 / 3.0
    energy_source: bool = True
    out: str = "out"
    snapshot_interval: int = 0  # steps between snapshot files; 0 disables
    seed: Optional[int] = None  # interior-node perturbation (tests only)
    perturb_amplitude: float = 0.02

    @property
    def n_y(self) -> int:
        return self.nx if self.ny is None else self.ny

    def validate(self) -> "RunConfig":
        from .problems import PROBLEMS

        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {sorted(PROBLEMS)}")
        if self.m not in (1, 2, 3):
            raise ConfigError(f"m must be 1, 2 or 3 (got {self.m})")
        if self.nx < 1 or self.n_y < 1:
            raise ConfigError("grid sizes must be positive")
        if self.t_final < 0:
            raise ConfigError("t_final must be non-negative")
        if not 0 < self.cfl <= 1:
            raise ConfigError("cfl must lie in (0, 1]")
        if self.dt_cap_coefficient < 0 or self.snapshot_interval < 0:
            raise ConfigError("dt_cap_coefficient and snapshot_interval must be non-negative")
        if not self.gamma > 1:
            raise ConfigError("gamma must exceed 1")
        return self

    def dt_cap(self) -> Optional[float]:
        if self.dt_cap_coefficient == 0:
            return None
        h = 1.0 / max(self.nx, self.n_y)
        return self.dt_cap_coefficient * h ** ((self.m + 1) / 2)


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _convert(name: str, raw: str):
    types = {f.name: f.type for f in fields(RunConfig)}
    if name not in types:
        raise ConfigError(f"unknown config key {name!r}")
    t = types[name]
    raw = raw.strip()
    try:
        if "Optional" in t:
            if raw.lower() in ("", "none"):
                return None
            t = t.replace("Optional[", "").rstrip("]")
        if t == "bool":
            return _BOOL[raw.lower()]
        if t == "int":
            return int(raw)
        if t == "float":
            return float(raw)
        return raw
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def parse_config_text(text: str, base: RunConfig = RunConfig()) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        key = key.strip().replace("-", "_")
        values[key] = _convert(key, raw)
    return replace(base, **values)


def load_config(path, base: RunConfig = RunConfig()) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), base)


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
