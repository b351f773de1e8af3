"""Analysis configuration: ``key = value`` files and the damping-rate mini-language."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .divisibility import ChannelFamily
from .models import DampingModel, OhmicBath, damping_family, ohmic_qbm_family
from .tables import read_channel_table, tabulated_family

__all__ = ["ConfigError", "AnalysisConfig", "parse_gamma_spec", "load_config", "build_family"]

MODELS = ("damping", "qbm-ohmic", "tabulated")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    model: str = "damping"
    alpha: float = 0.1
    gamma: str = "const:1"
    x: float = 0.1
    x_values: tuple[float, ...] = ()
    temperature_regime: str = "high"
    temperature: float | None = None
    coupling: float = 0.01
    table: str | None = None
    t_start: float = 0.0
    t_end: float = 1.0
    n_points: int = 201
    eps0: float | None = None
    rate_tol: float = 1e-8
    output_dir: str = "."
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {', '.join(MODELS)}; got {self.model!r}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ConfigError(f"n_points must be odd and >= 3, got {self.n_points}")
        if not 0.0 <= self.t_start < self.t_end:
            raise ConfigError(f"invalid interval [{self.t_start}, {self.t_end}]")
        if self.eps0 is not None and not self.eps0 > 0.0:
            raise ConfigError(f"eps0 must be positive, got {self.eps0}")
        if not self.rate_tol >= 0.0:
            raise ConfigError(f"rate_tol must be >= 0, got {self.rate_tol}")
        if self.model == "tabulated":
            if not self.table:
                raise ConfigError("model = tabulated needs a 'table' path")
            if not self.resolve(self.table).is_file():
                raise ConfigError(f"table file not found: {self.resolve(self.table)}")
        if self.gamma.startswith("table:") and self.model == "damping":
            path = self.resolve(self.gamma[len("table:") :])
            if not path.is_file():
                raise ConfigError(f"gamma table not found: {path}")

    def resolve(self, p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else self.base_dir / path

    @property
    def output_path(self) -> Path:
        return self.resolve(self.output_dir)

    def bath(self, x: float | None = None) -> OhmicBath:
        return OhmicBath(self.coupling, self.x if x is None else x, self.temperature_regime, self.temperature)

    def with_overrides(self, **kw) -> "AnalysisConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _to_float(v: str) -> float:
    out = float(v)
    if not math.isfinite(out):
        raise ValueError(f"non-finite value {v!r}")
    return out


_PARSERS: dict[str, Callable[[str], object]] = {
    "model": str,
    "alpha": _to_float,
    "gamma": str,
    "x": _to_float,
    "x_values": lambda v: tuple(_to_float(p) for p in v.split(",") if p.strip()),
    "temperature_regime": str,
    "temperature": _to_float,
    "coupling": _to_float,
    "table": str,
    "t_start": _to_float,
    "t_end": _to_float,
    "n_points": int,
    "eps0": _to_float,
    "rate_tol": _to_float,
    "output_dir": str,
}


def load_config(path) -> AnalysisConfig:
    """Read a UTF-8 ``key = value`` file; ``#`` starts a comment, unknown keys are rejected."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    try:
        return AnalysisConfig(base_dir=path.parent, **values)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_gamma_spec(spec: str, base_dir: Path = Path(".")) -> tuple[Callable[[float], float], float]:
    """Damping rate from ``const:<v>``, ``cos:<amp>,<freq>`` or ``table:<path>``.

    Returns the rate function and the end of its domain (``inf`` when unbounded).
    A table is a CSV with header ``t,gamma``, interpolated by a cubic spline.
    """
    kind, _, arg = spec.partition(":")
    kind = kind.strip()
    try:
        if kind == "const":
            v = _to_float(arg)
            return (lambda t: v), math.inf
        if kind == "cos":
            amp, freq = (_to_float(p) for p in arg.split(","))
            return (lambda t: amp * math.cos(freq * t)), math.inf
    except ValueError as exc:
        raise ConfigError(f"bad gamma spec {spec!r}: {exc}") from None
    if kind == "table":
        path = Path(arg.strip())
        path = path if path.is_absolute() else base_dir / path
        try:
            data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
            t, g = np.asarray(data["t"], dtype=float), np.asarray(data["gamma"], dtype=float)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read gamma table {path}: {exc}") from None
        if t.size < 2 or t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
            raise ConfigError(f"gamma table {path}: times must start at 0 and increase")
        spline = CubicSpline(t, g)
        return (lambda s: float(spline(s))), float(t[-1])
    raise ConfigError(f"unknown gamma spec {spec!r}; use const:<v>, cos:<amp>,<freq> or table:<path>")


def build_family(cfg: AnalysisConfig, x: float | None = None) -> ChannelFamily:
    """Channel family covering ``[0, cfg.t_end]`` for the configured model."""
    if cfg.model == "damping":
        gamma, t_max = parse_gamma_spec(cfg.gamma, cfg.base_dir)
        if cfg.t_end > t_max:
            raise ConfigError(f"t_end = {cfg.t_end} beyond the gamma table (ends at {t_max})")
        return damping_family(DampingModel(cfg.alpha, gamma), cfg.t_end)
    if cfg.model == "qbm-ohmic":
        try:
            bath = cfg.bath(x)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return ohmic_qbm_family(bath, cfg.t_end)
    fam = tabulated_family(read_channel_table(cfg.resolve(cfg.table)), name=str(cfg.table))
    if cfg.t_end > fam.t_max:
        raise ConfigError(f"t_end = {cfg.t_end} beyond the table (ends at {fam.t_max})")
    return fam
