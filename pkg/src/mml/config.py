"""Experiment configuration and its key = value file format.

A config file is plain INI-style text with one section per module::

    [lab]
    command = levinson
    theta = 0.25, 0.4, 0.5
    tmax = 500, 2000, 8000
    window = from_zero

    [moments]
    rel_tol = 1e-7
    workers = 4

    [kernels]
    spacing = 0.025

Command-line flags override file values, which override the defaults below.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigurationError, GuardrailError
from .kernels import ContourConfig
from .quadrature import QuadratureConfig
from .zeta import ZetaEvalConfig

__all__ = ["ExperimentConfig", "COMMANDS", "load_config", "geometric_grid", "MAX_T", "MAX_LENGTH"]

COMMANDS = ("levinson", "jt-check", "chain", "meanvalue", "zeros", "gsupport")
MAX_T = 1e4
MAX_LENGTH = 1e6


def geometric_grid(lo: float, hi: float, per_decade: int) -> tuple[float, ...]:
    """lo, lo * r, ..., hi with r = 10^(1/per_decade), endpoints included."""
    if not 0 < lo <= hi or per_decade < 1:
        raise ConfigurationError("geometric grid needs 0 < lo <= hi and per_decade >= 1")
    steps = max(1, round(per_decade * math.log10(hi / lo)))
    return tuple(float(lo * (hi / lo) ** (k / steps)) for k in range(steps + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one ``mml`` run needs.

    ``x_list`` holds the mollifier lengths for ``chain`` and ``jt-check``
    (a geometric grid by default), ``t_list`` the heights for ``jt-check``
    and ``gsupport``, ``u_list`` the ``gsupport`` sample points and ``count``
    the number of zeros for ``zeros``.
    """

    command: str = "levinson"
    theta_list: tuple[float, ...] = (0.25, 0.4, 0.5)
    T_list: tuple[float, ...] = (500.0, 2000.0, 8000.0)
    window: str = "from_zero"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    contour: ContourConfig = field(default_factory=ContourConfig)
    g_contour: ContourConfig = field(default_factory=lambda: ContourConfig(height_Y=600.0, tail_tol=1e-5))
    zeta: ZetaEvalConfig = field(default_factory=ZetaEvalConfig)
    cache_dir: str | None = None
    output: str | None = None
    format: str = "csv"
    seed: int = 0
    x_list: tuple[float, ...] = (10.0, 100.0, 1000.0)
    t_list: tuple[float, ...] = (0.0, 5.0, 50.0)
    u_list: tuple[float, ...] = (0.1, 0.5, 0.9, 1.05, 1.1, 2.0, 10.0)
    count: int = 3
    beta0: float = 0.5
    override_guardrail: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.window not in ("from_zero", "dyadic"):
            raise ConfigurationError(f"window must be from_zero or dyadic, got {self.window!r}")
        if self.format not in ("csv", "json"):
            raise ConfigurationError(f"format must be csv or json, got {self.format!r}")
        if any(not th > 0 for th in self.theta_list):
            raise ConfigurationError("theta values must be positive")
        if any(not T > 0 for T in self.T_list):
            raise ConfigurationError("T values must be positive")
        if self.count < 0:
            raise ConfigurationError("count must be >= 0")

    def windows(self) -> list[tuple[float, float]]:
        """(T1, T2) per T: (0, T) or the dyadic (T, 2T)."""
        if self.window == "from_zero":
            return [(0.0, float(T)) for T in self.T_list]
        return [(float(T), 2.0 * T) for T in self.T_list]

    def check_guardrail(self, T: float, length: float) -> None:
        if self.override_guardrail:
            return
        if T > MAX_T:
            raise GuardrailError(f"T = {T:g} exceeds the desk-scale limit {MAX_T:g}; pass --override-guardrail")
        if length > MAX_LENGTH:
            raise GuardrailError(
                f"mollifier length {length:g} exceeds the desk-scale limit {MAX_LENGTH:g}; pass --override-guardrail"
            )

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------- file format

def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.replace(";", ",").split(",") if p.strip())


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


_LAB_KEYS = {
    "command": str,
    "theta": ("theta_list", _floats),
    "tmax": ("T_list", _floats),
    "window": str,
    "cache_dir": str,
    "output": str,
    "format": str,
    "seed": int,
    "x": ("x_list", _floats),
    "t": ("t_list", _floats),
    "u": ("u_list", _floats),
    "count": int,
    "beta0": float,
    "override_guardrail": _bool,
}


def _typed_section(cls, section) -> dict:
    kinds = {f.name: f.type for f in fields(cls)}
    out = {}
    for key, raw in section.items():
        if key not in kinds:
            raise ConfigurationError(f"unknown key {key!r} for {cls.__name__}")
        kind = kinds[key]
        if "None" in str(kind) and raw.strip().lower() == "none":
            out[key] = None
        elif "int" in str(kind) and "float" not in str(kind):
            out[key] = int(raw)
        elif "float" in str(kind):
            out[key] = float(raw)
        else:
            out[key] = raw.strip()
    return out


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Read a config file (optional) and apply keyword overrides on top."""
    values: dict = {}
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        text = Path(path).read_text()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
        for name in parser.sections():
            sec = parser[name]
            if name == "lab":
                for key, raw in sec.items():
                    if key not in _LAB_KEYS:
                        raise ConfigurationError(f"unknown key {key!r} in [lab]")
                    spec = _LAB_KEYS[key]
                    target, conv = spec if isinstance(spec, tuple) else (key, spec)
                    values[target] = conv(raw)
            elif name == "moments":
                values["quadrature"] = QuadratureConfig(**_typed_section(QuadratureConfig, sec))
            elif name == "kernels":
                values["contour"] = ContourConfig(**_typed_section(ContourConfig, sec))
            elif name == "zeta":
                values["zeta"] = ZetaEvalConfig(**_typed_section(ZetaEvalConfig, sec))
            else:
                raise ConfigurationError(f"unknown section [{name}]")
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
