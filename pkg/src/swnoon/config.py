"""Run configuration: defaults, flat key=value config files, overrides.

Precedence is defaults < config file < command-line flags.  The file
format is one ``key = value`` pair per line, ``#`` starting a comment
line, blank lines ignored; 3-vectors are comma-separated triples.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Mapping, Optional, Tuple

from .protocol import BeamGeometry

__all__ = ["ConfigError", "RunConfig", "parse_config_file", "apply_values"]

Vec3 = Tuple[float, float, float]


class ConfigError(ValueError):
    """Invalid configuration input (bad key, value, or combination)."""


@dataclass(frozen=True)
class RunConfig:
    """All knobs shared by the command-line drivers.

    Defaults are the headline operating point: a 20-excitation state in
    a 400-atom ensemble with a 300 MHz blockade shift and a 300 us
    Rydberg lifetime, with counter-propagating drive beams along x.
    """

    order: int = 20
    atom_count: float = 400.0
    energy_shift_mhz: float = 300.0
    lifetime_us: float = 300.0
    k_gra: Vec3 = (8.0, 0.0, 0.0)
    k_ras: Vec3 = (-7.9, 0.0, 0.0)
    k_grb: Vec3 = (-8.0, 0.0, 0.0)
    k_rbs: Vec3 = (7.9, 0.0, 0.0)
    displacement_um: Vec3 = (0.0, 0.0, 0.0)
    shots: int = 0
    seed: int = 12345
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ConfigError(f"order must be >= 1, got {self.order}")
        if not self.atom_count >= 1.0:
            raise ConfigError(f"atom_count must be >= 1, got {self.atom_count}")
        if not self.energy_shift_mhz > 0.0:
            raise ConfigError(
                f"energy_shift_mhz must be positive, got {self.energy_shift_mhz}"
            )
        if not self.lifetime_us > 0.0:
            raise ConfigError(
                f"lifetime_us must be positive, got {self.lifetime_us}"
            )
        if self.shots < 0:
            raise ConfigError(f"shots must be >= 0, got {self.shots}")
        for name in ("k_gra", "k_ras", "k_grb", "k_rbs", "displacement_um"):
            vec = getattr(self, name)
            if len(vec) != 3 or not all(isinstance(c, float) for c in vec):
                raise ConfigError(f"{name} must be a 3-vector of floats, got {vec}")

    def geometry(self) -> BeamGeometry:
        return BeamGeometry(
            k_gra=self.k_gra, k_ras=self.k_ras, k_grb=self.k_grb, k_rbs=self.k_rbs
        )


def _parse_vec3(key: str, raw: str) -> Vec3:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(
            f"{key}: expected three comma-separated numbers, got {raw!r}"
        )
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    return (x, y, z)


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc


_PARSERS = {
    "order": _parse_int,
    "atom_count": _parse_float,
    "energy_shift_mhz": _parse_float,
    "lifetime_us": _parse_float,
    "k_gra": _parse_vec3,
    "k_ras": _parse_vec3,
    "k_grb": _parse_vec3,
    "k_rbs": _parse_vec3,
    "displacement_um": _parse_vec3,
    "shots": _parse_int,
    "seed": _parse_int,
    "out": lambda key, raw: raw,
}


def parse_config_file(path: str) -> Dict[str, str]:
    """Read a flat key=value file into a raw string mapping."""
    values: Dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = raw.strip()
    return values


def apply_values(base: RunConfig, values: Mapping[str, str]) -> RunConfig:
    """Overlay raw string values (from a config file) onto a config."""
    typed = {}
    for key, raw in values.items():
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"unknown config key {key!r}")
        typed[key] = parser(key, raw)
    return replace(base, **typed)
