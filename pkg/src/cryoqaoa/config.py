"""Scenario configuration: flat key = value files plus CLI overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from .timing import GateTimings, PRESETS


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_str(text: str) -> str:
    return text


def _parse_int_or_word(word: str):
    def parse(text: str) -> int | str:
        if text == word:
            return word
        return int(text)

    return parse


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.replace(",", " ").split())


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one end-to-end run needs, with documented defaults."""

    instance: str | None = None
    generator: str | None = None
    timings: str = "paper-v1"
    t_reset_ns: float | None = None
    t_init_ns: float | None = None
    t_rx_ns: float | None = None
    t_rz_ns: float | None = None
    t_cnot_ns: float | None = None
    t_meas_ns: float | None = None
    trials: int = 1000
    layers: int = 1
    parallelism: int | str = "full"
    param_bits: int = 32
    counter_bits: int | str = "auto"
    overhead_budget: float = 0.05
    source: str = "auto"
    marginal: float = 0.5
    gammas: tuple[float, ...] = (0.5,)
    betas: tuple[float, ...] = (0.25,)
    optimize_steps: int = 0
    seed: int = 0
    statevector_limit: int = 16
    base_dir: str = "."

    def gate_timings(self) -> GateTimings:
        if self.timings not in PRESETS:
            raise ValueError(
                f"unknown timings preset {self.timings!r}; choose from {sorted(PRESETS)}"
            )
        base = PRESETS[self.timings]
        overrides = {
            name: getattr(self, name)
            for name in (
                "t_reset_ns",
                "t_init_ns",
                "t_rx_ns",
                "t_rz_ns",
                "t_cnot_ns",
                "t_meas_ns",
            )
            if getattr(self, name) is not None
        }
        return replace(base, **overrides) if overrides else base

    def validate(self) -> None:
        if self.instance is None and self.generator is None:
            raise ValueError("config needs an 'instance' path or a 'generator' spec")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.source not in ("auto", "exact", "synthetic"):
            raise ValueError(f"source must be auto, exact, or synthetic, got {self.source!r}")
        if not 0 <= self.marginal <= 1:
            raise ValueError(f"marginal must be in [0, 1], got {self.marginal}")
        if self.overhead_budget <= 0:
            raise ValueError(f"overhead_budget must be positive, got {self.overhead_budget}")
        if isinstance(self.counter_bits, int) and self.counter_bits < 2:
            raise ValueError(f"counter_bits must be >= 2, got {self.counter_bits}")
        if isinstance(self.parallelism, int) and self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")
        if len(self.gammas) != len(self.betas):
            raise ValueError("gammas and betas must have the same length")
        self.gate_timings()

    def instance_path(self) -> Path | None:
        if self.instance is None:
            return None
        path = Path(self.instance)
        if not path.is_absolute():
            path = Path(self.base_dir) / path
        return path


_PARSERS: dict[str, Any] = {
    "instance": _parse_str,
    "generator": _parse_str,
    "timings": _parse_str,
    "t_reset_ns": _parse_float,
    "t_init_ns": _parse_float,
    "t_rx_ns": _parse_float,
    "t_rz_ns": _parse_float,
    "t_cnot_ns": _parse_float,
    "t_meas_ns": _parse_float,
    "trials": _parse_int,
    "layers": _parse_int,
    "parallelism": _parse_int_or_word("full"),
    "param_bits": _parse_int,
    "counter_bits": _parse_int_or_word("auto"),
    "overhead_budget": _parse_float,
    "source": _parse_str,
    "marginal": _parse_float,
    "gammas": _parse_floats,
    "betas": _parse_floats,
    "optimize_steps": _parse_int,
    "seed": _parse_int,
    "statevector_limit": _parse_int,
}


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Parse a scenario file; errors carry the file, line, and field."""
    path = Path(path)
    values: dict[str, Any] = {"base_dir": str(path.parent)}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return ScenarioConfig(**values)


def apply_overrides(config: ScenarioConfig, overrides: dict[str, Any]) -> ScenarioConfig:
    """CLI flags win over config-file keys; None means not given."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **updates) if updates else config


def resolved_items(config: ScenarioConfig) -> list[tuple[str, Any]]:
    """Stable key order for the CSV/summary config comment."""
    out = []
    for f in sorted(fields(config), key=lambda f: f.name):
        if f.name == "base_dir":
            continue
        value = getattr(config, f.name)
        if value is None:
            continue
        if isinstance(value, tuple):
            value = ",".join(repr(v) for v in value)
        out.append((f.name, value))
    return out
