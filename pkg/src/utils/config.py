"""Configuration management"""

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from ..errors import ConfigError

THREADS_VARIABLE = "TWISTOR_FORGE_THREADS"

COMMANDS = ("family-sweep", "verify-lemmas", "fujiki", "period-line", "lift-check", "roundtrip")
FORMATS = ("json", "csv")
KINDS = ("degenerate", "twistor")


@dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold a run uses"""
    pruning: float = 1e-12
    rank: float = 1e-9
    structure: float = 1e-9
    cartan: float = 1e-10
    positivity: float = 1e-10
    fiber: float = 1e-9
    period: float = 1e-10
    isotropy: float = 1e-12
    fit: float = 1e-8
    composition: float = 1e-10
    holomorphy: float = 1e-6

    def override(self, updates: Dict[str, Any]) -> "Tolerances":
        """
        Copy with some thresholds replaced.

        Raises:
            ConfigError: for unknown names or non-positive values
        """
        known = {f.name for f in fields(self)}
        values = {}
        for name, raw in updates.items():
            if name not in known:
                raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(sorted(known))}", key=name)
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerance {name} is not a number: {raw!r}", key=name)
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be positive, got {value}", key=name)
            values[name] = value
        return replace(self, **values)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one CLI invocation"""
    command: str
    seed: int = 0
    n: int = 1
    p: Optional[int] = None
    t: Tuple[complex, ...] = (0j, 1 + 0j, 1j, 3 - 2j, 10j)
    trials: int = 100
    lattice: str = "k3"
    kind: str = "degenerate"
    samples: int = 100
    output: Optional[str] = None
    format: str = "json"
    inject_bug: bool = False
    verbose: bool = False
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}", command=self.command)
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}", format=self.format)
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {', '.join(KINDS)}", kind=self.kind)
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        for name in ("n", "trials", "samples"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}", key=name)
        if self.p is not None and self.p < 0:
            raise ConfigError(f"p must be non-negative, got {self.p}", key="p")

    def to_json(self) -> Dict[str, Any]:
        """Everything but the runtime-only keys (output, verbose)"""
        data = asdict(self)
        data.pop("output")
        data.pop("verbose")
        data["t"] = [[value.real, value.imag] for value in self.t]
        return data


CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def parse_complex(text: str) -> complex:
    """
    Parse a+bi with optional parts: "3", "i", "-2i", "5-5i", "1.5e-3+2i".

    Raises:
        ConfigError: on anything else
    """
    s = text.strip().replace(" ", "").lower().replace("j", "i")
    if not s:
        raise ConfigError("empty complex number")
    try:
        if not s.endswith("i"):
            return complex(float(s), 0.0)
        body = s[:-1]
        split = 0
        for position in range(len(body) - 1, 0, -1):
            if body[position] in "+-" and body[position - 1] != "e":
                split = position
                break
        real, imag = body[:split], body[split:]
        if imag in ("", "+"):
            imag = "1"
        elif imag == "-":
            imag = "-1"
        return complex(float(real) if real else 0.0, float(imag))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}", value=text)


def parse_t_list(text: str) -> Tuple[complex, ...]:
    values = tuple(parse_complex(part) for part in text.split(",") if part.strip())
    if not values:
        raise ConfigError("empty t-list")
    return values


def _coerce(key: str, value: Any) -> Any:
    if key == "t":
        if isinstance(value, str):
            return parse_t_list(value)
        out: List[complex] = []
        for item in value:
            if isinstance(item, (list, tuple)) and len(item) == 2:
                out.append(complex(float(item[0]), float(item[1])))
            elif isinstance(item, str):
                out.append(parse_complex(item))
            else:
                out.append(complex(item))
        return tuple(out)
    if key in ("seed", "n", "p", "trials", "samples"):
        if isinstance(value, bool) or int(value) != value:
            raise ConfigError(f"{key} must be an integer, got {value!r}", key=key)
        return int(value)
    return value


class ConfigManager:
    """Resolves run configurations from defaults, a JSON file and command-line flags"""

    def __init__(self, env_file: Optional[str] = None):
        load_dotenv(env_file or Path.cwd() / ".env", override=False)

    @property
    def threads(self) -> int:
        """TWISTOR_FORGE_THREADS, defaulting to the CPU count"""
        raw = os.environ.get(THREADS_VARIABLE)
        if raw is None or not raw.strip():
            return max(1, os.cpu_count() or 1)
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"{THREADS_VARIABLE} must be an integer, got {raw!r}")

    def load_file(self, path: str) -> Dict[str, Any]:
        """Load a JSON config file; unknown keys are rejected"""
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Failed to load config {path}: {e}", path=path)
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object", path=path)
        unknown = sorted(set(data) - CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}", keys=unknown)
        return data

    def resolve(
        self,
        command: str,
        flags: Dict[str, Any],
        config_path: Optional[str] = None,
        tolerance_overrides: Optional[Dict[str, Any]] = None,
    ) -> RunConfig:
        """
        Build the RunConfig for a command.

        Args:
            command: subcommand name
            flags: command-line values; None means "not given"
            config_path: optional JSON config file
            tolerance_overrides: --tol name=value pairs

        Returns:
            RunConfig with later layers winning
        """
        values: Dict[str, Any] = {}
        tolerances: Dict[str, Any] = {}
        if config_path:
            data = self.load_file(config_path)
            tolerances.update(data.pop("tolerances", {}) or {})
            values.update(data)
        values.update({key: value for key, value in flags.items() if value is not None})
        tolerances.update(tolerance_overrides or {})
        try:
            coerced = {key: _coerce(key, value) for key, value in values.items()}
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid config value: {e}")
        return RunConfig(command=command, tolerances=Tolerances().override(tolerances), **coerced)


def parse_tolerance_pairs(pairs: List[str]) -> Dict[str, str]:
    """["rank=1e-8", ...] -> {"rank": "1e-8"}"""
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ConfigError(f"expected name=value, got {pair!r}", value=pair)
        out[name.strip()] = value.strip()
    return out
