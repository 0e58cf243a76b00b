"""Check results and run reports"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass
class Check:
    """Outcome of one named verification"""
    name: str
    max_defect: float
    passed: bool
    t: Optional[complex] = None
    witness: Optional[Dict[str, Any]] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def sort_key(self) -> Tuple:
        t = (0, 0.0, 0.0) if self.t is None else (1, self.t.real, self.t.imag)
        return (self.name, t, sorted((k, repr(v)) for k, v in self.params.items()))

    @property
    def label(self) -> str:
        """Name plus parameters, for one-line summaries"""
        parts = [self.name]
        if self.t is not None:
            parts.append(f"t={format_complex(self.t)}")
        parts.extend(f"{key}={value}" for key, value in sorted(self.params.items()))
        return " ".join(parts)

    def to_json(self) -> dict:
        data = {
            "name": self.name,
            "t": None if self.t is None else [self.t.real, self.t.imag],
            "max_defect": float(self.max_defect),
            "pass": bool(self.passed),
            "witness": self.witness,
        }
        if self.params:
            data["params"] = dict(sorted(self.params.items()))
        return data


@dataclass
class Report:
    """Everything a CLI run writes"""
    command: str
    version: str
    config: Dict[str, Any]
    model: Optional[Dict[str, Any]] = None
    checks: List[Check] = field(default_factory=list)
    campaigns: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> Optional[Check]:
        return next((check for check in self.checks if not check.passed), None)

    def sort(self):
        self.checks.sort(key=lambda check: check.sort_key)

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "model": self.model,
            "checks": [check.to_json() for check in self.checks],
            "campaigns": self.campaigns,
        }


def format_complex(value: complex) -> str:
    """Compact a+bi rendering"""
    value = complex(value)
    if value.imag == 0:
        return f"{value.real:g}"
    if value.real == 0:
        return f"{value.imag:g}i"
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real:g}{sign}{abs(value.imag):g}i"
