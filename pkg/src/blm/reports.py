"""Result records returned by validation, dependence and order checks."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if np.isfinite(v) else repr(v)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


@dataclass(frozen=True)
class GridReport:
    """Outcome of a check evaluated on a finite grid.

    ``worst_value`` is the smallest (normalized) margin seen; the verdict is
    ``"fail"`` exactly when it lies below ``-tolerance``. ``witness`` holds
    the coordinates that produced it.
    """

    verdict: str
    worst_value: float
    witness: tuple
    configurations_tested: int
    tolerance: float = 0.0
    label: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict[str, Any]:
        return _plain(asdict(self))

    @classmethod
    def from_margins(cls, margins, witnesses, tolerance, label="", details=None):
        """Build a report from parallel sequences of margins and witnesses."""
        margins = np.asarray(margins, dtype=float)
        if margins.size == 0:
            return cls("pass", float("inf"), (), 0, tolerance, label, details or {})
        k = int(np.argmin(margins))
        worst = float(margins[k])
        verdict = "fail" if worst < -tolerance else "pass"
        return cls(verdict, worst, tuple(witnesses[k]), int(margins.size),
                   tolerance, label, details or {})


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    clause: str
    passed: bool
    witness: float | None
    margin: float
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[ValidationCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> ValidationCheck:
        for c in self.checks:
            if c.name == name or c.clause == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "checks": [_plain(asdict(c)) for c in self.checks]}


@dataclass(frozen=True)
class OrderVerdict:
    """Verdict of a stochastic-order comparison.

    ``holds`` is one of ``"yes"``, ``"no"`` or ``"inconclusive"``; a ``"no"``
    always carries a witness.
    """

    relation: str
    holds: str
    worst_value: float
    witness: tuple = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.holds not in ("yes", "no", "inconclusive"):
            raise ValueError(f"bad verdict {self.holds!r}")
        if self.holds == "no" and not self.witness:
            raise ValueError("a negative verdict needs a witness")

    @property
    def ok(self) -> bool:
        return self.holds == "yes"

    def to_dict(self) -> dict[str, Any]:
        return _plain(asdict(self))
