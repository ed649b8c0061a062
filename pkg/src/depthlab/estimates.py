"""Shared result containers: Monte-Carlo estimates and check reports."""

from __future__ import annotations

from dataclasses import dataclass, field

# Two-sided 95% normal quantile used for all reported confidence intervals.
Z95 = 1.959963984540054


@dataclass(frozen=True)
class EstimateWithCI:
    """A Monte-Carlo estimate with its standard error and 95% CI."""

    value: float
    std_error: float
    n_samples: int
    seed: int
    stream: int = 0

    @property
    def ci_low(self) -> float:
        return self.value - Z95 * self.std_error

    @property
    def ci_high(self) -> float:
        return self.value + Z95 * self.std_error

    def within(self, target: float, n_sigma: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.std_error + slack


@dataclass
class CheckReport:
    """Outcome of a numerical inequality/identity check.

    `worst` carries the extremal observed quantity (ratio, gauge, margin...)
    so regressions can pin it; `witness` identifies where it occurred.
    """

    name: str
    passed: bool
    worst: float
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed
