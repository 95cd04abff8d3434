"""
Base class for verification suites
"""

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
import logging
import math
from typing import Any, Dict, List


@dataclass(frozen=True)
class CheckResult:
    """One row of a verification report."""

    suite: str
    check: str
    case: str
    observed: float
    expected: float
    tolerance: float
    passed: bool

    def as_row(self) -> Dict[str, Any]:
        row = asdict(self)
        for key in ('observed', 'expected', 'tolerance'):
            row[key] = repr(float(row[key]))
        row['passed'] = 'true' if self.passed else 'false'
        return row


class BaseSuite(ABC):
    """
    Abstract base class for verification suites.

    Subclasses implement ``run`` and record rows through the comparison
    helpers so every check is reported the same way.
    """

    name: str = 'suite'
    min_replicates: int = 0

    def __init__(self):
        """Initialize the suite."""
        self.logger = logging.getLogger(self.__class__.__name__)
        self.results: List[CheckResult] = []

    @abstractmethod
    def run(self) -> List[CheckResult]:
        """
        Run every check of the suite.

        Returns:
            Check rows in execution order
        """
        pass

    def check_relative(
        self,
        check: str,
        case: str,
        observed: float,
        expected: float,
        tolerance: float
    ) -> CheckResult:
        """Record |observed - expected| <= tolerance * max(|expected|, tiny)."""
        scale = max(abs(expected), 1e-300)
        passed = math.isfinite(observed) and abs(observed - expected) <= tolerance * scale
        if expected == 0.0:
            passed = observed == 0.0 or abs(observed) <= tolerance
        return self._record(check, case, observed, expected, tolerance, passed)

    def check_at_most(
        self,
        check: str,
        case: str,
        observed: float,
        bound: float,
        tolerance: float = 0.0
    ) -> CheckResult:
        """Record observed <= bound * (1 + tolerance)."""
        passed = observed <= bound * (1.0 + tolerance)
        return self._record(check, case, observed, bound, tolerance, passed)

    def check_at_least(
        self,
        check: str,
        case: str,
        observed: float,
        bound: float
    ) -> CheckResult:
        """Record observed >= bound."""
        return self._record(check, case, observed, bound, 0.0, observed >= bound)

    def _record(
        self,
        check: str,
        case: str,
        observed: float,
        expected: float,
        tolerance: float,
        passed: bool
    ) -> CheckResult:
        result = CheckResult(self.name, check, case, float(observed), float(expected),
                             float(tolerance), bool(passed))
        self.results.append(result)
        if not passed:
            self.logger.warning(
                f"FAILED {check} [{case}]: observed={observed!r} expected={expected!r}"
            )
        return result

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)
