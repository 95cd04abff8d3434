"""
Exact binomial coefficients from a cached Pascal triangle
"""

import logging
import math
import threading
from typing import List, Optional, Tuple

import numpy as np

from ..core.exceptions import PopulationCapExceeded


class PascalTriangle:
    """
    Exact integer binomial coefficients C(n, k) for 0 <= n <= max_order.

    Rows are built on demand and kept; Python integers keep them exact at any
    order. Orders beyond ``max_order`` are a configuration error.
    """

    def __init__(self, max_order: int):
        """
        Initialize the triangle.

        Args:
            max_order: Largest row index that may be requested
        """
        self.max_order = max_order
        self.logger = logging.getLogger(self.__class__.__name__)
        self._rows: List[Tuple[int, ...]] = [(1,)]
        self._log_rows: dict = {}
        self._lock = threading.Lock()

    def row(self, n: int) -> Tuple[int, ...]:
        """
        Return row ``n`` of the triangle.

        Raises:
            PopulationCapExceeded: If ``n`` exceeds the configured order
        """
        if n < 0:
            raise ValueError(f"Binomial order must be nonnegative, got {n}")
        if n > self.max_order:
            raise PopulationCapExceeded(
                f"Binomial order {n} exceeds the cap {self.max_order}; raise POPULATION_CAP"
            )
        if n >= len(self._rows):
            with self._lock:
                while len(self._rows) <= n:
                    previous = self._rows[-1]
                    self._rows.append(
                        (1,) + tuple(a + b for a, b in zip(previous, previous[1:])) + (1,)
                    )
                self.logger.debug(f"Pascal triangle extended to order {len(self._rows) - 1}")
        return self._rows[n]

    def coefficient(self, n: int, k: int) -> int:
        if k < 0 or k > n:
            return 0
        return self.row(n)[k]

    def log_row(self, n: int) -> np.ndarray:
        """Natural logarithms of row ``n`` as a read-only float array."""
        cached = self._log_rows.get(n)
        if cached is None:
            cached = np.array([math.log(c) for c in self.row(n)], dtype=float)
            cached.setflags(write=False)
            self._log_rows[n] = cached
        return cached


_triangle: Optional[PascalTriangle] = None


def get_triangle() -> PascalTriangle:
    """
    Get the shared triangle, sized for two source compartments at the population cap.

    Returns:
        PascalTriangle instance
    """
    global _triangle
    if _triangle is None:
        from ..config import get_settings
        _triangle = PascalTriangle(max_order=2 * get_settings().population_cap)
    return _triangle


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) from the shared triangle."""
    return get_triangle().coefficient(n, k)
