"""
Base Selector - Foundation for all Subset Select algorithms.

Every algorithm inherits from this class and implements select().
"""

from __future__ import annotations

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
import structlog

from ..core.bitmatrix import BitMatrix
from ..core.errors import QGTError
from ..core.model import ItemSet

logger = structlog.get_logger()


@dataclass
class SelectionResult:
    """Result from one selector execution."""

    algorithm_id: str
    success: bool
    items: ItemSet
    errors: list[str] = field(default_factory=list)
    execution_time_us: int = 0


class SubsetSelector(ABC):
    """
    Base class for Subset Select algorithms.

    Selectors are callables (A, y, k) -> ItemSet so they can be passed to
    the wrappers as bases; run() adds timing, logging and error capture.
    """

    def __init__(self, algorithm_id: str, name: str) -> None:
        self.algorithm_id = algorithm_id
        self.name = name
        self._logger = logger.bind(algorithm_id=algorithm_id)

    @abstractmethod
    def select(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        """Return the selected items for the instance view (A, y, k)."""

    def __call__(self, A: BitMatrix, y: np.ndarray, k: int) -> ItemSet:
        return self.select(A, y, k)

    def run(self, A: BitMatrix, y: np.ndarray, k: int) -> SelectionResult:
        """
        Run the selector with timing and error capture.

        Lab errors (for example a degenerate split) become an unsuccessful
        result with an empty selection instead of propagating.
        """
        start = time.perf_counter_ns()
        try:
            items = self.select(A, y, k)
        except QGTError as e:
            elapsed = (time.perf_counter_ns() - start) // 1000
            self._logger.error("Selector failed", error=str(e))
            return SelectionResult(
                algorithm_id=self.algorithm_id,
                success=False,
                items=ItemSet(),
                errors=[str(e)],
                execution_time_us=elapsed,
            )

        elapsed = (time.perf_counter_ns() - start) // 1000
        self._logger.debug("Selector completed", selected=len(items), execution_time_us=elapsed)
        return SelectionResult(
            algorithm_id=self.algorithm_id,
            success=True,
            items=items,
            execution_time_us=elapsed,
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.algorithm_id!r})"
