"""Exception hierarchy shared by the solvers and the CLI."""

from __future__ import annotations

import numpy as np


class RestartHitError(Exception):
    """Base class for all errors raised by this package."""


class KernelError(RestartHitError, ValueError):
    """Invalid transition kernel, restart distribution or target set."""


class NegativeEntry(KernelError):
    def __init__(self, row: int, col: int, value: float):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"negative transition probability {value!r} at row {row}, column {col}")


class RowSumViolation(KernelError):
    """A row does not sum to one; ``deviation`` is ``1 - sum(row)``."""

    def __init__(self, row: int, deviation: float):
        self.row, self.deviation = row, deviation
        kind = "deficit" if deviation > 0 else "excess"
        super().__init__(f"row {row} does not sum to 1 ({kind} {abs(deviation):.3g})")


class SolverFailure(RestartHitError, ArithmeticError):
    def __init__(self, what: str, residual: float, limit: float):
        self.residual, self.limit = residual, limit
        super().__init__(f"{what}: residual {residual:.3e} exceeds {limit:.1e}")


class NonConverged(RestartHitError):
    """Value iteration hit ``max_iter``; carries the last iterate."""

    def __init__(self, last: np.ndarray, iterations: int):
        self.last = last
        self.iterations = iterations
        super().__init__(
            f"value iteration did not converge in {iterations} iterations "
            f"(max iterate {float(np.max(last)):.6g})"
        )


class EquivalenceViolation(RestartHitError, AssertionError):
    def __init__(self, flags: dict):
        self.flags = flags
        super().__init__(f"finiteness criteria disagree: {flags}")


class InfeasibleTarget(RestartHitError):
    def __init__(self, message: str = "target set is never reached from the restart distribution"):
        super().__init__(message)


class BoundaryTooClose(RestartHitError, ValueError):
    def __init__(self, n: int, tail: float, limit: float):
        self.n, self.tail = n, tail
        super().__init__(f"truncation at N={n} leaves tail bound {tail:.3e} > {limit:.0e}")
