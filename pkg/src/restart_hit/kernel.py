"""Finite stochastic kernels, target sets and the restarted kernel.

All containers are frozen; the arrays they hold are marked read-only so a
kernel can be shared between threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import KernelError, NegativeEntry, RowSumViolation

ROW_SUM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteKernel:
    """Row-stochastic ``n x n`` transition matrix. Build with :func:`validate_kernel`."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TargetSet:
    """Nonempty set of state indices, sorted and deduplicated."""

    indices: tuple[int, ...]
    n: int

    @classmethod
    def of(cls, indices: Iterable[int] | int, n: int) -> "TargetSet":
        if np.isscalar(indices):
            indices = [indices]
        idx = sorted({int(i) for i in indices})
        if not idx:
            raise KernelError("target set must be nonempty")
        if idx[0] < 0 or idx[-1] >= n:
            raise KernelError(f"target indices {idx} out of range for {n} states")
        return cls(tuple(idx), n)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.indices)] = True
        return m

    def __contains__(self, x: int) -> bool:
        return x in self.indices


def validate_distribution(nu, n: int, name: str = "nu") -> np.ndarray:
    nu = np.asarray(nu, dtype=float)
    if nu.shape != (n,):
        raise KernelError(f"{name} must have length {n}, got shape {nu.shape}")
    if not np.all(np.isfinite(nu)):
        raise KernelError(f"{name} has non-finite entries")
    if np.any(nu < 0):
        j = int(np.argmax(nu < 0))
        raise KernelError(f"{name}[{j}] = {nu[j]!r} is negative")
    dev = 1.0 - nu.sum()
    if abs(dev) > ROW_SUM_TOL:
        raise KernelError(f"{name} does not sum to 1 (deviation {dev:.3g})")
    return _frozen(nu)


def validate_kernel(rows) -> FiniteKernel:
    """Check that ``rows`` is a square row-stochastic matrix.

    Substochastic rows are rejected rather than renormalized.
    """
    m = np.asarray(rows, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise KernelError(f"transition matrix must be square and nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise KernelError("transition matrix has non-finite entries")
    neg = np.argwhere(m < 0)
    if len(neg):
        i, j = (int(v) for v in neg[0])
        raise NegativeEntry(i, j, float(m[i, j]))
    dev = 1.0 - m.sum(axis=1)
    bad = np.flatnonzero(np.abs(dev) > ROW_SUM_TOL)
    if len(bad):
        raise RowSumViolation(int(bad[0]), float(dev[bad[0]]))
    return FiniteKernel(_frozen(m))


@dataclass(frozen=True, eq=False)
class RestartChain:
    """Kernel ``P`` restarted from ``nu`` with probability ``p`` after each transition."""

    kernel: FiniteKernel
    nu: np.ndarray
    p: float

    def __post_init__(self):
        object.__setattr__(self, "nu", validate_distribution(self.nu, self.kernel.n))
        p = float(self.p)
        if not 0.0 < p < 1.0:
            raise KernelError(f"restart probability must lie in (0, 1), got {p!r}")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.kernel.n

    def with_p(self, p: float) -> "RestartChain":
        return RestartChain(self.kernel, self.nu, p)


def restart_kernel(chain: RestartChain) -> FiniteKernel:
    """Transition matrix ``p * 1 nu^T + (1 - p) P`` of the restarted chain."""
    m = chain.p * chain.nu[None, :] + (1.0 - chain.p) * chain.kernel.matrix
    return validate_kernel(m)


def taboo_kernel(kernel: FiniteKernel, H: TargetSet) -> np.ndarray:
    """Substochastic matrix of transitions that avoid ``H``.

    Columns in ``H`` are zeroed (mass entering the target is removed); rows in
    ``H`` are zeroed as well since no solver reads them.
    """
    q = np.array(kernel.matrix, dtype=float)
    mask = H.mask
    q[:, mask] = 0.0
    q[mask, :] = 0.0
    return q


def taboo_power_mass(taboo: np.ndarray, t: int, H: TargetSet) -> np.ndarray:
    """Survival mass ``sum_y taboo^t(x, y)``; equals ``1{x not in H}`` at ``t = 0``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    m = (~H.mask).astype(float)
    for _ in range(t):
        m = taboo @ m
    return m
