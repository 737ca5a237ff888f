"""Invariant probability of the restarted chain, computed two independent ways."""

from __future__ import annotations

import enum
import logging
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure
from .kernel import FiniteKernel, RestartChain, TargetSet, restart_kernel

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


class Method(enum.Enum):
    SERIES = "series"
    STATIONARITY = "stationarity"


@dataclass(frozen=True, eq=False)
class StationaryDist:
    q: np.ndarray
    method: Method
    residual: float
    horizon: int | None = None


def stationarity_residual(q: np.ndarray, chain: RestartChain) -> float:
    """L1 norm of ``q - q P~``."""
    pt = restart_kernel(chain).matrix
    return float(np.abs(q - q @ pt).sum())


def invariant_series(chain: RestartChain, tol: float = 1e-13) -> StationaryDist:
    """Sum ``p (1-p)^t nu P^t`` until the geometric weight drops below ``tol``.

    The truncated sum is missing mass ``(1-p)^(T+1)``; it is renormalized
    rather than extrapolated.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = chain.p
    horizon = max(0, math.ceil(math.log(tol) / math.log1p(-p)))
    pm = chain.kernel.matrix
    mu = chain.nu.copy()
    q = p * mu
    w = p
    for _ in range(horizon):
        mu = mu @ pm
        w *= 1.0 - p
        q += w * mu
    q /= q.sum()
    return StationaryDist(q, Method.SERIES, stationarity_residual(q, chain), horizon)


def invariant_stationary(chain: RestartChain) -> StationaryDist:
    """Solve ``q = q P~`` with ``sum(q) = 1`` by a dense direct solve.

    One balance equation is replaced by the normalization; the system is
    nonsingular because the restarted chain has a unique invariant law.
    """
    n = chain.n
    pt = restart_kernel(chain).matrix
    a = pt.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    if log.isEnabledFor(logging.DEBUG):
        log.debug("rank(P~^T - I) = %d of %d", np.linalg.matrix_rank(pt.T - np.eye(n)), n)
    q = np.linalg.solve(a, b)
    q = np.where((q < 0) & (q > -1e-12), 0.0, q)
    q /= q.sum()
    res = float(np.abs(q - q @ pt).sum())
    if not res <= RESIDUAL_TOL or np.any(q < 0):
        raise SolverFailure("stationarity solve", res, RESIDUAL_TOL)
    return StationaryDist(q, Method.STATIONARITY, res)


def q_mass(q, H: TargetSet) -> float:
    qv = np.asarray(getattr(q, "q", q), dtype=float)
    return float(qv[list(H.indices)].sum())


def target_reachable(kernel: FiniteKernel, nu, H: TargetSet) -> bool:
    """Whether ``sum_t (nu P^t)(H) > 0``, i.e. ``H`` is reachable from the support of ``nu``.

    Decided by breadth-first search on the transition graph, so the answer is
    exact regardless of how small the probabilities involved are.
    """
    adj = kernel.matrix > 0
    seen = np.asarray(nu) > 0
    queue = deque(np.flatnonzero(seen))
    target = H.mask
    while queue:
        x = queue.popleft()
        if target[x]:
            return True
        for y in np.flatnonzero(adj[x] & ~seen):
            seen[y] = True
            queue.append(y)
    return False
