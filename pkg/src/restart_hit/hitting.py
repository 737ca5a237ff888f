"""Expected hitting times of a restarted chain.

The primary route is a dense linear solve for the discounted taboo value
``V1`` followed by the closed-form ratio ``V = V1 / (1 - p <V1, nu>)``.
Two independent oracles are provided: the truncated series defining ``V1``
and plain value iteration on the first-step equations of ``V``.

Infinite expectations are returned as ``math.inf`` (IEEE +inf is the
extended-real value; no finite sentinel is ever used).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EquivalenceViolation, NonConverged, SolverFailure
from .kernel import RestartChain, TargetSet, taboo_kernel

DENOM_EPS = 1e-12
Q_EPS = 1e-12
RESIDUAL_TOL = 1e-10


def ext_div(c: float, d: float) -> float:
    """``c / d`` on ``[0, inf]`` with ``c / 0 = inf`` for ``c > 0`` and ``0 / 0 = 0``."""
    if d == 0.0:
        return math.inf if c > 0 else 0.0
    return c / d


@dataclass(frozen=True, eq=False)
class HittingSolution:
    v1: np.ndarray
    denom: float
    v: np.ndarray
    finite: bool


@dataclass(frozen=True)
class Classification:
    """Verdict plus the four raw finiteness statements.

    ``q_positive``: q(H) > 0; ``all_finite``: V < inf everywhere;
    ``finite_q_ae``: V < inf on the support of q; ``bounded``: sup V < inf.
    """

    finite: bool
    q_positive: bool
    all_finite: bool
    finite_q_ae: bool
    bounded: bool
    q_mass: float
    denom: float


def _off_target_block(chain: RestartChain, H: TargetSet):
    off = np.flatnonzero(~H.mask)
    q = taboo_kernel(chain.kernel, H)[np.ix_(off, off)]
    return off, q


def solve_v1(chain: RestartChain, H: TargetSet) -> np.ndarray:
    """Discounted taboo value: solves ``(I - (1-p) Q) w = 1`` off ``H``, zero on ``H``."""
    off, q = _off_target_block(chain, H)
    v1 = np.zeros(chain.n)
    if off.size == 0:
        return v1
    a = np.eye(off.size) - (1.0 - chain.p) * q
    w = np.linalg.solve(a, np.ones(off.size))
    res = float(np.max(np.abs(a @ w - 1.0)))
    if not res <= RESIDUAL_TOL:
        raise SolverFailure("V1 linear solve", res, RESIDUAL_TOL)
    v1[off] = w
    return v1


def series_horizon(p: float, tol: float) -> int:
    """Smallest ``T`` with ``(1-p)^T <= tol * p``, so the discarded tail is at most ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return max(0, math.ceil(math.log(tol * p) / math.log1p(-p)))


def v1_series(chain: RestartChain, H: TargetSet, tol: float = 1e-10) -> np.ndarray:
    """``V1`` as the truncated sum of discounted taboo survival masses."""
    q = taboo_kernel(chain.kernel, H)
    mass = (~H.mask).astype(float)
    total = mass.copy()
    disc = 1.0 - chain.p
    w = 1.0
    for _ in range(series_horizon(chain.p, tol)):
        mass = q @ mass
        w *= disc
        total += w * mass
    return total


def hitting_time(chain: RestartChain, H: TargetSet, eps_d: float = DENOM_EPS) -> HittingSolution:
    v1 = solve_v1(chain, H)
    denom = 1.0 - chain.p * float(v1 @ chain.nu)
    if denom > eps_d:
        return HittingSolution(v1, denom, v1 / denom, True)
    v = np.where(H.mask, 0.0, math.inf)
    return HittingSolution(v1, denom, v, False)


def value_iteration(
    chain: RestartChain,
    H: TargetSet,
    max_iter: int = 100_000,
    tol: float = 1e-10,
) -> tuple[np.ndarray, int]:
    """Iterate ``V <- 1 + p <V, nu> + (1-p) Q V`` from ``V = 0``.

    Stops at the first iterate whose sup-norm change is below ``tol`` and
    returns ``(V, iterations)``. Iterates must be nondecreasing; a decrease
    beyond rounding raises :class:`SolverFailure`. Raises
    :class:`NonConverged` carrying the last iterate after ``max_iter`` steps,
    which is the expected outcome when ``V`` is infinite.
    """
    if max_iter < 1 or tol <= 0:
        raise ValueError("max_iter must be >= 1 and tol > 0")
    off, q = _off_target_block(chain, H)
    v = np.zeros(chain.n)
    if off.size == 0:
        return v, 1
    m = (1.0 - chain.p) * q + chain.p * chain.nu[off][None, :]
    w = np.zeros(off.size)
    for it in range(1, max_iter + 1):
        nxt = 1.0 + m @ w
        step = nxt - w
        if np.any(step < -1e-12 * np.maximum(1.0, np.abs(w))):
            raise SolverFailure("value iteration monotonicity", float(-step.min()), 0.0)
        w = nxt
        if float(np.max(np.abs(step))) < tol:
            v[off] = w
            return v, it
    v[off] = w
    raise NonConverged(v, max_iter)


def classify(chain: RestartChain, H: TargetSet, q, eps_q: float = Q_EPS) -> Classification:
    """Evaluate the four equivalent finiteness statements independently.

    ``q`` is a :class:`~restart_hit.stationary.StationaryDist` (or plain
    probability vector) for the same chain. Raises
    :class:`EquivalenceViolation` if the statements disagree.
    """
    qv = np.asarray(getattr(q, "q", q), dtype=float)
    sol = hitting_time(chain, H)
    q_h = float(qv[list(H.indices)].sum())
    flags = dict(
        q_positive=q_h > eps_q,
        all_finite=bool(np.all(np.isfinite(sol.v))),
        finite_q_ae=bool(np.all(np.isfinite(sol.v[qv > eps_q]))),
        bounded=bool(np.max(sol.v) < math.inf),
    )
    if len(set(flags.values())) != 1:
        raise EquivalenceViolation(dict(flags, q_mass=q_h, denom=sol.denom))
    return Classification(finite=flags["q_positive"], q_mass=q_h, denom=sol.denom, **flags)
