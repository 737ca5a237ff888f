"""Dependence of the expected hitting time on the restart probability.

Interior values ``0 < p < 1`` come from :func:`restart_hit.hitting.hitting_time`;
``p = 0`` (no restart) and ``p = 1`` (restart at every step) use dedicated
closed forms because :class:`RestartChain` only admits the open interval.

An objective selects what is minimized: a state index, ``"max"`` (worst
starting state) or ``"nu-avg"`` (start drawn from the restart law).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import InfeasibleTarget, KernelError
from .hitting import ext_div, hitting_time
from .kernel import FiniteKernel, RestartChain, TargetSet, taboo_kernel, validate_distribution
from .stationary import target_reachable

Objective = Union[int, str]
AGGREGATES = ("max", "nu-avg")
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class PCurve:
    x: Objective
    p: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class OptResult:
    p_opt: float
    value: float
    bracket: float
    evaluations: int


def _almost_sure_hit(kernel: FiniteKernel, H: TargetSet) -> np.ndarray:
    """Mask of states from which ``P`` enters ``H`` with probability one."""
    n = kernel.n
    adj = kernel.matrix > 0
    target = H.mask
    # states that can reach H at all (reverse search from H)
    can = target.copy()
    queue = deque(np.flatnonzero(target))
    while queue:
        y = queue.popleft()
        for x in np.flatnonzero(adj[:, y] & ~can):
            can[x] = True
            queue.append(x)
    # states that can reach a dead state (one that never reaches H) while avoiding H
    doomed = ~can
    queue = deque(np.flatnonzero(doomed))
    while queue:
        y = queue.popleft()
        for x in np.flatnonzero(adj[:, y] & ~doomed & ~target):
            doomed[x] = True
            queue.append(x)
    return ~doomed | target


def v_at_zero_all(kernel: FiniteKernel, H: TargetSet) -> np.ndarray:
    """Expected hitting time of ``H`` without restart, for every start state."""
    sure = _almost_sure_hit(kernel, H)
    v = np.where(sure, 0.0, math.inf)
    idx = np.flatnonzero(sure & ~H.mask)
    if idx.size:
        q = taboo_kernel(kernel, H)[np.ix_(idx, idx)]
        v[idx] = np.linalg.solve(np.eye(idx.size) - q, np.ones(idx.size))
    return v


def v_at_zero(kernel: FiniteKernel, H: TargetSet, x: int) -> float:
    return float(v_at_zero_all(kernel, H)[x])


def v_at_one_all(nu, H: TargetSet) -> np.ndarray:
    nu = np.asarray(nu, dtype=float)
    off = ext_div(1.0, float(nu[list(H.indices)].sum()))
    return np.where(H.mask, 0.0, off)


def v_at_one(nu, H: TargetSet, x: int) -> float:
    """``1 / nu(H)`` off the target (infinite when ``nu(H) = 0``), zero on it."""
    return float(v_at_one_all(nu, H)[x])


def reduce_objective(v: np.ndarray, nu: np.ndarray, x: Objective) -> float:
    if x == "max":
        return float(np.max(v))
    if x == "nu-avg":
        support = nu > 0
        vs = v[support]
        if np.any(np.isinf(vs)):
            return math.inf
        return float(vs @ nu[support])
    return float(v[int(x)])


def _check_objective(x: Objective, n: int) -> None:
    if isinstance(x, str):
        if x not in AGGREGATES:
            raise KernelError(f"unknown objective {x!r}; expected a state index or one of {AGGREGATES}")
    elif not 0 <= int(x) < n:
        raise KernelError(f"state {x} out of range for {n} states")


def evaluate(kernel: FiniteKernel, nu, H: TargetSet, x: Objective, p: float) -> float:
    """Objective value at a single restart probability ``p`` in ``[0, 1]``."""
    nu = np.asarray(nu, dtype=float)
    if p == 0.0:
        v = v_at_zero_all(kernel, H)
    elif p == 1.0:
        v = v_at_one_all(nu, H)
    elif 0.0 < p < 1.0:
        v = hitting_time(RestartChain(kernel, nu, p), H).v
    else:
        raise ValueError(f"p = {p!r} outside [0, 1]")
    return reduce_objective(v, nu, x)


def v_curve(kernel: FiniteKernel, nu, H: TargetSet, x: Objective, grid) -> PCurve:
    nu = validate_distribution(nu, kernel.n)
    _check_objective(x, kernel.n)
    ps = np.asarray(sorted(set(float(g) for g in grid)))
    if ps.size and (ps[0] < 0 or ps[-1] > 1):
        raise ValueError("grid must lie in [0, 1]")
    vals = np.array([evaluate(kernel, nu, H, x, p) for p in ps])
    return PCurve(x, ps, vals)


def golden_section(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-8):
    """Golden-section search on ``(lo, hi)`` without evaluating the endpoints.

    Returns ``(x_best, f_best, width, evaluations)`` where ``x_best`` is the
    best point evaluated (ties go to the smaller abscissa). Objective values
    may be ``inf``.
    """
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    best = min((fc, c), (fd, d))
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
        evals += 1
    return best[1], best[0], b - a, evals


def minimize_p(
    kernel: FiniteKernel,
    nu,
    H: TargetSet,
    x: Objective,
    grid: int = 64,
    xtol: float = 1e-8,
) -> OptResult:
    """Minimize the objective over ``p`` in ``[0, 1]``.

    A uniform grid (endpoints included) locates the best cell, then golden
    section refines inside the neighbouring cells. Unimodality is not
    assumed; the result is never worse than the best grid point, and ties go
    to the smaller ``p``.
    """
    nu = validate_distribution(nu, kernel.n)
    _check_objective(x, kernel.n)
    if grid < 3:
        raise ValueError("grid needs at least 3 points")
    if not target_reachable(kernel, nu, H):
        raise InfeasibleTarget()
    ps = np.linspace(0.0, 1.0, grid)
    vals = np.array([evaluate(kernel, nu, H, x, p) for p in ps])
    i = int(np.argmin(vals))
    lo, hi = ps[max(i - 1, 0)], ps[min(i + 1, grid - 1)]
    pg, vg, width, evals = golden_section(lambda p: evaluate(kernel, nu, H, x, p), lo, hi, xtol)
    best = min((vals[i], ps[i]), (vg, pg))
    return OptResult(float(best[1]), float(best[0]), float(width), grid + evals)


def dv_dp_fd(kernel: FiniteKernel, nu, H: TargetSet, x: Objective, p: float, h: float = 1e-4) -> float:
    """Central difference of the objective in ``p``; needs ``0 < p - h < p + h < 1``."""
    if not 0.0 < p - h < p + h < 1.0:
        raise ValueError("p +/- h must stay inside (0, 1)")
    nu = np.asarray(nu, dtype=float)
    return (evaluate(kernel, nu, H, x, p + h) - evaluate(kernel, nu, H, x, p - h)) / (2.0 * h)
