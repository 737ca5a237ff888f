"""Closed forms for two analytic restart models.

``expline``: a walk on the real line moving right by i.i.d. Exp(mu) steps,
restarted to a point ``r`` and searching for the interval ``[a, b]``.

``lattice``: the symmetric +/-1 walk on the integers searching for node 0,
restarted to node ``r > 0``. Everything here depends on ``alpha1(p)``, the
root in (0, 1) of ``alpha = (1-p)/2 * (1 + alpha^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import BoundaryTooClose
from .kernel import FiniteKernel, TargetSet, validate_kernel


@dataclass(frozen=True)
class ExpLineParams:
    mu: float
    a: float
    b: float
    r: float
    p: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if not self.mu > 0:
            raise ValueError("need mu > 0")
        if not 0 < self.p < 1:
            raise ValueError("need 0 < p < 1")

    @property
    def land_prob(self) -> float:
        """``1 - exp(-mu (b - a))``: chance the first position at or beyond ``a`` lies in ``[a, b]``."""
        return -math.expm1(-self.mu * (self.b - self.a))


@dataclass(frozen=True)
class LatticeParams:
    r: int
    p: float

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("restart node r must be a positive integer")
        if not 0 < self.p < 1:
            raise ValueError("need 0 < p < 1")


def expline_v1(params: ExpLineParams, x: float) -> float:
    p, mu = params.p, params.mu
    if params.a <= x <= params.b:
        return 0.0
    if x > params.b:
        return 1.0 / p
    return 1.0 / p - (1.0 - p) / p * params.land_prob * math.exp(-mu * (params.a - x) * p)


def expline_v(params: ExpLineParams, x: float) -> float:
    """Expected hitting time of ``[a, b]`` with point restart at ``r < a``."""
    p, mu = params.p, params.mu
    if not params.r < params.a:
        raise ValueError("point-restart formula needs r < a")
    if params.a <= x <= params.b:
        return 0.0
    denom = p * (1.0 - p) * params.land_prob * math.exp(-mu * (params.a - params.r) * p)
    if x > params.b:
        return 1.0 / denom
    return (1.0 - (1.0 - p) * params.land_prob * math.exp(-mu * (params.a - x) * p)) / denom


def expline_p_opt(mu: float, gap: float) -> float:
    """Optimal restart probability for starts right of the interval; ``gap = a - r``."""
    if gap < 0:
        raise ValueError("gap = a - r must be nonnegative")
    s = mu * gap
    return 2.0 / (2.0 + s + math.sqrt(4.0 + s * s))


def expline_p_opt_asymptotic(mu: float, gap: float) -> float:
    return 1.0 / (1.0 + mu * gap)


def lattice_alpha1(p):
    """Minimal root of the characteristic equation (vectorizes over ``p``).

    Uses ``(1-p) / (1 + sqrt(p (2-p)))``, the rationalized form of
    ``(1 - sqrt(1 - (1-p)^2)) / (1-p)``, which avoids cancellation as ``p -> 1``.
    """
    p = np.asarray(p, dtype=float)
    out = (1.0 - p) / (1.0 + np.sqrt(p * (2.0 - p)))
    return float(out) if out.ndim == 0 else out


def lattice_v1(params: LatticeParams, k: int) -> float:
    return (1.0 - lattice_alpha1(params.p) ** abs(k)) / params.p


def lattice_v(params: LatticeParams, k: int) -> float:
    al = lattice_alpha1(params.p)
    return (1.0 - al ** abs(k)) / (params.p * al**params.r)


def lattice_v_far(params: LatticeParams) -> float:
    """Limit of the hitting time as the start node goes to infinity."""
    return 1.0 / (params.p * lattice_alpha1(params.p) ** params.r)


def lattice_cubic(p: float, r: int) -> float:
    return (1.0 - p) ** 2 * (2.0 - p) / r**2 - p


def lattice_p_opt(r: int) -> float:
    """Unique root in (0, 1) of ``(1-p)^2 (2-p) / r^2 = p``, by bisection."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return bisect(lattice_cubic, 0.0, 1.0, args=(r,), xtol=1e-16, maxiter=200)


def lattice_p_opt_series(r: int) -> float:
    return 2.0 / r**2 - 10.0 / r**4


def lattice_truncate(
    params: LatticeParams,
    n: int,
    k_max: int | None = None,
    tail_tol: float = 1e-10,
) -> tuple[FiniteKernel, TargetSet, np.ndarray]:
    """Finite chain on ``{0..n}`` for the distance ``|X_t|`` of the lattice walk from 0.

    State 0 steps to 1 (the walk is symmetric, so ``|X|`` is Markov); state
    ``n`` sends its outward step back onto itself. Returns the kernel, the
    target ``{0}`` and the restart vector ``delta_r``. The discarded tail is
    bounded by ``alpha1^(n - r - k_max)``; :class:`BoundaryTooClose` is raised
    when that exceeds ``tail_tol``.
    """
    r = int(params.r)
    k_max = r if k_max is None else int(k_max)
    if n <= max(r, k_max):
        raise BoundaryTooClose(n, 1.0, tail_tol)
    tail = lattice_alpha1(params.p) ** (n - r - k_max)
    if tail > tail_tol:
        raise BoundaryTooClose(n, tail, tail_tol)
    m = np.zeros((n + 1, n + 1))
    m[0, 1] = 1.0
    k = np.arange(1, n)
    m[k, k - 1] = 0.5
    m[k, k + 1] = 0.5
    m[n, n - 1] = 0.5
    m[n, n] = 0.5
    nu = np.zeros(n + 1)
    nu[r] = 1.0
    return validate_kernel(m), TargetSet.of([0], n + 1), nu
