"""Monte Carlo oracle for hitting times and occupation frequencies.

Replicas are split into fixed-size blocks that workers process in any
order; each replica draws from its own counter-based stream keyed by
``(seed, replica index)``. Block results are exact integer sums, so the
merged statistics are bit-identical for any thread count or backend.

The compiled backend (``_core``) is used when it was built; set
``RESTART_HIT_PURE=1`` to force the numpy fallback.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import ModuleType

import numpy as np

from . import _fallback
from .kernel import RestartChain, TargetSet

try:
    if os.environ.get("RESTART_HIT_PURE"):
        raise ImportError("pure backend requested")
    from . import _core
except ImportError:
    _core = None

BACKEND = "cython" if _core is not None else "python"
BLOCK = 4096
DEFAULT_CAP = 10_000_000
Z95 = 1.96


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = BACKEND
    if name == "cython":
        if _core is None:
            raise RuntimeError("compiled backend not available; build the extension first")
        return _core
    if name == "python":
        return _fallback
    raise ValueError(f"unknown backend {name!r}")


def default_threads() -> int:
    env = os.environ.get("RESTART_HIT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SampleStats:
    """Summary of ``n`` replicas; ``truncated > 0`` makes ``mean`` a lower bound."""

    n: int
    mean: float
    stderr: float
    ci95: tuple[float, float]
    truncated: int

    @classmethod
    def from_sums(cls, n: int, total: int, total_sq: int, truncated: int) -> "SampleStats":
        mean = total / n
        if n > 1:
            # n * sum(x^2) - sum(x)^2 is exact in integers
            var = (n * total_sq - total * total) / (n * (n - 1))
            stderr = math.sqrt(var / n)
        else:
            stderr = 0.0
        return cls(n, mean, stderr, (mean - Z95 * stderr, mean + Z95 * stderr), truncated)

    def zscore(self, value: float) -> float:
        diff = abs(self.mean - value)
        if self.stderr == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / self.stderr


def _run_blocks(job, n: int, cap: int, threads: int | None) -> SampleStats:
    if n < 1 or cap < 1:
        raise ValueError("need n >= 1 and cap >= 1")
    starts = range(0, n, BLOCK)

    def block(first: int):
        steps = job(first, min(BLOCK, n - first))
        trunc = steps < 0
        steps = np.where(trunc, cap, steps)
        return int(steps.sum()), int((steps * steps).sum()), int(trunc.sum())

    threads = threads or default_threads()
    if threads == 1 or len(starts) == 1:
        parts = [block(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    total = sum(t for t, _, _ in parts)
    total_sq = sum(s for _, s, _ in parts)
    trunc = sum(c for _, _, c in parts)
    return SampleStats.from_sums(n, total, total_sq, trunc)


def _cdf(rows: np.ndarray) -> np.ndarray:
    """Row-wise CDFs padded with 2.0 from the last positive atom onwards."""
    rows = np.atleast_2d(rows)
    cdf = np.cumsum(rows, axis=1)
    for i, row in enumerate(rows):
        last = np.flatnonzero(row > 0)[-1]
        cdf[i, last:] = 2.0
    return np.ascontiguousarray(cdf)


def _chain_tables(chain: RestartChain):
    return _cdf(chain.kernel.matrix), _cdf(chain.nu)[0]


def sample_hitting_time(
    chain: RestartChain,
    H: TargetSet,
    x: int,
    n: int = 100_000,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
    threads: int | None = None,
    backend: str | None = None,
) -> SampleStats:
    be = get_backend(backend)
    cdf_p, cdf_nu = _chain_tables(chain)
    in_h = H.mask.astype(np.uint8)
    return _run_blocks(
        lambda first, count: be.chain_hitting(cdf_p, cdf_nu, in_h, chain.p, int(x), seed, first, count, cap),
        n, cap, threads,
    )


def empirical_stationary(
    chain: RestartChain,
    burn_in: int = 1000,
    samples: int = 1_000_000,
    seed: int = 0,
    x0: int = 0,
    backend: str | None = None,
) -> np.ndarray:
    """Occupation frequencies of one trajectory after ``burn_in`` steps."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    be = get_backend(backend)
    cdf_p, cdf_nu = _chain_tables(chain)
    counts = be.chain_occupation(cdf_p, cdf_nu, chain.p, int(x0), seed, int(burn_in), int(samples))
    return counts / samples


def sample_expline_hitting(
    mu: float, a: float, b: float, r: float, p: float, x0: float,
    n: int = 100_000, cap: int = DEFAULT_CAP, seed: int = 0,
    threads: int | None = None, backend: str | None = None,
) -> SampleStats:
    if not a < b or not mu > 0:
        raise ValueError("need a < b and mu > 0")
    be = get_backend(backend)
    return _run_blocks(
        lambda first, count: be.expline_hitting(mu, a, b, r, p, x0, seed, first, count, cap),
        n, cap, threads,
    )


def sample_lattice_hitting(
    r: int, p: float, k0: int,
    n: int = 100_000, cap: int = DEFAULT_CAP, seed: int = 0,
    threads: int | None = None, backend: str | None = None,
) -> SampleStats:
    if r < 1:
        raise ValueError("restart node must be positive")
    be = get_backend(backend)
    return _run_blocks(
        lambda first, count: be.lattice_hitting(int(r), p, int(k0), seed, first, count, cap),
        n, cap, threads,
    )
