"""Pure numpy versions of the ``_core`` kernels.

Replicas advance in lockstep, one vectorized step at a time, using the same
counter-based SplitMix64 draws as the compiled kernels, so both backends
produce identical step counts for discrete models.
"""

from __future__ import annotations

import bisect

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
C1 = np.uint64(0xBF58476D1CE4E5B9)
C2 = np.uint64(0x94D049BB133111EB)
S30, S27, S31, S11 = (np.uint64(s) for s in (30, 27, 31, 11))
TWO_M53 = 2.0**-53


def mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> S30)) * C1
    z = (z ^ (z >> S27)) * C2
    return z ^ (z >> S31)


def stream_keys(seed: int, first: int, count: int) -> np.ndarray:
    base = int(mix64(np.array([seed & MASK], dtype=np.uint64))[0])
    idx = np.arange(first + 1, first + count + 1, dtype=np.uint64)
    return mix64(np.uint64(base) + idx * np.uint64(GAMMA))


def uniforms(keys: np.ndarray, j: int) -> np.ndarray:
    off = np.uint64(((j + 1) * GAMMA) & MASK)
    return (mix64(keys + off) >> S11).astype(np.float64) * TWO_M53


def _pick_rows(cdf_p: np.ndarray, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    # first column with u < cdf[row, col]
    return (cdf_p[x] <= u[:, None]).sum(axis=1)


def chain_hitting(cdf_p, cdf_nu, in_h, p, x0, seed, first, count, cap):
    in_h = np.asarray(in_h, dtype=bool)
    out = np.full(count, -1, dtype=np.int64)
    if in_h[x0]:
        out[:] = 0
        return out
    keys = stream_keys(seed, first, count)
    live = np.arange(count)
    x = np.full(count, x0, dtype=np.int64)
    for step in range(cap):
        if live.size == 0:
            break
        k = keys[live]
        restart = uniforms(k, 2 * step) < p
        u = uniforms(k, 2 * step + 1)
        nxt = np.where(
            restart,
            np.searchsorted(cdf_nu, u, side="right"),
            _pick_rows(cdf_p, x[live], u),
        )
        x[live] = nxt
        hit = in_h[nxt]
        out[live[hit]] = step + 1
        live = live[~hit]
    return out


def lattice_hitting(r, p, k0, seed, first, count, cap):
    out = np.full(count, -1, dtype=np.int64)
    if k0 == 0:
        out[:] = 0
        return out
    keys = stream_keys(seed, first, count)
    live = np.arange(count)
    k = np.full(count, k0, dtype=np.int64)
    for step in range(cap):
        if live.size == 0:
            break
        kk = keys[live]
        restart = uniforms(kk, 2 * step) < p
        down = uniforms(kk, 2 * step + 1) < 0.5
        nxt = np.where(restart, r, k[live] + np.where(down, -1, 1))
        k[live] = nxt
        hit = nxt == 0
        out[live[hit]] = step + 1
        live = live[~hit]
    return out


def expline_hitting(mu, a, b, r, p, x0, seed, first, count, cap):
    out = np.full(count, -1, dtype=np.int64)
    if a <= x0 <= b:
        out[:] = 0
        return out
    keys = stream_keys(seed, first, count)
    live = np.arange(count)
    x = np.full(count, float(x0))
    for step in range(cap):
        if live.size == 0:
            break
        kk = keys[live]
        restart = uniforms(kk, 2 * step) < p
        jump = -np.log1p(-uniforms(kk, 2 * step + 1)) / mu
        nxt = np.where(restart, r, x[live] + jump)
        x[live] = nxt
        hit = (a <= nxt) & (nxt <= b)
        out[live[hit]] = step + 1
        live = live[~hit]
    return out


def chain_occupation(cdf_p, cdf_nu, p, x0, seed, burn_in, samples):
    n = cdf_p.shape[0]
    key = stream_keys(seed, 0, 1)
    total = burn_in + samples
    counts = np.zeros(n, dtype=np.int64)
    rows = [list(row) for row in np.asarray(cdf_p)]
    nu_row = list(cdf_nu)
    x = int(x0)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        j = np.arange(2 * start, 2 * stop, dtype=np.uint64)
        z = mix64(key[0] + (j + np.uint64(1)) * np.uint64(GAMMA))
        u = ((z >> S11).astype(np.float64) * TWO_M53).reshape(-1, 2)
        restart = (u[:, 0] < p).tolist()
        moves = u[:, 1].tolist()
        for s in range(stop - start):
            row = nu_row if restart[s] else rows[x]
            x = bisect.bisect_right(row, moves[s])
            if start + s >= burn_in:
                counts[x] += 1
    return counts
