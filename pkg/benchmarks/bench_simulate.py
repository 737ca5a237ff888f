"""Compare the compiled and pure numpy Monte Carlo backends.

Usage: python benchmarks/bench_simulate.py [--replicas N] [--repeat R]
"""

import argparse
import time

import numpy as np

from restart_hit import examples as ex
from restart_hit import simulate as sim
from restart_hit.kernel import RestartChain, TargetSet, validate_kernel


def ring_chain(n: int, p: float):
    P = np.zeros((n, n))
    for i in range(n):
        P[i, (i + 1) % n] = 0.5
        P[i, (i - 1) % n] = 0.5
    nu = np.zeros(n)
    nu[n // 2] = 1.0
    return RestartChain(validate_kernel(P), nu, p), TargetSet.of([0], n)


def cases(replicas: int):
    chain, H = ring_chain(16, 0.05)
    prm = ex.ExpLineParams(1.0, 0.0, 1.0, -2.0, 0.29289)
    return [
        ("chain ring16", lambda be: sim.sample_hitting_time(chain, H, 8, n=replicas, threads=1, backend=be)),
        ("lattice r=3", lambda be: sim.sample_lattice_hitting(3, 0.2, 3, n=replicas, threads=1, backend=be)),
        ("expline", lambda be: sim.sample_expline_hitting(prm.mu, prm.a, prm.b, prm.r, prm.p, 2.0,
                                                         n=replicas, threads=1, backend=be)),
        ("occupation", lambda be: sim.empirical_stationary(chain, samples=replicas * 10, backend=be)),
    ]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicas", type=int, default=50_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if sim._core is None:
        raise SystemExit("compiled backend not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'case':<14} {'cython s':>10} {'python s':>10} {'speedup':>8}  identical")
    for name, fn in cases(args.replicas):
        fast = best_of(lambda: fn("cython"), args.repeat)
        slow = best_of(lambda: fn("python"), args.repeat)
        a, b = fn("cython"), fn("python")
        same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
        print(f"{name:<14} {fast:>10.4f} {slow:>10.4f} {slow / fast:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
