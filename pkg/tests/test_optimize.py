import math

import numpy as np
import pytest

from chains import random_chain, unreachable_chain
from restart_hit import (
    InfeasibleTarget,
    RestartChain,
    TargetSet,
    dv_dp_fd,
    hitting_time,
    minimize_p,
    v_at_one,
    v_at_zero,
    v_curve,
    validate_kernel,
)
from restart_hit import examples as ex
from restart_hit.optimize import evaluate, golden_section, v_at_zero_all


def absorbing_walk_expectation(P, H, horizon=20000):
    """Sum of taboo survival masses without discounting (converges when hitting is sure)."""
    off = ~H.mask
    Q = P * off[None, :] * off[:, None]
    m = off.astype(float)
    total = m.copy()
    for _ in range(horizon):
        m = Q @ m
        total += m
    return total


class TestBoundaries:
    def test_v_at_zero_examples(self, two_state, stuck):
        k, _, H = two_state
        assert v_at_zero(k, H, 0) == 1.0
        assert v_at_zero(k, H, 1) == 0.0
        k, _, H = stuck
        assert v_at_zero(k, H, 0) == math.inf

    def test_v_at_zero_partial_absorption(self):
        # state 0 splits between the target and a trap; state 3 leads only to the target
        P = np.array([[0, 0.5, 0.5, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0.5, 0.5]])
        k = validate_kernel(P)
        H = TargetSet.of([2], 4)
        v = v_at_zero_all(k, H)
        assert v[0] == math.inf and v[1] == math.inf and v[2] == 0
        assert v[3] == pytest.approx(2.0)

    def test_v_at_zero_against_survival_sum(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            P = rng.random((6, 6)) + 0.05
            P /= P.sum(axis=1, keepdims=True)
            H = TargetSet.of([0], 6)
            np.testing.assert_allclose(v_at_zero_all(validate_kernel(P), H), absorbing_walk_expectation(P, H), rtol=1e-9)

    def test_v_at_one(self):
        H = TargetSet.of([1], 3)
        assert v_at_one(np.ones(3) / 3, H, 0) == pytest.approx(3.0)
        assert v_at_one([1, 0, 0], H, 0) == math.inf
        assert v_at_one([1, 0, 0], H, 1) == 0.0


class TestCurve:
    def test_increasing_curve(self, two_state):
        k, nu, H = two_state
        c = v_curve(k, nu, H, 0, [0, 0.5, 1])
        np.testing.assert_allclose(c.values, [1, 2, math.inf])

    def test_decreasing_curve(self, restart_into_target):
        k, nu, H = restart_into_target
        c = v_curve(k, nu, H, 0, [1, 0.5, 0])
        np.testing.assert_array_equal(c.p, [0, 0.5, 1])
        np.testing.assert_allclose(c.values, [math.inf, 2, 1])

    def test_refinement_shrinks_jumps(self):
        chain, H = random_chain(np.random.default_rng(5), n_max=8)
        jumps = []
        for m in (11, 101, 1001):
            c = v_curve(chain.kernel, chain.nu, H, "max", np.linspace(0.05, 0.95, m))
            jumps.append(np.max(np.abs(np.diff(c.values))))
        assert jumps[0] > jumps[1] > jumps[2]
        assert jumps[2] < 1e-3 * np.max(c.values)

    def test_aggregates(self):
        chain, H = random_chain(np.random.default_rng(6), n_max=8)
        v = hitting_time(chain, H).v
        assert evaluate(chain.kernel, chain.nu, H, "max", chain.p) == pytest.approx(v.max())
        assert evaluate(chain.kernel, chain.nu, H, "nu-avg", chain.p) == pytest.approx(v @ chain.nu)

    def test_finite_for_every_interior_p_when_feasible(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            chain, H = random_chain(rng, n_max=10)
            c = v_curve(chain.kernel, chain.nu, H, "max", np.linspace(0.01, 0.99, 25))
            assert np.all(np.isfinite(c.values))


class TestMinimize:
    def test_increasing_prefers_no_restart(self, two_state):
        k, nu, H = two_state
        res = minimize_p(k, nu, H, 0)
        assert res.p_opt == 0.0 and res.value == 1.0

    def test_decreasing_prefers_full_restart(self, restart_into_target):
        k, nu, H = restart_into_target
        res = minimize_p(k, nu, H, 0)
        assert res.p_opt == 1.0 and res.value == 1.0

    def test_infeasible(self, stuck):
        k, nu, H = stuck
        with pytest.raises(InfeasibleTarget):
            minimize_p(k, nu, H, 0)
        chain, H = unreachable_chain(np.random.default_rng(1))
        with pytest.raises(InfeasibleTarget):
            minimize_p(chain.kernel, chain.nu, H, "max")

    def test_lattice_far_state_matches_cubic_root(self):
        k, H, nu = ex.lattice_truncate(ex.LatticeParams(10, 0.019), 400, tail_tol=1.0)
        res = minimize_p(k, nu, H, "max")
        assert res.p_opt == pytest.approx(ex.lattice_p_opt(10), abs=1e-5)

    def test_never_worse_than_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            chain, H = random_chain(rng, n_max=8)
            for obj in ("max", "nu-avg", int(np.flatnonzero(~H.mask)[0])):
                res = minimize_p(chain.kernel, chain.nu, H, obj, grid=16)
                grid_vals = [evaluate(chain.kernel, chain.nu, H, obj, p) for p in np.linspace(0, 1, 16)]
                assert res.value <= min(grid_vals) + 1e-9
                assert 0 <= res.p_opt <= 1

    def test_golden_section_quadratic(self):
        x, fx, width, n = golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-10)
        assert x == pytest.approx(0.3, abs=1e-9) and width <= 1e-10


class TestDerivative:
    def test_increasing_case(self, two_state):
        k, nu, H = two_state
        assert dv_dp_fd(k, nu, H, 0, 0.5, 1e-4) == pytest.approx(4.0, abs=1e-6)

    def test_decreasing_case(self, restart_into_target):
        k, nu, H = restart_into_target
        assert dv_dp_fd(k, nu, H, 0, 0.5, 1e-4) == pytest.approx(-4.0, abs=1e-6)

    def test_rejects_boundary(self, two_state):
        k, nu, H = two_state
        with pytest.raises(ValueError):
            dv_dp_fd(k, nu, H, 0, 0.01, 0.02)


def test_limit_at_zero_divides_by_reach_probability():
    """Restarts into a trap: V(x, p) -> V(x, 0) / P_nu(hit) as p -> 0, here 1 / 0.5."""
    k = validate_kernel([[1, 0, 0], [0, 1, 0], [0, 1, 0]])
    nu = np.array([0.5, 0.0, 0.5])
    H = TargetSet.of([1], 3)
    assert v_at_zero(k, H, 2) == 1.0
    for p in (1e-3, 1e-6):
        assert evaluate(k, nu, H, 2, p) == pytest.approx(1 / (0.5 - p / 2), rel=1e-8)
    assert v_curve(k, nu, H, 2, [0.0]).values[0] == 1.0
