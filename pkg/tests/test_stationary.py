import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chains import random_chain, unreachable_chain
from restart_hit import (
    RestartChain,
    SolverFailure,
    TargetSet,
    invariant_series,
    invariant_stationary,
    q_mass,
    restart_kernel,
    target_reachable,
    validate_kernel,
)
from restart_hit.stationary import Method

SHIFT = np.roll(np.eye(3), 1, axis=1)


def series_by_hand(P, nu, p, terms=3000):
    """Direct summation of p (1-p)^t nu P^t with explicit matrix powers."""
    q = np.zeros(len(nu))
    Pt = np.eye(len(nu))
    for t in range(terms):
        q += p * (1 - p) ** t * (nu @ Pt)
        Pt = Pt @ P
    return q


CASES = [
    (SHIFT, np.ones(3) / 3, 0.5, np.ones(3) / 3),
    (np.array([[0.0, 1], [0, 1]]), np.array([1.0, 0]), 0.3, np.array([0.3, 0.7])),
    (np.eye(2), np.array([1.0, 0]), 0.6, np.array([1.0, 0])),
]


@pytest.mark.parametrize("P,nu,p,expected", CASES)
def test_examples_both_methods(P, nu, p, expected):
    chain = RestartChain(validate_kernel(P), nu, p)
    np.testing.assert_allclose(series_by_hand(P, nu, p), expected, atol=1e-12)
    s = invariant_series(chain)
    d = invariant_stationary(chain)
    assert s.method is Method.SERIES and d.method is Method.STATIONARITY
    np.testing.assert_allclose(s.q, expected, atol=1e-12)
    assert np.abs(s.q - d.q).sum() <= 1e-10
    assert s.residual <= 1e-10 and d.residual <= 1e-10


def test_two_state_q_is_p_one_minus_p():
    for p in (0.1, 0.5, 0.9):
        chain = RestartChain(validate_kernel([[0, 1], [0, 1]]), [1, 0], p)
        q = invariant_series(chain)
        np.testing.assert_allclose(q.q, [p, 1 - p], atol=1e-12)
        assert q_mass(q, TargetSet.of([1], 2)) == pytest.approx(1 - p)
        assert q_mass(q, TargetSet.of([0, 1], 2)) == pytest.approx(1.0)


def test_absorbing_restart_point():
    chain = RestartChain(validate_kernel(np.eye(2)), [0, 1], 0.3)
    np.testing.assert_allclose(invariant_stationary(chain).q, [0, 1], atol=1e-15)
    assert q_mass(invariant_series(RestartChain(validate_kernel(np.eye(2)), [1, 0], 0.3)), TargetSet.of([1], 2)) == 0


def test_random_ten_state_residual():
    chain, _ = random_chain(np.random.default_rng(10), n_max=10, reachable=False)
    assert invariant_stationary(chain).residual <= 1e-10


def test_solver_failure_on_bad_residual(monkeypatch):
    chain = RestartChain(validate_kernel(SHIFT), np.ones(3) / 3, 0.5)
    monkeypatch.setattr(np.linalg, "solve", lambda a, b: np.array([0.5, 0.25, 0.25]))
    with pytest.raises(SolverFailure):
        invariant_stationary(chain)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_methods_agree_and_dominate_restart_law(seed):
    chain, H = random_chain(np.random.default_rng(seed), n_max=50, reachable=False)
    s, d = invariant_series(chain), invariant_stationary(chain)
    assert np.abs(s.q - d.q).sum() <= 1e-8
    assert s.residual <= 1e-10 and d.residual <= 1e-10
    assert np.all(s.q >= chain.p * chain.nu * (1 - 1e-12))
    pt = restart_kernel(chain).matrix
    assert np.abs(d.q @ pt - d.q).sum() <= 1e-10


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_reachability_matches_target_mass(seed, constructed):
    rng = np.random.default_rng(seed)
    chain, H = unreachable_chain(rng) if constructed else random_chain(rng, reachable=False)
    reach = target_reachable(chain.kernel, chain.nu, H)
    assert reach == (q_mass(invariant_series(chain), H) > 0)
    if constructed:
        assert not reach
