import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chains import random_chain
from restart_hit import (
    KernelError,
    NegativeEntry,
    RestartChain,
    RowSumViolation,
    TargetSet,
    restart_kernel,
    taboo_kernel,
    taboo_power_mass,
    validate_kernel,
)


class TestValidateKernel:
    def test_valid(self):
        k = validate_kernel([[0, 1], [0, 1]])
        assert k.n == 2
        assert validate_kernel(np.eye(3)).n == 3

    def test_row_sum_violation_reports_row_and_deficit(self):
        with pytest.raises(RowSumViolation) as info:
            validate_kernel([[0.5, 0.5], [0.3, 0.6]])
        assert info.value.row == 1
        assert info.value.deviation == pytest.approx(0.1)

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry) as info:
            validate_kernel([[1.5, -0.5], [0, 1]])
        assert (info.value.row, info.value.col) == (0, 1)

    def test_substochastic_rejected(self):
        with pytest.raises(RowSumViolation):
            validate_kernel([[0.5, 0.4999], [0, 1]])

    @pytest.mark.parametrize("rows", [[[1, 0]], [], [[np.nan, 1], [0, 1]]])
    def test_shape_and_finiteness(self, rows):
        with pytest.raises(KernelError):
            validate_kernel(rows)

    def test_immutable(self):
        k = validate_kernel(np.eye(2))
        with pytest.raises(ValueError):
            k.matrix[0, 0] = 0.5


class TestContainers:
    def test_target_set_sorted_dedup(self):
        H = TargetSet.of([3, 1, 3], 5)
        assert H.indices == (1, 3)
        assert list(H.mask) == [False, True, False, True, False]

    @pytest.mark.parametrize("idx", [[], [5], [-1]])
    def test_target_set_invalid(self, idx):
        with pytest.raises(KernelError):
            TargetSet.of(idx, 5)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_restart_probability_open_interval(self, p):
        with pytest.raises(KernelError):
            RestartChain(validate_kernel(np.eye(2)), [1, 0], p)

    def test_nu_must_be_distribution(self):
        with pytest.raises(KernelError):
            RestartChain(validate_kernel(np.eye(2)), [0.5, 0.4], 0.5)
        with pytest.raises(KernelError):
            RestartChain(validate_kernel(np.eye(2)), [1.5, -0.5], 0.5)


class TestRestartKernel:
    def test_identity(self):
        m = restart_kernel(RestartChain(validate_kernel(np.eye(2)), [1, 0], 0.5)).matrix
        np.testing.assert_array_equal(m, [[1, 0], [0.5, 0.5]])

    def test_cyclic_shift(self):
        shift = np.roll(np.eye(3), 1, axis=1)
        m = restart_kernel(RestartChain(validate_kernel(shift), np.ones(3) / 3, 0.5)).matrix
        np.testing.assert_allclose(m, 0.5 / 3 + 0.5 * shift, atol=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_rows_sum_to_one(self, seed):
        chain, _ = random_chain(np.random.default_rng(seed), reachable=False)
        m = restart_kernel(chain).matrix
        assert np.max(np.abs(m.sum(axis=1) - 1)) <= 1e-12


class TestTaboo:
    def test_all_mass_enters_target(self):
        q = taboo_kernel(validate_kernel([[0, 1], [0, 1]]), TargetSet.of([1], 2))
        np.testing.assert_array_equal(q, np.zeros((2, 2)))

    def test_identity(self):
        q = taboo_kernel(validate_kernel(np.eye(2)), TargetSet.of([1], 2))
        np.testing.assert_array_equal(q, [[1, 0], [0, 0]])

    def test_power_mass_examples(self):
        H = TargetSet.of([1], 2)
        q = taboo_kernel(validate_kernel(np.eye(2)), H)
        for t in (0, 1, 7):
            np.testing.assert_array_equal(taboo_power_mass(q, t, H), [1, 0])
        q = taboo_kernel(validate_kernel([[0, 1], [0, 1]]), H)
        np.testing.assert_array_equal(taboo_power_mass(q, 0, H), [1, 0])
        np.testing.assert_array_equal(taboo_power_mass(q, 1, H), [0, 0])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_properties(self, seed):
        chain, H = random_chain(np.random.default_rng(seed), reachable=False)
        P = chain.kernel.matrix
        q = taboo_kernel(chain.kernel, H)
        assert np.all(q <= P)
        assert np.all(q[:, list(H.indices)] == 0)
        assert np.all(q.sum(axis=1) <= 1 + 1e-12)
        prev = taboo_power_mass(q, 0, H)
        for t in range(1, 15):
            cur = taboo_power_mass(q, t, H)
            assert np.all(cur <= prev + 1e-15)
            assert np.all(cur[list(H.indices)] == 0)
            prev = cur
