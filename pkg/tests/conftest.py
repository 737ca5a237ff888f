import time
from contextlib import contextmanager

import numpy as np
import pytest

from restart_hit import RestartChain, TargetSet, validate_kernel

_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextmanager
    def check(number: int, title: str, budget: float | None = None):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            if budget is not None:
                assert elapsed < budget, f"runtime {elapsed:.2f}s exceeds {budget}s"
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            _ACCEPTANCE.append(f"FAIL  criterion {number:>2}: {title} ({elapsed:.2f}s) -- {exc}")
            raise
        _ACCEPTANCE.append(f"PASS  criterion {number:>2}: {title} ({elapsed:.2f}s)")

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def two_state():
    """P = [[0,1],[0,1]], restart to state 0: V(0) = 1/(1-p)."""
    return validate_kernel([[0, 1], [0, 1]]), np.array([1.0, 0.0]), TargetSet.of([1], 2)


@pytest.fixture
def restart_into_target():
    """P = identity, restart into the target: V(0) = 1/p."""
    return validate_kernel(np.eye(2)), np.array([0.0, 1.0]), TargetSet.of([1], 2)


@pytest.fixture
def stuck():
    """P = identity, restart to state 0: the target is never reached."""
    return validate_kernel(np.eye(2)), np.array([1.0, 0.0]), TargetSet.of([1], 2)


@pytest.fixture
def three_state():
    k = validate_kernel([[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]])
    return RestartChain(k, [1, 0, 0], 0.5), TargetSet.of([2], 3)
