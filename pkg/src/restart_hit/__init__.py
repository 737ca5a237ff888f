"""Expected hitting times of finite Markov chains with restart."""

from .errors import (
    BoundaryTooClose,
    EquivalenceViolation,
    InfeasibleTarget,
    KernelError,
    NegativeEntry,
    NonConverged,
    RestartHitError,
    RowSumViolation,
    SolverFailure,
)
from .hitting import (
    Classification,
    HittingSolution,
    classify,
    hitting_time,
    solve_v1,
    v1_series,
    value_iteration,
)
from .kernel import (
    FiniteKernel,
    RestartChain,
    TargetSet,
    restart_kernel,
    taboo_kernel,
    taboo_power_mass,
    validate_kernel,
)
from .optimize import OptResult, PCurve, dv_dp_fd, minimize_p, v_at_one, v_at_zero, v_curve
from .simulate import (
    BACKEND,
    SampleStats,
    empirical_stationary,
    sample_expline_hitting,
    sample_hitting_time,
    sample_lattice_hitting,
)
from .stationary import StationaryDist, invariant_series, invariant_stationary, q_mass, target_reachable

__version__ = "0.1.0"
