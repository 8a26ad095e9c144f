"""Dynamical zeta approximants and Julia-set dimension tools for z^2 + c, c < -2."""

from .dynamics import (
    MAX_ORDER,
    PeriodicOrbit,
    SystemParams,
    apply_f,
    branch_derivative,
    compose_inverse,
    enumerate_orbits,
    inverse_branch,
    make_system,
    periodic_point,
)
from .errors import (
    BracketError,
    BranchCutError,
    CapacityError,
    ContourError,
    ConvergenceError,
    DomainError,
    JuliaZetaError,
    RelationError,
)
from .symbolic import (
    Partition,
    PhaseData,
    build_partition,
    orthogonality_stats,
    phase_derivatives,
    separation_ratio,
    split_index,
)
from .verify import (
    VerificationReport,
    build_report,
    check_152,
    check_contraction_ratio,
    check_nn2,
    check_sqrt5_threshold,
    estimate_distortion,
)
from .zeros import (
    Rectangle,
    Zero,
    count_zeros_argument,
    dimension_sweep,
    find_zeros_rectangle,
    largest_real_zero,
    moran_bracket,
)
from .zeta import (
    TraceTable,
    ZetaApproximant,
    approximant,
    build_trace_table,
    delta_N,
    delta_N_composition,
    delta_N_derivative,
    trace_coefficient,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
