"""Douglas-Rachford algorithmic structures for convex feasibility problems."""

from .algorithms import (
    BlockPlan,
    RunRecord,
    StringPlan,
    bi_dr,
    cyclic_dr,
    r_set_dr_scheme,
    reference_cyclic_projections,
    sa_dr,
    simultaneous_dr,
    two_set_dr_iteration,
)
from .diagnostics import (
    StopConfig,
    Verdict,
    check_asymptotic_regularity,
    check_fejer,
    compare_trajectories,
)
from .geometry import (
    AffineSubspace,
    Ball,
    Box,
    ConvexSet,
    DimensionError,
    FeasibilityProblem,
    Halfspace,
    Hyperplane,
    NonFiniteError,
    contains,
    distance,
    project,
    reflect,
)
from .operators import (
    apply,
    probe_fne,
    probe_sqne,
    r_set_dr,
    relax,
    two_set_dr,
)

__version__ = "0.1.0"
