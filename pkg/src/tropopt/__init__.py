"""Tropical linear algebra and closed-form spectral optimization."""

from .errors import *  # noqa: F401,F403
from .inequalities import (
    BoxBound,
    GeneratedSet,
    solve_affine_subinvariant,
    solve_subinvariant,
    solve_upper_bounded,
)
from .linalg import (
    Matrix,
    NormalForm,
    conjugate_transpose,
    kleene_star,
    mat_add,
    mat_mul,
    matrix_power,
    normal_form,
    regularity,
    scalar_mul,
    spectral_radius,
    tr_cumulative,
    trace,
    vector,
)
from .optimizer import (
    ConstrainedInstance,
    DoublyConstrainedInstance,
    OptimizationOutcome,
    RayleighInstance,
    UnconstrainedInstance,
    canonical_solution,
    evaluate_objective,
    membership,
    minimize_constrained,
    minimize_doubly_constrained,
    minimize_extended,
    minimize_rayleigh,
    solve,
)
from .semifield import (
    MAX_PLUS,
    MAX_TIMES,
    MIN_PLUS,
    MIN_TIMES,
    Scalar,
    Semifield,
    compare,
    get_semifield,
    inverse,
    oplus,
    otimes,
    power,
)

__version__ = "0.1.0"
