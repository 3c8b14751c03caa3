"""Best uniform approximation by sums of two partition-induced algebras.

The library models a finite point set with two partitions, approximates
functions by sums g∘s + h∘p in the uniform norm, and certifies optimality
(or refutes it) through closed extremal bolts and their dual signed
measures.
"""

__version__ = "0.1.0"

from .bolts import (
    Bolt,
    BoltFunctionalReport,
    ClosedBolt,
    annihilation_gap,
    as_closed,
    bolt_functional,
    default_tolerance,
    extremal_point_sets,
    find_closed_extremal_bolt,
    functional_norm,
    is_closed,
    reversed_bolt,
    rotated,
    validate_bolt,
)
from .errors import (
    BoltcertError,
    BoltValidationError,
    InputFormatError,
    MeasureWalkError,
    SolverInternalError,
    SpaceValidationError,
)
from .measures import (
    JordanPair,
    SignedMeasure,
    SingerReport,
    change_of_variables_check,
    extract_bolt_from_measure,
    is_orthogonal,
    jordan,
    measure_from_closed_bolt,
    pushforward,
    verify_singer,
)
from .solvers import (
    ApproximationResult,
    Certificate,
    SolveMethod,
    Verdict,
    certify,
    diliberto_straus,
    duality_gap,
    solve_lp,
)
from .space import (
    AlgebraElement,
    FunctionOnX,
    Side,
    SumElement,
    TwoAlgebraSpace,
    build_from_partitions,
    build_grid,
    build_ridge,
    evaluate_sum,
    factors_through,
    sum_element,
    uniform_norm,
    zero_sum_element,
)

__all__ = [
    "AlgebraElement",
    "ApproximationResult",
    "Bolt",
    "BoltFunctionalReport",
    "BoltValidationError",
    "BoltcertError",
    "Certificate",
    "ClosedBolt",
    "FunctionOnX",
    "InputFormatError",
    "JordanPair",
    "MeasureWalkError",
    "Side",
    "SignedMeasure",
    "SingerReport",
    "SolveMethod",
    "SolverInternalError",
    "SpaceValidationError",
    "SumElement",
    "TwoAlgebraSpace",
    "Verdict",
    "annihilation_gap",
    "as_closed",
    "bolt_functional",
    "build_from_partitions",
    "build_grid",
    "build_ridge",
    "certify",
    "change_of_variables_check",
    "default_tolerance",
    "diliberto_straus",
    "duality_gap",
    "evaluate_sum",
    "extract_bolt_from_measure",
    "extremal_point_sets",
    "factors_through",
    "find_closed_extremal_bolt",
    "functional_norm",
    "is_closed",
    "is_orthogonal",
    "jordan",
    "measure_from_closed_bolt",
    "pushforward",
    "reversed_bolt",
    "rotated",
    "solve_lp",
    "sum_element",
    "uniform_norm",
    "validate_bolt",
    "verify_singer",
    "zero_sum_element",
]
