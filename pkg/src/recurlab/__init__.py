"""recurlab: pattern-free lattice sets, affine torus dynamics, and exact
multiple-recurrence measures.

The library constructs and certifies corner-free, three-point-free and
AP3-free sets, turns them into box unions on tori, and computes the exact
rational measure of multi-map intersection patterns for three built-in
affine systems, together with the exponent thresholds those values beat.
"""

__version__ = "0.1.0"

from .combinatorics import (
    DEFAULT_ENUMERATION_CAP,
    DigitProfile,
    LatticePointSet,
    SliceSelection,
    behrend_ap3_construct,
    choose_parameters,
    corner_free_cardinality,
    corner_free_contains,
    corner_free_enumerate,
    matrix_to_three_point_free,
    omega,
    three_point_free_from_corner_free,
    three_point_free_to_matrix,
)
from .dynamics import (
    AffineTorusMap,
    CommuteReport,
    OrbitStatistics,
    check_commute,
    commutator,
    compose,
    inverse,
    nilpotency_class,
    orbit_statistics,
    power,
)
from .errors import (
    CertificationError,
    ConsistencyError,
    DimensionError,
    DomainError,
    RangeError,
    RecurlabError,
    ShapeError,
    SizeCapError,
    StructureError,
)
from .intervals import BoxUnion, Interval, IntervalUnion, box_union_from_set
from .measures import (
    MonteCarloEstimate,
    ShiftConstraintTable,
    exact_intersection_measure,
    monte_carlo_measure,
    triple_intersection_measure_factorized,
    triple_intersection_measure_shared_shift,
)
from .piecewise import PiecewisePolynomial, fiber_length, integrate_product, overlap_profile
from .pipelines import MeasureReport, MeasureRow, run_theorem_pipeline
from .symbolic import DEFAULT_ALPHA, DEFAULT_BETA, SymScalar
from .systems import (
    RecurrenceSystem,
    ShiftReduction,
    commuting_pair_system,
    commuting_triple_system,
    get_system,
    nilpotent_pair_system,
    shift_reduction,
)
from .thresholds import (
    ExponentThreshold,
    LowerBoundEstimate,
    break_even_exponent,
    compare_measure_power,
    exponent_threshold,
    lower_bound,
)
from .verification import (
    PatternWitness,
    run_matching_oracle,
    verify_ap3_free,
    verify_corner_free,
    verify_matrix_properties,
    verify_three_point_free,
)
