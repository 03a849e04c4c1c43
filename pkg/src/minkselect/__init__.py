"""Selection, ranking and finding over constrained Minkowski sums of two
planar point multisets, with exhaustive-oracle verification and sequence
analysis reductions (length-constrained sum selection, density finding).
"""

from .applications import (
    SegmentResult,
    Sequence,
    WeightedSequence,
    density_find,
    lcss_select,
    sum_select,
)
from .decomposition import (
    Decomposition,
    ProductBlock,
    construct_matrices,
    lcss_blocks,
    parallel_blocks,
    product_blocks,
)
from .errors import (
    DegenerateConstraintError,
    InfeasibleError,
    InputError,
    InternalInvariantError,
    MinkError,
    NoFeasibleValueError,
    RankRangeError,
)
from .finding import FindResult, find_linear, find_max_leq, find_ratio
from .geometry import (
    ConstraintSystem,
    FeasiblePolygon,
    HalfPlaneConstraint,
    Objective,
    ParallelConstraintsSignal,
    Point,
    PointMultiset,
    SwapConstraintsSignal,
    bounding_box_for,
    canonicalize_objective,
    feasible_polygon,
    normalize_constraint,
    transform_one,
    transform_parallel,
    transform_ratio,
    transform_two,
)
from .oracle import FeasibleEnumeration, oracle_enumerate, oracle_find, oracle_rank, oracle_select
from .randomized import (
    ContractionSelector,
    OrderStatisticTree,
    RangeQueryEngine,
    range_count,
    range_report,
    range_report_weak,
    sample_feasible,
    selection_2_randomized,
)
from .selection import (
    OneConstraintEngine,
    ParallelStripEngine,
    PolygonSlabEngine,
    RankResult,
    SelectionResult,
    TwoConstraintEngine,
    make_pair_engine,
    ranking_1,
    ranking_2,
    selection_1,
    selection_2,
    selection_lambda,
    selection_parallel,
)
from .sorted_matrix import (
    ImplicitSortedMatrix,
    MatrixCollection,
    count_greater,
    max_entry_below,
    min_entry_at_least,
    rank_in_collection,
    select_kth_in_collection,
)

__version__ = "0.1.0"
