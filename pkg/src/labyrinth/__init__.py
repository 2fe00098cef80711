"""Construction and exact analysis of supermixed labyrinth sets."""

from .errors import ConsistencyError, FormatError, GridCapError, InvalidPatternError, InvariantViolation, LabyrinthError
from .pattern import (
    ExitPositions,
    ExitSet,
    Pattern,
    PatternGraph,
    SquareIndex,
    build_graph,
    check_corner_property,
    find_exits,
    is_blocked,
    is_horizontally_blocked,
    is_labyrinth_pattern,
    is_tree,
    is_vertically_blocked,
    validate_labyrinth_pattern,
)
from .report import Check, Report
from .substitution import (
    AssignmentRule,
    ConstructionPlan,
    LabyrinthSet,
    PatternCollection,
    build_to_level,
    compose_level,
    validate_collection_consistency,
    validate_pairwise_tree_consistency,
)
from .paths import (
    KINDS,
    CountingMatrix,
    PathType,
    TypedPath,
    arc_approximation,
    arc_length_lower_bound,
    counting_matrices,
    exit_path,
    exit_paths,
    path_length_sum_identity,
    path_matrix,
    paths_intersection,
    substitute_path,
    verify_counting_chain,
    verify_recursion,
)
from .analysis import (
    blocked_inequality_check,
    box_dimension_estimate,
    certified_c,
    exit_coordinates,
    growth_diagnostics,
    kappa_bound_check,
    reduce_path_matrix,
    reduced_product_check,
    virtual_matrix,
)
from .formats import format_pattern, format_set, format_trace, load_patterns, load_plan, parse_pattern, parse_patterns, parse_plan

__version__ = "0.1.0"
