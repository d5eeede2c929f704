"""Key-sector analysis of inter-sector flow networks.

Builds random-walk and shortest-path centralities plus total requirement
multipliers from dense flow matrices, with estimator-style wrappers, a
seeded Monte Carlo oracle, competition ranking, and CSV ingestion.
"""

from .base import (
    BET,
    CBET,
    CLO,
    EMPMULT,
    MEASURE_TAGS,
    OUTMULT,
    RWC,
    WBET,
    WCLO,
    CentralityEstimator,
    CentralityVector,
    defined_vector,
)
from .exceptions import (
    CapExceededError,
    DanglingSectorError,
    DataError,
    DimensionMismatchError,
    DomainError,
    IllConditionedWarning,
    IonetError,
    NonFiniteError,
    NonProductiveError,
    NumericalError,
    OutOfRangeError,
    ParseError,
    SingularSystemError,
    UndefinedScoreError,
    UnknownMeasureError,
    UnmappedSectorError,
)
from .graph import (
    AggregationMap,
    DeflatedTransition,
    FlowMatrix,
    ReachabilityReport,
    Sector,
    TransitionMatrix,
    aggregate,
    build_transition,
    check_reachability,
    deflate,
    drop_isolated,
    subset,
)
from .randomwalk import (
    CountingBetweenness,
    RandomWalkCloseness,
    counting_betweenness,
    mfpt_matrix,
    mfpt_to_target,
    random_walk_centrality,
    random_walk_profile,
    visit_counts,
)
from .paths import (
    DEFAULT_ALPHAS,
    DistanceMatrix,
    WeightedBetweenness,
    WeightedCloseness,
    betweenness,
    closeness,
    edge_costs,
    geodesic_counts,
    weighted_distance,
)
from .multipliers import (
    EmploymentMultiplier,
    OutputMultiplier,
    apply_rpc,
    employment_multiplier,
    leontief_inverse,
    output_multiplier,
    regional_inputs,
)
from .oracle import (
    BATCH_WALKS,
    WalkConfig,
    simulate_mfpt,
    simulate_visit_profile,
    simulate_visits,
)
from .ranking import (
    RankTable,
    average_ranks,
    competition_rank,
    rank,
    spearman,
    top_n,
)
from .dataio import (
    format_value,
    parse_matrix_csv,
    read_aggregation_map,
    read_rpc,
    read_sector_vector,
    write_flow_matrix,
    write_matrix_csv,
    write_score_table,
    write_sector_vector,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationMap",
    "BATCH_WALKS",
    "BET",
    "CBET",
    "CLO",
    "CapExceededError",
    "CentralityEstimator",
    "CentralityVector",
    "CountingBetweenness",
    "DEFAULT_ALPHAS",
    "DanglingSectorError",
    "DataError",
    "DeflatedTransition",
    "DimensionMismatchError",
    "DistanceMatrix",
    "DomainError",
    "EMPMULT",
    "EmploymentMultiplier",
    "FlowMatrix",
    "IllConditionedWarning",
    "IonetError",
    "MEASURE_TAGS",
    "NonFiniteError",
    "NonProductiveError",
    "NumericalError",
    "OUTMULT",
    "OutOfRangeError",
    "OutputMultiplier",
    "ParseError",
    "RWC",
    "RandomWalkCloseness",
    "RankTable",
    "ReachabilityReport",
    "Sector",
    "SingularSystemError",
    "TransitionMatrix",
    "UndefinedScoreError",
    "UnknownMeasureError",
    "UnmappedSectorError",
    "WBET",
    "WCLO",
    "WalkConfig",
    "WeightedBetweenness",
    "WeightedCloseness",
    "aggregate",
    "apply_rpc",
    "average_ranks",
    "betweenness",
    "build_transition",
    "check_reachability",
    "closeness",
    "competition_rank",
    "counting_betweenness",
    "defined_vector",
    "deflate",
    "drop_isolated",
    "edge_costs",
    "employment_multiplier",
    "format_value",
    "geodesic_counts",
    "leontief_inverse",
    "mfpt_matrix",
    "mfpt_to_target",
    "output_multiplier",
    "parse_matrix_csv",
    "random_walk_centrality",
    "random_walk_profile",
    "rank",
    "read_aggregation_map",
    "read_rpc",
    "read_sector_vector",
    "regional_inputs",
    "simulate_mfpt",
    "simulate_visit_profile",
    "simulate_visits",
    "spearman",
    "subset",
    "top_n",
    "visit_counts",
    "weighted_distance",
    "write_flow_matrix",
    "write_matrix_csv",
    "write_score_table",
    "write_sector_vector",
]
