"""Affinity-matrix toolkit.

One abstraction, four stages: build pairwise affinities, normalize them
into weights, propagate over the induced graph (one hop or the full path
series), and aggregate into scores or representations. Feature ranking,
eigenvector/PageRank centrality, scaled dot-product and multi-head
attention, non-local blocks, GAT layers, and sigmoid feature gates are
all instances of that pipeline.
"""

from .affinity import (
    AffinityMatrix,
    FeatureDataset,
    build_corr_affinity,
    build_dot_product_affinity,
    build_gat_scores,
    build_gaussian_affinity,
)
from .attention import (
    AttentionConfig,
    GatParams,
    NonLocalProjections,
    ProjectionSet,
    attention,
    gat_layer,
    multi_head_attention,
    multi_head_gat,
    non_local_block,
)
from .errors import (
    AffinityKitError,
    ConvergenceBoundError,
    DimensionMismatch,
    DivisibilityError,
    EmptyDataset,
    EmptyFile,
    EmptyNeighborhood,
    InputError,
    KOutOfRange,
    NegativeEntries,
    NonConvergence,
    NonFiniteInput,
    NonFiniteScores,
    NonNumericCell,
    NonPositiveBandwidth,
    NumericError,
    RaggedRows,
    SingularSystem,
    ZeroDegreeRow,
    ZeroMatrix,
)
from .normalize import (
    AlphaScaling,
    NeighborhoodMask,
    choose_alpha,
    masked_softmax_rows,
    scale_scores,
    softmax_rows,
    spectral_radius,
    sym_degree_normalize,
)
from .propagate import (
    CentralityVector,
    PathSum,
    eigenvector_centrality,
    inffs_scores,
    pagerank,
    power_series_closed_form,
    power_series_truncated,
    single_hop_aggregate,
)
from .selection import (
    GateVector,
    RankingResult,
    gate_forward,
    gate_gradient,
    hard_threshold,
    rank,
    select_top_k,
)
from .verify import PropertyCheck, run_all

__version__ = "0.1.0"

__all__ = [
    "AffinityKitError",
    "AffinityMatrix",
    "AlphaScaling",
    "AttentionConfig",
    "CentralityVector",
    "ConvergenceBoundError",
    "DimensionMismatch",
    "DivisibilityError",
    "EmptyDataset",
    "EmptyFile",
    "EmptyNeighborhood",
    "FeatureDataset",
    "GatParams",
    "GateVector",
    "InputError",
    "KOutOfRange",
    "NegativeEntries",
    "NeighborhoodMask",
    "NonConvergence",
    "NonFiniteInput",
    "NonFiniteScores",
    "NonLocalProjections",
    "NonNumericCell",
    "NonPositiveBandwidth",
    "NumericError",
    "PathSum",
    "ProjectionSet",
    "PropertyCheck",
    "RaggedRows",
    "RankingResult",
    "SingularSystem",
    "ZeroDegreeRow",
    "ZeroMatrix",
    "attention",
    "build_corr_affinity",
    "build_dot_product_affinity",
    "build_gat_scores",
    "build_gaussian_affinity",
    "choose_alpha",
    "eigenvector_centrality",
    "gat_layer",
    "gate_forward",
    "gate_gradient",
    "hard_threshold",
    "inffs_scores",
    "masked_softmax_rows",
    "multi_head_attention",
    "multi_head_gat",
    "non_local_block",
    "pagerank",
    "power_series_closed_form",
    "power_series_truncated",
    "rank",
    "run_all",
    "scale_scores",
    "select_top_k",
    "single_hop_aggregate",
    "softmax_rows",
    "spectral_radius",
    "sym_degree_normalize",
]
