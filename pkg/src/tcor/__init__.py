"""Thresholded correlation matrices via truncated-SVD pruning."""

from .driver import TcorConfig, brute_force_threshold, savings_estimate, tcor, tdist
from .errors import (
    AllColumnsConstantError,
    ConfigError,
    ConstantColumnError,
    ConvergenceError,
    InputError,
    SizeGuardError,
    TcorError,
)
from .io import (
    ColumnStats,
    DataMatrix,
    column_stats,
    drop_constant_columns,
    load_binary,
    load_csv,
    save_binary,
    standardize,
)
from .prune import (
    CandidatePairs,
    PruningState,
    candidates_at_gap,
    estimate_adjacent_count,
    generate_candidates,
    longest_run,
    order_permutation,
    scaled_projection,
)
from .svd import CenteredScaledOperator, RawOperator, TruncatedSVD, extend, truncated_svd
from .threshold import (
    Diagnostics,
    ThresholdedResult,
    exact_correlation,
    exact_distance,
    filter_candidates,
    filter_distance,
)

__version__ = "0.1.0"
