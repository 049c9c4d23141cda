"""Maximum likelihood estimation for Gaussian group models by norm minimization over group orbits."""

from .core import (
    CapacityResult,
    NotPositiveDefiniteError,
    circle_quadratic_min,
    lambda_star,
    log_likelihood,
    sample_covariance,
)
from .matrix_normal import (
    Classification,
    ConcentrationPair,
    FlipFlopConfig,
    StabilityReport,
    capacity_estimate,
    capacity_result,
    classify,
    flip_flop,
    moment_residual,
    stabilizer_lie_dim,
)
from .null_cone import CpRankQuery, MltBounds, cp_rank, mlt_bounds, mlt_table, null_cone_fills
from .tdag import (
    Dag,
    MleExistence,
    NotTransitiveError,
    TdagMle,
    is_transitive,
    mle_exists,
    mle_tdag,
    mlt_tdag,
    null_cone_zariski_closed,
    unshielded_colliders,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityResult", "NotPositiveDefiniteError", "circle_quadratic_min", "lambda_star",
    "log_likelihood", "sample_covariance",
    "Classification", "ConcentrationPair", "FlipFlopConfig", "StabilityReport",
    "capacity_estimate", "capacity_result", "classify", "flip_flop", "moment_residual", "stabilizer_lie_dim",
    "CpRankQuery", "MltBounds", "cp_rank", "mlt_bounds", "mlt_table", "null_cone_fills",
    "Dag", "MleExistence", "NotTransitiveError", "TdagMle", "is_transitive", "mle_exists",
    "mle_tdag", "mlt_tdag", "null_cone_zariski_closed", "unshielded_colliders",
]
