"""Online vector balancing with discrete Gaussian-preserving random walks."""

from .balancer import (
    DyadicRouter,
    FullColoring,
    OnlineBalancer,
    SignRecord,
    SparseVector,
    dyadic_router,
    dyadic_scale,
    full_coloring,
)
from .errors import ConsistencyError, DomainError, NormError, RoundCapExceeded
from .harness import (
    ExperimentReport,
    TruncatedChain,
    build_truncated_chain,
    generate,
    monte_carlo_fixed_point,
    run_experiment,
    run_verification,
    stationarity_residual,
)
from .theta import (
    InequalityCheck,
    Probability,
    WalkParams,
    check_balance_inequality,
    eval_p,
    eval_r_product,
    eval_r_series,
    p_array,
    r_array,
)
from .walks import (
    LatticePosition,
    StepProbabilities,
    decompose,
    jacobi_distribution,
    ramanujan_distribution,
    sample_step,
    step_many,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DomainError",
    "NormError",
    "RoundCapExceeded",
    "DyadicRouter",
    "ExperimentReport",
    "FullColoring",
    "InequalityCheck",
    "LatticePosition",
    "OnlineBalancer",
    "Probability",
    "SignRecord",
    "SparseVector",
    "StepProbabilities",
    "TruncatedChain",
    "WalkParams",
    "build_truncated_chain",
    "check_balance_inequality",
    "decompose",
    "dyadic_router",
    "dyadic_scale",
    "eval_p",
    "eval_r_product",
    "eval_r_series",
    "full_coloring",
    "generate",
    "jacobi_distribution",
    "monte_carlo_fixed_point",
    "p_array",
    "r_array",
    "ramanujan_distribution",
    "run_experiment",
    "run_verification",
    "sample_step",
    "stationarity_residual",
    "step_many",
]
