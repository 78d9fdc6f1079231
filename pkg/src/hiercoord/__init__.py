"""Energy-efficient power control in hierarchical multi-carrier games.

The main entry points are re-exported here; see the submodules for details.
"""

__version__ = "0.1.0"

from .baselines import (
    AssignmentOptimum,
    EquilibriumReport,
    equilibrium_check,
    exhaustive_optimum,
    matching_optimum,
    max_utilities,
    prop2_certificate,
    rho_preserving_gains,
    spectrum_pooling,
    waterfill,
)
from .coordination import (
    CoordinationOutcome,
    OrderingSearchResult,
    QualityRatios,
    StopReason,
    delta_mcsc,
    delta_ocsc,
    ordering_search,
    pi_csc,
    quality_ratios,
    random_coordination,
)
from .errors import (
    ChannelFileError,
    ConvergenceError,
    DimensionError,
    DomainError,
    HierCoordError,
    NoUsableCarrierError,
    NotCoordinatedError,
    UnsupportedOrderError,
)
from .game import (
    ChannelMatrix,
    EfficiencyModel,
    GameConfig,
    PowerAllocation,
    SinrProfile,
    UtilityVector,
    best_response,
    compute_sinr,
    compute_utilities,
    efficiency_derivative,
    efficiency_value,
    solve_gamma_star,
)
from .montecarlo import ScenarioSpec, generate_channels, run_scenario, run_trial, sweep

__all__ = [
    "__version__",
    "AssignmentOptimum",
    "EquilibriumReport",
    "equilibrium_check",
    "exhaustive_optimum",
    "matching_optimum",
    "max_utilities",
    "prop2_certificate",
    "rho_preserving_gains",
    "spectrum_pooling",
    "waterfill",
    "CoordinationOutcome",
    "OrderingSearchResult",
    "QualityRatios",
    "StopReason",
    "delta_mcsc",
    "delta_ocsc",
    "ordering_search",
    "pi_csc",
    "quality_ratios",
    "random_coordination",
    "ChannelFileError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "HierCoordError",
    "NoUsableCarrierError",
    "NotCoordinatedError",
    "UnsupportedOrderError",
    "ChannelMatrix",
    "EfficiencyModel",
    "GameConfig",
    "PowerAllocation",
    "SinrProfile",
    "UtilityVector",
    "best_response",
    "compute_sinr",
    "compute_utilities",
    "efficiency_derivative",
    "efficiency_value",
    "solve_gamma_star",
    "ScenarioSpec",
    "generate_channels",
    "run_scenario",
    "run_trial",
    "sweep",
]
