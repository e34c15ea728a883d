"""Discrete time-frequency uncertainty on the centered sqrt(N)-periodic grid."""

__version__ = "0.1.0"

from .continuous import (
    CIRCLE_BOUND,
    HEISENBERG_BOUND,
    CircleMoments,
    ContinuousMoments,
    circle_moments,
    continuous_variance,
)
from .errors import ComputationError
from .experiments import (
    CircleRow,
    OptimizerTrace,
    TheoremReport,
    circle_asymptotics,
    optimize_window,
    sweep,
    uncertainty_product,
    verify_main_theorem,
)
from .periodization import (
    GaussianParams,
    LocalizedFunction,
    discrete_gaussian,
    gaussian,
    hermite1,
    localization_epsilon,
    lorentzian,
    periodize_sample,
    poisson_duality_residual,
)
from .signal import GridSpec, Signal, circular_distance, dft, idft, make_grid
from .spread import (
    SpreadReport,
    angular_spread,
    circular_variance,
    circular_variance_at,
    entropy,
    sparsity,
)
