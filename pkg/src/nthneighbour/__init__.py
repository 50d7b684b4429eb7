"""Mean distance to the n-th nearest neighbour among uniform random points.

Closed-form estimators live in :mod:`nthneighbour.formulas`, the distance
distribution and its samplers in :mod:`nthneighbour.dist`, and the Monte
Carlo engines in :mod:`nthneighbour.sim`.
"""

from ._backend import BACKEND
from .errors import DomainError, NthNeighbourError, ParameterError
from .formulas import (
    EstimateBundle,
    asymptotic_mean_distance_full,
    asymptotic_mean_distance_large_N,
    bundle,
    estimate_error_exact,
    estimate_error_large_D_approx,
    exact_mean_distance,
    gamma_ratio_large_D_approx,
    heuristic_mean_distance,
    mean_enclosed_volume,
    mean_volume_distance_estimate,
    rescaled_error_exact,
)
from .params import ProblemParams
from .stats import SampleStats

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "EstimateBundle",
    "NthNeighbourError",
    "ParameterError",
    "ProblemParams",
    "SampleStats",
    "asymptotic_mean_distance_full",
    "asymptotic_mean_distance_large_N",
    "bundle",
    "estimate_error_exact",
    "estimate_error_large_D_approx",
    "exact_mean_distance",
    "gamma_ratio_large_D_approx",
    "heuristic_mean_distance",
    "mean_enclosed_volume",
    "mean_volume_distance_estimate",
    "rescaled_error_exact",
]
