"""Realisticity index of latent points and curves, and interpolation
paths that maximize it.

The package computes a calibrated density index ri(z) in [0, 1] for
latent points under arbitrary priors, extends it to curves through a
pullback Riemann structure, and finds high-index interpolation paths
by gradient descent on a discretized energy functional.
"""

from .analysis import (
    ComparisonReport,
    PathReport,
    build_report,
    compare,
    decoded_l2_distances,
    project_to_endpoint_plane,
    ri_along_path,
)
from .errors import (
    ConfigError,
    DegenerateProjection,
    DegenerateSample,
    DimensionMismatch,
    NonInjectiveGenerator,
    NumericFailure,
    RipathError,
    WeightFormatError,
)
from .generators import (
    AnalyticWarp,
    Generator,
    LinearGenerator,
    MlpGenerator,
    load_generator,
    save_generator,
)
from .priors import (
    GaussianMixture,
    PriorDensity,
    StandardNormal,
    UniformBox,
    density_from_json,
    density_to_json,
    semicircle_prior,
)
from .realisticity import (
    GaussianErfApprox,
    GaussianExact,
    Kde,
    KdeEstimator,
    RealisticityModel,
    UniformIndicator,
    kde_cdf,
    kde_fit,
    ri_estimate,
    ri_gaussian_erf_approx,
    ri_gaussian_exact,
    ri_uniform,
    silverman_bandwidth,
)
from .solver import (
    InterpolationPath,
    OptimizationTrace,
    SolverConfig,
    curve_ri,
    energy_gradient,
    linear_init,
    optimize,
    path_energy,
    riemann_metric,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticWarp",
    "ComparisonReport",
    "ConfigError",
    "DegenerateProjection",
    "DegenerateSample",
    "DimensionMismatch",
    "GaussianErfApprox",
    "GaussianExact",
    "GaussianMixture",
    "Generator",
    "InterpolationPath",
    "Kde",
    "KdeEstimator",
    "LinearGenerator",
    "MlpGenerator",
    "NonInjectiveGenerator",
    "NumericFailure",
    "OptimizationTrace",
    "PathReport",
    "PriorDensity",
    "RealisticityModel",
    "RipathError",
    "SolverConfig",
    "StandardNormal",
    "UniformBox",
    "UniformIndicator",
    "WeightFormatError",
    "build_report",
    "compare",
    "curve_ri",
    "decoded_l2_distances",
    "density_from_json",
    "density_to_json",
    "energy_gradient",
    "kde_cdf",
    "kde_fit",
    "linear_init",
    "load_generator",
    "optimize",
    "path_energy",
    "project_to_endpoint_plane",
    "ri_along_path",
    "ri_estimate",
    "ri_gaussian_erf_approx",
    "ri_gaussian_exact",
    "ri_uniform",
    "riemann_metric",
    "save_generator",
    "semicircle_prior",
    "silverman_bandwidth",
]
