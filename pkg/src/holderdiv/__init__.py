"""Hölder projective divergences between statistical distributions.

The Hölder pseudo-divergence measures the log-ratio gap of the forward
Hölder inequality; applying it to power-escorted densities yields the
proper Hölder divergence.  Both are projective (invariant to rescaling
of either argument) and collapse to closed-form log-normalizer
expressions for exponential families with conic or affine natural
parameter spaces.

Layout:

- :mod:`~holderdiv.families`: the five supported families (categorical,
  Bernoulli, multivariate normal, zero-centered Laplace, Wishart) with
  their Legendre calculus.
- :mod:`~holderdiv.oracle`: definition-level evaluation by exact sums
  and adaptive quadrature; Hölder-inequality checks; limit cases.
- :mod:`~holderdiv.closed_form`: the closed forms, symmetrized
  variants, escort and skew Bhattacharyya divergences, pre-aim
  identities and simplex geometry helpers.
- :mod:`~holderdiv.centroids`: CCCP solvers for right/left and
  symmetric centroids; Hölder information.
- :mod:`~holderdiv.clustering`: variational k-means, the two-cluster
  Gaussian toy benchmark and the accuracy experiment.
- :mod:`~holderdiv.mixtures`: exact product integrals and log-sum-exp
  bounds for univariate mixtures.
- :mod:`~holderdiv.cli`: the ``holderdiv`` command-line tool.
"""

from .centroids import (
    CccpTrace,
    CentroidResult,
    WeightedSet,
    hd_centroid,
    hd_centroid_left,
    holder_information,
    hpd_centroid,
    hpd_centroid_left,
    sym_hd_centroid,
    sym_hpd_centroid,
)
from .closed_form import (
    PreAimCheck,
    cs_closed,
    escort_divergence,
    hd_closed,
    hpd_bisector_residual,
    hpd_closed,
    hpd_minimizer_categorical,
    kl_closed,
    pre_aim_check,
    skew_bhattacharyya_closed,
    sym_hd_closed,
    sym_hpd_closed,
)
from .clustering import (
    ClusteringState,
    ExperimentResult,
    ToyDataset,
    ToyDatasetConfig,
    accuracy,
    generate_toy_dataset,
    kmeans,
    run_experiment,
)
from .exponents import ConjugatePair, conjugate_exponent
from .families import (
    Bernoulli,
    Categorical,
    Family,
    Gaussian,
    Laplace,
    NaturalParameter,
    OutOfDomainError,
    Wishart,
    distribution_from_dict,
    distribution_to_dict,
    escort_natural,
    power_integral,
)
from .mixtures import (
    Bounds,
    ElementaryPartition,
    Mixture,
    build_partition,
    component_interval_mass,
    hpd_mixture_bounds,
    power_integral_bounds,
    product_integral,
)
from .oracle import (
    Density1D,
    DiscreteDensity,
    HolderCheck,
    QuadratureError,
    cs_direct,
    hd_direct,
    holder_inequality_check,
    hpd_direct,
    hpd_limit,
    kl_direct,
    quadrature,
    skew_bhattacharyya_direct,
)

__version__ = "0.1.0"

__all__ = [
    "ConjugatePair",
    "conjugate_exponent",
    "NaturalParameter",
    "OutOfDomainError",
    "Family",
    "Categorical",
    "Bernoulli",
    "Gaussian",
    "Laplace",
    "Wishart",
    "power_integral",
    "escort_natural",
    "distribution_from_dict",
    "distribution_to_dict",
    "DiscreteDensity",
    "Density1D",
    "QuadratureError",
    "quadrature",
    "hpd_direct",
    "hd_direct",
    "cs_direct",
    "kl_direct",
    "skew_bhattacharyya_direct",
    "hpd_limit",
    "holder_inequality_check",
    "HolderCheck",
    "hpd_closed",
    "hd_closed",
    "cs_closed",
    "kl_closed",
    "sym_hpd_closed",
    "sym_hd_closed",
    "skew_bhattacharyya_closed",
    "escort_divergence",
    "pre_aim_check",
    "PreAimCheck",
    "hpd_minimizer_categorical",
    "hpd_bisector_residual",
    "WeightedSet",
    "CccpTrace",
    "CentroidResult",
    "hd_centroid",
    "hpd_centroid",
    "hd_centroid_left",
    "hpd_centroid_left",
    "sym_hd_centroid",
    "sym_hpd_centroid",
    "holder_information",
    "ToyDatasetConfig",
    "ToyDataset",
    "generate_toy_dataset",
    "ClusteringState",
    "kmeans",
    "accuracy",
    "ExperimentResult",
    "run_experiment",
    "Mixture",
    "ElementaryPartition",
    "Bounds",
    "product_integral",
    "build_partition",
    "power_integral_bounds",
    "hpd_mixture_bounds",
    "component_interval_mass",
]
