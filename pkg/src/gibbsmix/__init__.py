"""Gibbs mixtures of least-squares estimators for Gaussian regression with unknown variance."""

from .core import DegenerateResidualError, DesignFamily, Model, ModelCollection, gram_check, project
from .mixer import MixConfig, MixResult, mix, residual_variance
from .shrinkage import ShrinkResult, shrink_binomial_prior, shrink_known_variance, shrink_unknown_variance
from .tuning import beta_max_orthonormal, beta_max_theorem1, check_theorem1_conditions, phi, phi_inverse

__version__ = "0.1.0"

__all__ = [
    "DegenerateResidualError",
    "DesignFamily",
    "MixConfig",
    "MixResult",
    "Model",
    "ModelCollection",
    "ShrinkResult",
    "beta_max_orthonormal",
    "beta_max_theorem1",
    "check_theorem1_conditions",
    "gram_check",
    "mix",
    "phi",
    "phi_inverse",
    "project",
    "residual_variance",
    "shrink_binomial_prior",
    "shrink_known_variance",
    "shrink_unknown_variance",
]
