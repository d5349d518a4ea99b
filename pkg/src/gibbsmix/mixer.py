"""Gibbs mixture of least-squares estimators with a residual variance estimate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .core import DegenerateResidualError, ModelCollection, as_vector

HALF_DIM = "half_dim"
PER_MODEL = "per_model"
B_TIMES_CARDINALITY = "b_times_cardinality"

RESIDUAL_ESTIMATE = "residual_estimate"
KNOWN = "known"


@dataclass(frozen=True)
class MixConfig:
    """Tuning of the mixture.

    L_rule: ``half_dim`` (L_m = dim S_m / 2), ``per_model`` (use each model's
    stored ``weight_L``) or ``b_times_cardinality`` (L_m = b |m|).
    variance_mode: ``residual_estimate`` or ``known`` (then ``sigma2`` is used
    with the classical known-variance weights).
    """

    beta: float
    L_rule: str = HALF_DIM
    b: float = 0.0
    variance_mode: str = RESIDUAL_ESTIMATE
    sigma2: float | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.L_rule not in (HALF_DIM, PER_MODEL, B_TIMES_CARDINALITY):
            raise ValueError(f"unknown L_rule {self.L_rule!r}")
        if self.b < 0:
            raise ValueError("b must be >= 0")
        if self.variance_mode == KNOWN:
            if self.sigma2 is None or not self.sigma2 > 0:
                raise ValueError("known variance mode needs sigma2 > 0")
        elif self.variance_mode != RESIDUAL_ESTIMATE:
            raise ValueError(f"unknown variance mode {self.variance_mode!r}")


@dataclass
class MixResult:
    mu_hat: np.ndarray
    weights: dict[Hashable, float]
    sigma2_hat: float
    log_partition: float
    diagnostics: dict = field(default_factory=dict)


def model_L(collection: ModelCollection, config: MixConfig) -> np.ndarray:
    """Vector of L_m in collection order."""
    if config.L_rule == HALF_DIM:
        return collection.dims() / 2.0
    if config.L_rule == PER_MODEL:
        return np.array([m.weight_L for m in collection.models], dtype=float)
    return config.b * np.array([m.size for m in collection.models], dtype=float)


def residual_variance(Y, collection: ModelCollection) -> float:
    """||Y - Pi_{S_*} Y||^2 / N_*, euclidean norm."""
    Y = as_vector(Y, collection.n)
    return float(_residual_variance_batch(Y[None, :], collection)[0])


def _residual_variance_batch(Y: np.ndarray, collection: ModelCollection) -> np.ndarray:
    # ||Y||^2 - ||Pi Y||^2 cancels badly when Y is nearly in S_*; subtract explicitly
    resid = Y - collection.star.project(Y)
    return np.sum(resid * resid, axis=-1) / collection.N_star


def _normalize_log_weights(logw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # max-subtraction: the largest exponent in every row maps to 0
    top = np.max(logw, axis=-1, keepdims=True)
    e = np.exp(logw - top)
    total = np.sum(e, axis=-1, keepdims=True)
    return e / total, (top + np.log(total))[..., 0]


def mix_batch(Y: np.ndarray, collection: ModelCollection, config: MixConfig):
    """Vectorized mixture over rows of Y (shape (reps, n)).

    Returns (mu_hat, weights, sigma2_hat, log_partition) as arrays with a
    leading reps axis; weights follow collection order.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    subs = collection.subspaces()
    coefs = [Y @ s.basis for s in subs]
    sq = np.stack([np.sum(c * c, axis=-1) for c in coefs], axis=-1)  # ||mu_hat_m||^2
    log_prior = collection.log_priors()
    L = model_L(collection, config)

    if config.variance_mode == RESIDUAL_ESTIMATE:
        s2 = _residual_variance_batch(Y, collection)
        if np.any(s2 <= 0):
            raise DegenerateResidualError("degenerate residual: Y lies in S_*, sigma2_hat = 0")
        logw = log_prior + config.beta * sq / s2[:, None] - L
    else:
        s2 = np.full(Y.shape[0], float(config.sigma2))
        dims = collection.dims()
        n = collection.n
        resid_sq = np.sum(Y * Y, axis=-1, keepdims=True) - sq  # ||Y - mu_hat_m||^2
        logw = log_prior - config.beta * (resid_sq / config.sigma2 + 2.0 * dims - n)

    w, log_z = _normalize_log_weights(logw)
    mu_hat = np.zeros_like(Y)
    for i, (s, c) in enumerate(zip(subs, coefs)):
        if s.rank:
            mu_hat += (w[:, i : i + 1] * c) @ s.basis.T
    return mu_hat, w, s2, log_z


def mix(Y, collection: ModelCollection, config: MixConfig) -> MixResult:
    """Aggregate the least-squares estimators of every model in ``collection``.

    Residual mode: w_m proportional to pi_m exp(beta ||mu_hat_m||^2 / sigma2_hat - L_m).
    Known mode: w_m proportional to pi_m exp(-beta [||Y - mu_hat_m||^2 / sigma2 + 2 dim S_m - n]).
    """
    Y = as_vector(Y, collection.n)
    mu_hat, w, s2, log_z = mix_batch(Y[None, :], collection, config)
    diagnostics = {}
    deficient = collection.rank_deficient_models()
    if deficient:
        diagnostics["rank_deficient_models"] = deficient
    return MixResult(
        mu_hat=mu_hat[0],
        weights={m.id: float(wi) for m, wi in zip(collection.models, w[0])},
        sigma2_hat=float(s2[0]),
        log_partition=float(log_z[0]),
        diagnostics=diagnostics,
    )


def alternative_log_weights(Y, collection: ModelCollection, config: MixConfig) -> np.ndarray:
    """Unnormalized log-weights in the form -beta ||Pi_* Y - mu_hat_m||^2 / s2 - L_m + log pi_m.

    They differ from the primary exponent by a model-independent constant,
    so both normalize to the same weights.
    """
    Y = as_vector(Y, collection.n)
    s2 = residual_variance(Y, collection)
    if s2 <= 0:
        raise DegenerateResidualError("degenerate residual: Y lies in S_*, sigma2_hat = 0")
    star = collection.star.project(Y)
    dist = np.array([np.sum((star - s.project(Y)) ** 2) for s in collection.subspaces()])
    return collection.log_priors() - config.beta * dist / s2 - model_L(collection, config)
