"""Closed-form risk bounds and the numerical constants they involve."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable

import numpy as np
from scipy.special import expit

from .core import ModelCollection, as_vector
from .tuning import check_orthonormal_conditions, phi

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundReport:
    per_model_risk: dict[Hashable, float]
    foracle_rhs: float
    fgibbs_rhs: float
    epsilon_n: float
    sigma_bar2: float
    best_model: Hashable
    crude_rhs: float
    r_star: float


def epsilon_n(n: int) -> float:
    return 1.0 / (2.0 * n * math.log(n))


def _bias_terms(mu: np.ndarray, collection: ModelCollection) -> np.ndarray:
    # ||mu - Pi_m mu||^2 for every model, in collection order
    out = np.empty(len(collection))
    for i, s in enumerate(collection.subspaces()):
        r = mu - s.project(mu)
        out[i] = float(np.dot(r, r))
    return out


def star_bias(mu, collection: ModelCollection) -> float:
    """||mu - Pi_{S_*} mu||^2."""
    mu = np.asarray(mu, dtype=float)
    r = mu - collection.star.project(mu)
    return float(np.dot(r, r))


def sigma_bar2(mu, collection: ModelCollection, sigma2: float) -> float:
    """sigma^2 + ||mu - Pi_{S_*} mu||^2 / N_*."""
    return sigma2 + star_bias(mu, collection) / collection.N_star


def model_risk(mu, model, collection: ModelCollection, sigma2: float) -> float:
    """Exact risk of the projection estimator: ||mu - Pi_m mu||^2 + dim(S_m) sigma^2."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    mu = as_vector(mu, collection.n)
    s = collection.subspace(model)
    r = mu - s.project(mu)
    return float(np.dot(r, r)) + s.rank * sigma2


def theorem1_bounds(mu, collection: ModelCollection, sigma2: float, beta: float, L=None) -> BoundReport:
    """Evaluate the Gibbs-form and oracle-form risk bounds of the mixture.

    ``L`` gives L_m in collection order; by default each model's stored
    ``weight_L`` is used. Also returns the cruder bias-complexity bound with
    C_m = L_m - log pi_m.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    mu = as_vector(mu, collection.n)
    n = collection.n
    eps = epsilon_n(n)
    L = np.array([m.weight_L for m in collection.models] if L is None else L, dtype=float)
    log_pi = collection.log_priors()
    dims = collection.dims()
    bias = _bias_terms(mu, collection)
    sb2 = sigma_bar2(mu, collection, sigma2)
    tail = sigma2 / (2.0 * math.log(n))

    oracle_terms = bias + sb2 / beta * (L - log_pi)
    best = int(np.argmin(oracle_terms))
    foracle = (1.0 + eps) * oracle_terms[best] + tail

    expo = log_pi - beta * (bias - dims * sigma2) / sb2 - L
    top = np.max(expo)
    lse = top + math.log(float(np.sum(np.exp(expo - top))))
    fgibbs = -(1.0 + eps) * sb2 / beta * lse + tail

    C = L - log_pi
    r_star = 1.0 / (2.0 * math.log(n)) + star_bias(mu, collection) / (beta * collection.N_star * sigma2) * float(np.max(C))
    crude = (1.0 + eps) * float(np.min(bias + C * sigma2 / beta)) + r_star * sigma2

    risks = bias + dims * sigma2
    return BoundReport(
        per_model_risk={m.id: float(r) for m, r in zip(collection.models, risks)},
        foracle_rhs=float(foracle),
        fgibbs_rhs=float(fgibbs),
        epsilon_n=eps,
        sigma_bar2=sb2,
        best_model=collection.models[best].id,
        crude_rhs=crude,
        r_star=r_star,
    )


def complexity_index_remainder(M: float, a: float, kappa: float, beta: float, n: int, star_bias_sq: float, sigma2: float) -> float:
    """Remainder R'_n of the oracle inequality for a family with complexity index (M, a).

    Valid with priors proportional to e^{-(a+1/2) dim} and d_* <= kappa n.
    """
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    l3m = math.log(3.0 * M)
    return (
        l3m / beta
        + 1.0 / (2.0 * math.log(n))
        + star_bias_sq / sigma2 * ((a + 1.0) * kappa + l3m / n) / (beta * (1.0 - kappa))
    )


def gamma_beta(p: int, beta: float) -> float:
    """sqrt(2 + log(p) / beta)."""
    if p < 1 or not beta > 0:
        raise ValueError("need p >= 1 and beta > 0")
    return math.sqrt(2.0 + math.log(p) / beta)


class _CBetaIntegrand:
    """E[(x - (x+z) s_beta(x+z))^2], z standard normal, by composite Simpson."""

    def __init__(self, p: int, beta: float, z_step: float, z_max: float):
        panels = int(math.ceil(2 * z_max / z_step))
        panels += panels % 2
        self.z = np.linspace(-z_max, z_max, panels + 1)
        h = 2 * z_max / panels
        w = np.full(panels + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        self.weights = w * h / 3.0 * np.exp(-0.5 * self.z**2) / math.sqrt(2 * math.pi)
        self.shift = beta * 2.0 + math.log(p)
        self.beta = beta

    def risk(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.size)
        for start in range(0, x.size, 32):
            xs = x[start : start + 32, None]
            y = xs + self.z[None, :]
            s = expit(self.beta * y * y - self.shift)
            out[start : start + 32] = ((xs - y * s) ** 2) @ self.weights
        return out


def c_beta(p: int, beta: float, z_step: float = 1e-3, n_coarse: int = 512, x_tol: float = 1e-6, z_max: float = 12.0) -> float:
    """Numerical constant of the known-variance risk bound.

    sup over x in [0, 4 gamma] of E[(x - (x+z) s_beta(x+z))^2] / (min(x^2, gamma^2) + gamma^2/p),
    floored at 0.6. A coarse scan of ``n_coarse`` points locates the maximum,
    then golden-section search refines it on the neighbouring cells.
    """
    if p < 3:
        raise ValueError(f"need p >= 3, got {p}")
    g = gamma_beta(p, beta)
    g2 = g * g
    integrand = _CBetaIntegrand(p, beta, z_step, z_max)

    def ratio(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return integrand.risk(x) / (np.minimum(x * x, g2) + g2 / p)

    xs = np.linspace(0.0, 4.0 * g, n_coarse)
    vals = ratio(xs)
    i = int(np.argmax(vals))  # first maximum, i.e. ties go to the smaller x
    best = float(vals[i])
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n_coarse - 1)]
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = float(ratio(c)[0]), float(ratio(d)[0])
    while b - a > x_tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = float(ratio(c)[0])
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = float(ratio(d)[0])
    best = max(best, fc, fd)
    return max(best, 0.6)


def _require_orthonormal(collection: ModelCollection):
    if not collection.design.orthonormal:
        raise ValueError("this bound needs an orthonormal design")


def prop2_bound(mu, collection: ModelCollection, sigma2: float, beta: float, c_value: float | None = None) -> float:
    """Known-variance bound for the shrinker with alpha = 1:
    ||mu - Pi_* mu||^2 + c_beta(p) inf_m [||Pi_* mu - Pi_m mu||^2 + (2 + log(p)/beta)(|m|+1) sigma^2].
    """
    _require_orthonormal(collection)
    p = collection.d_star
    if p < 3:
        raise ValueError("need p >= 3")
    if not 0.25 <= beta <= 0.5:
        raise ValueError("beta must lie in [1/4, 1/2]")
    mu = as_vector(mu, collection.n)
    mu_star = collection.star.project(mu)
    g2 = gamma_beta(p, beta) ** 2
    terms = []
    for m, s in zip(collection.models, collection.subspaces()):
        r = mu_star - s.project(mu_star)
        terms.append(float(np.dot(r, r)) + g2 * (m.size + 1) * sigma2)
    c = c_beta(p, beta) if c_value is None else c_value
    return star_bias(mu, collection) + c * min(terms)


def appendixA2_bound(mu, collection: ModelCollection, sigma2: float, beta: float, b: float) -> float:
    """Unknown-variance bound for the shrinker with alpha = 1 and b >= 1:
    16 inf_m [||mu - mu_m||^2 + (b + log p)(|m|+1) sigma_bar^2 / beta + (2 + b + log p) sigma^2].
    """
    _require_orthonormal(collection)
    mu = as_vector(mu, collection.n)
    n, p = collection.n, collection.d_star
    if p < 3:
        raise ValueError(f"condition p >= 3 fails (p={p})")
    if not 0 < beta < 0.5:
        raise ValueError(f"condition 0 < beta < 1/2 fails (beta={beta})")
    if not check_orthonormal_conditions(beta, p, n):
        raise ValueError(
            f"condition p + log(p)/phi(2 beta) <= n fails: {p + math.log(p) / phi(2 * beta):.6g} > {n}"
        )
    if b < 1:
        raise ValueError(f"condition b >= 1 fails (b={b})")
    sb2 = sigma2 + star_bias(mu, collection) / (n - p)
    lp = math.log(p)
    bias = _bias_terms(mu, collection)
    sizes = np.array([m.size for m in collection.models])
    terms = bias + (b + lp) * (sizes + 1) * sb2 / beta + (2 + b + lp) * sigma2
    return 16.0 * float(np.min(terms))


def chi2_deviation_bound(N: int, a: float) -> float:
    """2 / ((1 - a)(N - 2)) exp(-N phi(a)), a bound on E[(a/X - 1)_+] for X ~ chi2_N / N."""
    if N <= 2:
        raise ValueError(f"need N > 2, got {N}")
    if not 0 < a < 1:
        raise ValueError(f"need 0 < a < 1, got {a}")
    return 2.0 / ((1.0 - a) * (N - 2)) * math.exp(-N * phi(a))


def chi2_lower_tail_bound(N: int, t: float) -> float:
    """exp(-N phi(1/t)) >= P(X <= 1/t) for t > 1."""
    if N < 1:
        raise ValueError("need N >= 1")
    if not t > 1:
        raise ValueError(f"need t > 1, got {t}")
    return math.exp(-N * phi(1.0 / t))
