"""Coordinatewise shrinkage estimators for orthonormal designs.

When the models are all subsets of an orthonormal family, the Gibbs mixture
collapses to multiplying each empirical coefficient Z_j = <Y, v_j> by a
factor c_j in (0, 1). Each function here returns those factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

MAX_SIMPSON_PANELS = 2**14


@dataclass(frozen=True)
class ShrinkResult:
    """Factors c_j, shrunk coefficients c_j Z_j and the raw Z_j.

    ``log_coefficients`` and ``log_complements`` hold log c_j and
    log(1 - c_j) when the logistic form is available; c_j can round to 1.0
    in double precision while log(1 - c_j) stays finite.
    """

    coefficients: np.ndarray
    shrunk: np.ndarray
    Z: np.ndarray
    log_coefficients: np.ndarray | None = None
    log_complements: np.ndarray | None = None

    def strictly_interior(self) -> np.ndarray:
        """Per coordinate: 0 < c_j < 1 holds exactly (not just after rounding)."""
        if self.log_coefficients is None:
            c = self.coefficients
            return (c > 0) & (c < 1)
        return np.isfinite(self.log_coefficients) & np.isfinite(self.log_complements)


def _as_coeffs(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 1 or Z.size < 1:
        raise ValueError("Z must be a non-empty 1-D sequence")
    return Z


def _logistic_shrink(Z: np.ndarray, scaled_sq: np.ndarray, log_threshold: float) -> ShrinkResult:
    # c = e^s / (T + e^s) = 1 / (1 + exp(log T - s)), no overflow for large s
    x = scaled_sq - log_threshold
    c = expit(x)
    return ShrinkResult(
        coefficients=c, shrunk=c * Z, Z=Z, log_coefficients=log_expit(x), log_complements=log_expit(-x)
    )


def shrink_unknown_variance(Z, sigma2_hat: float, beta: float, alpha: float = 1.0, b: float = 1.0) -> ShrinkResult:
    """c_j = exp(beta Z_j^2 / s2) / (p^alpha e^b + exp(beta Z_j^2 / s2)).

    This is the mixture over all subsets with priors proportional to
    p^(-alpha |m|) and L_m = b |m|, with s2 the residual variance estimate.
    """
    Z = _as_coeffs(Z)
    if not sigma2_hat > 0:
        raise ValueError(f"sigma2_hat must be positive, got {sigma2_hat}")
    if beta <= 0 or alpha <= 0 or b < 0:
        raise ValueError("need beta > 0, alpha > 0 and b >= 0")
    log_thr = alpha * math.log(Z.size) + b
    return _logistic_shrink(Z, beta * Z * Z / sigma2_hat, log_thr)


def shrink_known_variance(Z, sigma2: float, beta: float, alpha: float = 1.0) -> ShrinkResult:
    """Known-variance weights: the threshold is p^alpha e^(2 beta)."""
    Z = _as_coeffs(Z)
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    if beta <= 0 or alpha <= 0:
        raise ValueError("need beta > 0 and alpha > 0")
    log_thr = alpha * math.log(Z.size) + 2.0 * beta
    return _logistic_shrink(Z, beta * Z * Z / sigma2, log_thr)


def s_beta(z, p: int, beta: float, lam: float = 2.0) -> np.ndarray:
    """e^{beta z^2} / (p e^{beta lam} + e^{beta z^2}); lam = 2 is the known-variance shrinker."""
    z = np.asarray(z, dtype=float)
    return expit(beta * (z * z - lam) - math.log(p))


def _simpson(values: np.ndarray, h: float) -> np.ndarray:
    # composite Simpson along the last axis, even number of panels
    return h / 3.0 * (
        values[..., 0] + values[..., -1]
        + 4.0 * values[..., 1:-1:2].sum(axis=-1)
        + 2.0 * values[..., 2:-1:2].sum(axis=-1)
    )


def shrink_binomial_prior(Z, sigma2_hat: float, beta: float, b: float = 1.0, rtol: float = 1e-9) -> ShrinkResult:
    """Coefficients for the prior pi_m = [(p+1) C(p, |m|)]^{-1} with L_m = b |m|.

    c_j = int_0^1 q prod_{k != j} g_k(q) dq / int_0^1 prod_k g_k(q) dq with
    g_k(q) = q + (1 - q) exp(-beta Z_k^2 / s2 + b). The products are formed in
    log space and the panel count is doubled until every ratio moves by less
    than ``rtol`` (relative), up to 2^14 panels.
    """
    Z = _as_coeffs(Z)
    if not sigma2_hat > 0:
        raise ValueError(f"sigma2_hat must be positive, got {sigma2_hat}")
    if beta <= 0 or b < 0:
        raise ValueError("need beta > 0 and b >= 0")
    t = b - beta * Z * Z / sigma2_hat

    def ratios(panels: int) -> np.ndarray:
        q = np.linspace(0.0, 1.0, panels + 1)
        # log g_k(q) = log(q + (1-q) e^t) = logaddexp(log q, log(1-q) + t)
        with np.errstate(divide="ignore"):
            lq = np.log(q)
            l1q = np.log1p(-q)
        log_g = np.logaddexp(lq[None, :], l1q[None, :] + t[:, None])  # (p, panels+1)
        log_all = log_g.sum(axis=0)
        shift = log_all.max()
        den = _simpson(np.exp(log_all - shift), 1.0 / panels)
        with np.errstate(invalid="ignore"):
            # q * prod_{k != j} g_k = q * prod_k g_k / g_j; at q = 0 the term is 0
            log_num = lq[None, :] + log_all[None, :] - log_g
        num_vals = np.where(np.isfinite(log_num), np.exp(log_num - shift), 0.0)
        return _simpson(num_vals, 1.0 / panels) / den

    panels = 64
    prev = ratios(panels)
    while panels < MAX_SIMPSON_PANELS:
        panels *= 2
        cur = ratios(panels)
        done = np.all(np.abs(cur - prev) <= rtol * np.abs(cur))
        prev = cur
        if done:
            break
    c = prev
    return ShrinkResult(coefficients=c, shrunk=c * Z, Z=Z)
