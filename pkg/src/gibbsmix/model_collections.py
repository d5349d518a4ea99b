"""Builders for model collections, the Haar family and the Fourier design."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import (
    EUCLIDEAN,
    NORMALIZED,
    DegenerateResidualError,
    DesignFamily,
    Model,
    ModelCollection,
    as_vector,
)
from .shrinkage import ShrinkResult, shrink_unknown_variance

ENUMERATION_LIMIT = 10**6


def ordered_linear(design: DesignFamily, alpha: float) -> ModelCollection:
    """Nested models S_m = span of the first m columns, m = 0..p.

    pi_m = (e^a - 1)/(e^a - e^{-a p}) e^{-a m} and L_m = m / 2.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    p = design.p
    # (e^a - 1) / (e^a - e^{-a p}) rewritten with expm1 to stay accurate for small a
    norm = -math.expm1(-alpha) / -math.expm1(-alpha * (p + 1))
    models = [
        Model(id=m, column_indices=tuple(range(m)), prior=norm * math.exp(-alpha * m), weight_L=m / 2.0)
        for m in range(p + 1)
    ]
    return ModelCollection(tuple(models), tuple(range(p)), design)


def harmonic_H(q: int) -> float:
    """H_q = sum_{d=0}^{q} 1/(d+1)."""
    return math.fsum(1.0 / (d + 1) for d in range(q + 1))


def count_subsets(p: int, q: int) -> int:
    return sum(math.comb(p, d) for d in range(q + 1))


def unordered_linear(design: DesignFamily, q: int) -> ModelCollection:
    """All subsets of at most q columns, pi_m = [C(p,|m|) (|m|+1) H_q]^{-1}, L_m = |m|/2."""
    p = design.p
    if not 0 <= q <= p:
        raise ValueError(f"need 0 <= q <= p, got q={q}, p={p}")
    count = count_subsets(p, q)
    if count > ENUMERATION_LIMIT:
        raise ValueError(f"{count} models exceed the enumeration limit {ENUMERATION_LIMIT}")
    H = harmonic_H(q)
    models = []
    for d in range(q + 1):
        prior = 1.0 / (math.comb(p, d) * (d + 1) * H)
        for cols in itertools.combinations(range(p), d):
            models.append(Model(id=cols, column_indices=cols, prior=prior, weight_L=d / 2.0))
    return ModelCollection(tuple(models), tuple(range(p)), design)


def orthonormal_subsets(design: DesignFamily, alpha: float = 1.0, b: float = 0.0) -> ModelCollection:
    """All 2^p subsets with pi_m = (1 + p^-alpha)^-p p^(-alpha |m|) and L_m = b |m|."""
    p = design.p
    if 2**p > ENUMERATION_LIMIT:
        raise ValueError(f"2^{p} models exceed the enumeration limit {ENUMERATION_LIMIT}")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    log_norm = -p * math.log1p(p ** (-alpha))
    models = []
    for d in range(p + 1):
        prior = math.exp(log_norm - alpha * d * math.log(p))
        for cols in itertools.combinations(range(p), d):
            models.append(Model(id=cols, column_indices=cols, prior=prior, weight_L=b * d))
    return ModelCollection(tuple(models), tuple(range(p)), design)


def binomial_subsets(design: DesignFamily, b: float = 0.0) -> ModelCollection:
    """All 2^p subsets with pi_m = [(p+1) C(p,|m|)]^{-1} and L_m = b |m|."""
    p = design.p
    if 2**p > ENUMERATION_LIMIT:
        raise ValueError(f"2^{p} models exceed the enumeration limit {ENUMERATION_LIMIT}")
    models = []
    for d in range(p + 1):
        prior = 1.0 / ((p + 1) * math.comb(p, d))
        for cols in itertools.combinations(range(p), d):
            models.append(Model(id=cols, column_indices=cols, prior=prior, weight_L=b * d))
    return ModelCollection(tuple(models), tuple(range(p)), design)


def single_model(design: DesignFamily, indices) -> ModelCollection:
    """Collection made of one model, with S_* equal to that model."""
    cols = tuple(sorted(int(i) for i in indices))
    return ModelCollection((Model(id=cols, column_indices=cols, prior=1.0, weight_L=len(cols) / 2.0),), cols, design)


# ---------------------------------------------------------------------------
# designs


def standard_design(n: int, p: int) -> DesignFamily:
    """First p canonical basis vectors of R^n."""
    return DesignFamily(np.eye(n)[:, :p], EUCLIDEAN, orthonormal=True)


def random_orthonormal_design(n: int, p: int, seed: int) -> DesignFamily:
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((n, p)))
    Q = Q * np.sign(np.diag(R))
    return DesignFamily(Q, EUCLIDEAN, orthonormal=True)


def fourier_design(n: int = 60, n_freq: int = 20) -> DesignFamily:
    """Sine columns (frequencies 1..n_freq), a constant column, then cosines.

    With the default n_freq = 20 that is the 41-column family: columns
    0..19 are sqrt(2/n) sin(2 pi j x), column 20 is sqrt(1/n), columns 21..40
    are sqrt(2/n) cos(2 pi j x), sampled at x_i = i/n, i = 1..n.
    """
    if n < 2 * n_freq + 2:
        raise ValueError(f"need n >= {2 * n_freq + 2}, got {n}")
    x = np.arange(1, n + 1) / n
    j = np.arange(1, n_freq + 1)
    sines = np.sqrt(2.0 / n) * np.sin(2 * np.pi * np.outer(x, j))
    cosines = np.sqrt(2.0 / n) * np.cos(2 * np.pi * np.outer(x, j))
    const = np.full((n, 1), np.sqrt(1.0 / n))
    return DesignFamily(np.hstack([sines, const, cosines]), EUCLIDEAN, orthonormal=True)


# ---------------------------------------------------------------------------
# Haar


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    return n.bit_length() - 1


def haar_vector(n: int, j: int, k: int) -> np.ndarray:
    """Sampled Haar function v_{j,k}, unit norm under <.,.>_n.

    v_{0,0} is the constant 1. For j >= 1 the vector is 2^{(j-1)/2} on the
    block I+ = {1+(2k+1)2^{-j}n, ..., (2k+2)2^{-j}n} and minus that on
    I- = {1+2k 2^{-j}n, ..., (2k+1)2^{-j}n} (1-based positions).
    """
    v = np.zeros(n)
    if j == 0:
        if k != 0:
            raise ValueError("level 0 has the single index k = 0")
        v[:] = 1.0
        return v
    if not 0 <= k < 2 ** (j - 1):
        raise ValueError(f"k={k} out of range for level {j}")
    block = n >> j
    if block < 1:
        raise ValueError(f"level {j} too fine for n={n}")
    start = 2 * k * block
    scale = 2.0 ** ((j - 1) / 2)
    v[start : start + block] = -scale
    v[start + block : start + 2 * block] = scale
    return v


def haar_indices(max_level: int) -> list[tuple[int, int]]:
    """Lambda(0) = {(0,0)}, Lambda(j) = {j} x {0..2^{j-1}-1}, for j <= max_level."""
    idx = [(0, 0)]
    for j in range(1, max_level + 1):
        idx.extend((j, k) for k in range(2 ** (j - 1)))
    return idx


@dataclass(frozen=True, eq=False)
class HaarFamily:
    n: int
    J_star: int
    indices: tuple[tuple[int, int], ...]
    design: DesignFamily

    @property
    def J_n(self) -> int:
        return self.J_star + 1

    def vector(self, j: int, k: int) -> np.ndarray:
        return self.design.columns[:, self.indices.index((j, k))]

    @property
    def vectors(self) -> dict:
        return {jk: self.design.columns[:, i] for i, jk in enumerate(self.indices)}


def haar_basis(n: int, max_level: int) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Indices and (n, |indices|) matrix of Haar vectors up to ``max_level``.

    max_level = J_n gives the complete basis of R^n.
    """
    J_n = _log2_exact(n)
    if not 0 <= max_level <= J_n:
        raise ValueError(f"max_level must lie in [0, {J_n}], got {max_level}")
    idx = haar_indices(max_level)
    return idx, np.column_stack([haar_vector(n, j, k) for j, k in idx])


def haar_family(n: int) -> HaarFamily:
    """Haar vectors v_{j,k} on n = 2^{J_n} points for levels 0..J_n - 1 (n/2 vectors)."""
    J_n = _log2_exact(n)
    if J_n < 3:
        raise ValueError(f"n must be a power of two >= 8, got {n}")
    idx, cols = haar_basis(n, J_n - 1)
    design = DesignFamily(cols, NORMALIZED, orthonormal=True)
    return HaarFamily(n=n, J_star=J_n - 1, indices=tuple(idx), design=design)


def haar_collection(family: HaarFamily) -> ModelCollection:
    """All subsets of Lambda* with the product prior proportional to p^(-|m|) (p = n/2) and L_m = |m|.

    Only feasible for tiny n; the closed form in ``haar_estimator`` is the
    practical route.
    """
    return orthonormal_subsets(family.design, alpha=1.0, b=1.0)


@dataclass(frozen=True)
class HaarEstimate:
    result: ShrinkResult  # coefficients under <.,.>_n
    sigma2_hat: float
    mu_hat: np.ndarray


def haar_estimator(Y, beta: float, family: HaarFamily | None = None) -> HaarEstimate:
    """Closed-form Haar shrinkage with alpha = b = 1, p = n/2.

    Z_{j,k} = <Y, v_{j,k}>_n, sigma2_hat = 2 (<Y,Y>_n - sum Z^2) and
    c = exp(n beta Z^2 / s2) / (e n/2 + exp(n beta Z^2 / s2)).
    """
    Y = np.asarray(Y, dtype=float)
    n = Y.size
    if family is None:
        family = haar_family(n)
    Y = as_vector(Y, family.n)
    Z = family.design.coefficients(Y)
    # computed as the residual norm so it matches the projection route to rounding
    resid = Y - family.design.columns @ Z
    sigma2_hat = 2.0 * float(np.dot(resid, resid)) / n
    if not sigma2_hat > 0:
        raise DegenerateResidualError("degenerate residual: Y lies in the Haar span, sigma2_hat = 0")
    # in euclidean units the coefficient is sqrt(n) Z and the residual variance is unchanged
    eu = shrink_unknown_variance(np.sqrt(n) * Z, sigma2_hat, beta, alpha=1.0, b=1.0)
    res = ShrinkResult(
        coefficients=eu.coefficients,
        shrunk=eu.coefficients * Z,
        Z=Z,
        log_coefficients=eu.log_coefficients,
        log_complements=eu.log_complements,
    )
    mu_hat = family.design.columns @ res.shrunk
    return HaarEstimate(result=res, sigma2_hat=sigma2_hat, mu_hat=mu_hat)


# ---------------------------------------------------------------------------
# Besov compression family, described but never enumerated


@dataclass(frozen=True)
class BesovDescriptor:
    J: int
    dim_bound: float
    L_m: float
    log_pi_m: float
    cardinality_log: float
    block_sizes: tuple[int, ...]


def besov_j_star(n: int, kappa: float) -> int:
    """J_* = floor(log(kappa n / 2) / log 2)."""
    if not 0 < kappa < 1:
        raise ValueError(f"kappa must lie in (0, 1), got {kappa}")
    return int(math.floor(math.log(kappa * n / 2) / math.log(2)))


def log_binom(N: int, k: int) -> float:
    return float(gammaln(N + 1) - gammaln(k + 1) - gammaln(N - k + 1))


def besov_descriptors(n: int, kappa: float, J_star: int | None = None, J_values=None) -> list[BesovDescriptor]:
    """Per-J dimension bound, prior mass and size of the compression family M_J.

    Level j <= J-1 is kept whole; level J <= j <= J_* keeps
    floor(2^J / (j-J+1)^3) of its 2^j coefficients. The prior of a model in
    M_J is [2^J (1 - 2^{-J_*}) |M_J|]^{-1}, so M_J receives mass
    2^{-J} / (1 - 2^{-J_*}) and the masses sum to 1 over J = 1..J_*.
    L_m = 1.1 2^J.
    """
    if J_star is None:
        J_star = besov_j_star(n, kappa)
    if J_star < 1:
        raise ValueError(f"J_* = {J_star} leaves no admissible J")
    if J_values is None:
        J_values = range(1, J_star + 1)
    log_norm = math.log1p(-(2.0 ** -J_star))
    out = []
    for J in J_values:
        if not 1 <= J <= J_star:
            raise ValueError(f"J={J} outside [1, {J_star}]")
        sizes = tuple(2**J // (j - J + 1) ** 3 for j in range(J, J_star + 1))
        card_log = math.fsum(log_binom(2**j, s) for j, s in zip(range(J, J_star + 1), sizes))
        dim = (2**J - 1) + sum(sizes)
        log_pi = -(J * math.log(2) + log_norm + card_log)
        out.append(
            BesovDescriptor(
                J=J,
                dim_bound=float(dim),
                L_m=1.1 * 2**J,
                log_pi_m=log_pi,
                cardinality_log=card_log,
                block_sizes=sizes,
            )
        )
    return out


def besov_total_mass(descriptors: list[BesovDescriptor]) -> float:
    """sum_J |M_J| pi_J, evaluated in log space."""
    return math.fsum(math.exp(d.cardinality_log + d.log_pi_m) for d in descriptors)
