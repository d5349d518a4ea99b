"""Designs, models, model collections and least-squares projections.

Column indices are 0-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.linalg

EUCLIDEAN = "euclidean"
NORMALIZED = "normalized"

PRIOR_TOL = 1e-10
ORTHO_TOL = 1e-10
# relative threshold on |R_ii| for declaring a selected column dependent
RANK_RTOL = 1e-10


class DegenerateResidualError(ValueError):
    """Raised when Y lies in S_* so the residual variance estimate is 0."""


def as_vector(values: Iterable[float], n: int | None = None) -> np.ndarray:
    """Validate and return a finite 1-D float array (length >= 3)."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size < 3:
        raise ValueError(f"vectors need length n >= 3, got {v.size}")
    if n is not None and v.size != n:
        raise ValueError(f"expected length {n}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


@dataclass(frozen=True, eq=False)
class DesignFamily:
    """Ordered family of p column vectors in R^n.

    ``inner_product`` selects between the euclidean product and the
    normalized one <x, y>_n = (1/n) sum x_i y_i. Projections do not depend on
    the choice (rescaling an inner product leaves orthogonal projectors
    unchanged); coefficients and norms reported by helpers do.
    """

    columns: np.ndarray
    inner_product: str = EUCLIDEAN
    orthonormal: bool = False

    def __post_init__(self):
        cols = np.array(self.columns, dtype=float)
        if cols.ndim != 2:
            raise ValueError("columns must be a 2-D array of shape (n, p)")
        n, p = cols.shape
        if n < 3:
            raise ValueError(f"n must be >= 3, got {n}")
        if p >= n:
            raise ValueError(f"need p < n, got p={p}, n={n}")
        if not np.all(np.isfinite(cols)):
            raise ValueError("design has non-finite entries")
        if self.inner_product not in (EUCLIDEAN, NORMALIZED):
            raise ValueError(f"unknown inner product {self.inner_product!r}")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)
        if self.orthonormal:
            dev = gram_check(self)
            if dev > ORTHO_TOL:
                raise ValueError(
                    f"design flagged orthonormal but Gram deviation is {dev:.3e}"
                )

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def p(self) -> int:
        return self.columns.shape[1]

    def inner(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Inner product along the last axis under the declared convention."""
        s = np.sum(np.asarray(x) * np.asarray(y), axis=-1)
        return s / self.n if self.inner_product == NORMALIZED else s

    def coefficients(self, Y: np.ndarray) -> np.ndarray:
        """<Y, v_j> for every column j (Y may be a batch of rows)."""
        c = np.asarray(Y, dtype=float) @ self.columns
        return c / self.n if self.inner_product == NORMALIZED else c

    def euclidean_scale(self) -> float:
        """Factor turning declared-product coefficients into euclidean ones
        for the unit-norm columns v_j / ||v_j||."""
        return np.sqrt(self.n) if self.inner_product == NORMALIZED else 1.0


def gram_check(design: DesignFamily) -> float:
    """Max |G_ij - delta_ij| of the Gram matrix under the declared product."""
    X = design.columns
    G = X.T @ X
    if design.inner_product == NORMALIZED:
        G = G / design.n
    return float(np.max(np.abs(G - np.eye(design.p)))) if design.p else 0.0


@dataclass(frozen=True)
class Model:
    id: Hashable
    column_indices: tuple[int, ...]
    prior: float
    weight_L: float = 0.0

    def __post_init__(self):
        idx = tuple(int(i) for i in self.column_indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"model {self.id!r} has duplicate column indices")
        object.__setattr__(self, "column_indices", tuple(sorted(idx)))
        if not (0.0 < self.prior <= 1.0):
            raise ValueError(f"model {self.id!r} prior must lie in (0, 1], got {self.prior}")
        if self.weight_L < 0:
            raise ValueError(f"model {self.id!r} has negative L_m")

    @property
    def size(self) -> int:
        return len(self.column_indices)


@dataclass(frozen=True)
class Subspace:
    """Orthonormal (euclidean) basis of the span of some design columns."""

    basis: np.ndarray  # shape (n, rank)
    rank: int
    rank_deficient: bool

    def project(self, Y: np.ndarray) -> np.ndarray:
        Y = np.asarray(Y, dtype=float)
        if self.rank == 0:
            return np.zeros_like(Y)
        return (Y @ self.basis) @ self.basis.T

    def sq_norm_of_projection(self, Y: np.ndarray) -> np.ndarray:
        """||Pi Y||^2 (euclidean), batched over leading axes."""
        if self.rank == 0:
            return np.zeros(np.shape(Y)[:-1])
        c = np.asarray(Y, dtype=float) @ self.basis
        return np.sum(c * c, axis=-1)


def span_of(columns: np.ndarray, indices: Sequence[int]) -> Subspace:
    """Orthonormal basis of span{columns[:, i] : i in indices}.

    Uses column-pivoted QR; columns whose pivot falls below RANK_RTOL times
    the leading pivot are dropped, which is the pseudo-inverse projector.
    """
    n = columns.shape[0]
    if len(indices) == 0:
        return Subspace(np.zeros((n, 0)), 0, False)
    A = columns[:, list(indices)]
    Q, R, _ = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return Subspace(np.zeros((n, 0)), 0, True)
    rank = int(np.sum(diag > RANK_RTOL * diag[0]))
    basis = np.ascontiguousarray(Q[:, :rank])
    basis.setflags(write=False)
    return Subspace(basis, rank, rank < len(indices))


@dataclass(frozen=True, eq=False)
class ModelCollection:
    """Models S_m, all nested in S_* = span of ``star_indices``."""

    models: tuple[Model, ...]
    star_indices: tuple[int, ...]
    design: DesignFamily
    _subspaces: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ValueError("empty model collection")
        object.__setattr__(self, "models", models)
        star = tuple(sorted(set(int(i) for i in self.star_indices)))
        object.__setattr__(self, "star_indices", star)
        p = self.design.p
        if any(i < 0 or i >= p for i in star):
            raise ValueError(f"star indices out of range for p={p}")
        ids = [m.id for m in models]
        if len(set(ids)) != len(ids):
            raise ValueError("model ids must be unique")
        total = float(np.sum([m.prior for m in models]))
        if abs(total - 1.0) > PRIOR_TOL:
            raise ValueError(f"priors sum to {total!r}, not 1 within {PRIOR_TOL}")
        star_set = set(star)
        for m in models:
            if not set(m.column_indices) <= star_set:
                raise ValueError(f"model {m.id!r} is not contained in S_*")
        if self.d_star >= self.design.n:
            raise ValueError(f"d_* = {self.d_star} must be < n = {self.design.n}")

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    @property
    def n(self) -> int:
        return self.design.n

    @cached_property
    def star(self) -> Subspace:
        return span_of(self.design.columns, self.star_indices)

    @property
    def d_star(self) -> int:
        return self.star.rank

    @property
    def N_star(self) -> int:
        return self.n - self.d_star

    @cached_property
    def index(self) -> dict:
        return {m.id: i for i, m in enumerate(self.models)}

    def subspace(self, model: Model) -> Subspace:
        if model.id not in self.index or self.models[self.index[model.id]] != model:
            raise ValueError(f"model {model.id!r} does not belong to this collection")
        sub = self._subspaces.get(model.id)
        if sub is None:
            sub = span_of(self.design.columns, model.column_indices)
            self._subspaces[model.id] = sub
        return sub

    def subspaces(self) -> list[Subspace]:
        return [self.subspace(m) for m in self.models]

    def dims(self) -> np.ndarray:
        return np.array([s.rank for s in self.subspaces()], dtype=int)

    def log_priors(self) -> np.ndarray:
        return np.log(np.array([m.prior for m in self.models]))

    def rank_deficient_models(self) -> list:
        return [m.id for m, s in zip(self.models, self.subspaces()) if s.rank_deficient]


def project(Y, model: Model, collection: ModelCollection) -> np.ndarray:
    """Least-squares estimator Pi_{S_m} Y."""
    Y = as_vector(Y, collection.n)
    return collection.subspace(model).project(Y)


def project_star(Y, collection: ModelCollection) -> np.ndarray:
    return collection.star.project(np.asarray(Y, dtype=float))
