"""Haar approximation of sampled functions of bounded variation.

Coefficients are taken against the complete Haar basis on n = 2^{J_n}
points (levels 0..J_n) with the empirical product <x, y>_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model_collections import _log2_exact, haar_basis

# sum_{p >= 1} p^3 2^{-p/2 + 1}, summed until terms drop below 1e-16
BM_CONSTANT = 831.7787873376899


def bm_constant(tol: float = 1e-16) -> float:
    total, p = 0.0, 1
    while True:
        term = p**3 * 2.0 ** (-p / 2 + 1)
        total += term
        if p > 20 and term < tol * total:
            return total
        p += 1


@dataclass(frozen=True)
class SampledFunction:
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1:
            raise ValueError("samples must be 1-D")
        _log2_exact(s.size)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def J_n(self) -> int:
        return _log2_exact(self.n)

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(np.diff(self.samples))))

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray], n: int) -> "SampledFunction":
        """Sample f on the dyadic grid x_i = (i - 1)/n, i = 1..n."""
        return cls(np.asarray(f(dyadic_grid(n)), dtype=float))


def dyadic_grid(n: int) -> np.ndarray:
    return np.arange(n) / n


def norm_n(v: np.ndarray) -> float:
    """||v||_n = sqrt(<v, v>_n)."""
    v = np.asarray(v, dtype=float)
    return math.sqrt(float(np.dot(v, v)) / v.size)


class _Basis:
    _cache: dict = {}

    @classmethod
    def get(cls, n: int):
        if n not in cls._cache:
            idx, B = haar_basis(n, _log2_exact(n))
            B.setflags(write=False)
            cls._cache[n] = (idx, B)
        return cls._cache[n]


def haar_coefficients(f: SampledFunction) -> dict[tuple[int, int], float]:
    """c_{j,k} = <f, v_{j,k}>_n for 0 <= j <= J_n."""
    idx, B = _Basis.get(f.n)
    c = f.samples @ B / f.n
    return {jk: float(v) for jk, v in zip(idx, c)}


def _rebuild(n: int, coeffs: dict) -> SampledFunction:
    idx, B = _Basis.get(n)
    vec = np.array([coeffs.get(jk, 0.0) for jk in idx])
    return SampledFunction(B @ vec)


def linear_approx(f: SampledFunction, J: int) -> SampledFunction:
    """Keep every coefficient with level j <= J."""
    if not 0 <= J <= f.J_n:
        raise ValueError(f"J must lie in [0, {f.J_n}], got {J}")
    c = haar_coefficients(f)
    return _rebuild(f.n, {jk: v for jk, v in c.items() if jk[0] <= J})


def keep_count(j: int, J: int) -> int:
    """K_{j,J} = floor((j - J + 1)^{-3} 2^{J-2}), computed exactly."""
    if J < 2:
        # 2^{J-2} = 1/2 for J = 1, so the floor is 0 at every level
        return 0
    return 2 ** (J - 2) // (j - J + 1) ** 3


def compressed_selection(f: SampledFunction, J: int) -> dict[tuple[int, int], float]:
    """Coefficients kept by the compressed approximant.

    Levels below J are kept whole. On each level J <= j <= J_n the K_{j,J}
    largest |c_{j,k}| are kept; ties go to the smaller k.
    """
    if not 1 <= J <= f.J_n:
        raise ValueError(f"J must lie in [1, {f.J_n}], got {J}")
    c = haar_coefficients(f)
    kept = {jk: v for jk, v in c.items() if jk[0] <= J - 1}
    for j in range(J, f.J_n + 1):
        K = keep_count(j, J)
        if K == 0:
            continue
        level = [(k, c[(j, k)]) for k in range(2 ** (j - 1))]
        level.sort(key=lambda kv: (-abs(kv[1]), kv[0]))
        kept.update(((j, k), v) for k, v in level[:K])
    return kept


def compressed_approx(f: SampledFunction, J: int) -> SampledFunction:
    return _rebuild(f.n, compressed_selection(f, J))


def level_l1(f: SampledFunction) -> dict[int, float]:
    """sum_k |c_{j,k}| for j = 1..J_n."""
    c = haar_coefficients(f)
    out = {j: 0.0 for j in range(1, f.J_n + 1)}
    for (j, _), v in c.items():
        if j >= 1:
            out[j] += abs(v)
    return out


def bv_coefficient_bound_check(f: SampledFunction) -> dict[int, bool]:
    """Per level j >= 1: sum_k |c_{j,k}| <= 2^{-(j+1)/2} V(f)."""
    V = f.total_variation
    # the right-hand side can be exact (monotone f): allow rounding of the left sum
    return {j: s <= 2.0 ** (-(j + 1) / 2) * V + 1e-12 * max(V, 1.0) for j, s in level_l1(f).items()}


def linear_error_bound(V: float, J: int) -> float:
    return 2.0 * V * 2.0 ** (-J / 2)


def compressed_error_bound(V: float, J: int) -> float:
    return BM_CONSTANT * V * 2.0 ** (-J)


# named test functions on [0, 1)

def identity(x):
    return np.asarray(x, dtype=float)


def step(x, at: float = 0.3, height: float = 1.0):
    return np.where(np.asarray(x) >= at, height, 0.0)


def staircase(x):
    """Four jumps of mixed sign and size."""
    x = np.asarray(x, dtype=float)
    return (
        1.0 * (x >= 0.15) - 0.5 * (x >= 0.4) + 2.0 * (x >= 0.55) + 0.75 * (x >= 0.9)
    )


TEST_FUNCTIONS = {"identity": identity, "step": step, "staircase": staircase}
