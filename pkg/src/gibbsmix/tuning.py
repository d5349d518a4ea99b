"""The function phi(x) = (x - 1 - log x)/2, its inverse, and admissible beta."""

from __future__ import annotations

import math
from dataclasses import dataclass

GENERAL = "general"
ORTHONORMAL = "orthonormal"
USER = "user"

REMARK4 = "remark4"
APPENDIX_A2 = "appendixA2"

_BRACKET_LO = 1e-15
_MAX_ITER = 200


def phi(x: float) -> float:
    """(x - 1 - log x) / 2, positive and strictly decreasing on (0, 1)."""
    if not (0.0 < x < 1.0):
        raise ValueError(f"phi is defined on (0, 1), got {x}")
    # log1p keeps precision close to x = 1
    return 0.5 * (x - 1.0 - math.log1p(x - 1.0))


def _phi_closed(x: float) -> float:
    # phi extended by continuity to x = 1
    return 0.0 if x == 1.0 else phi(x)


def phi_inverse(y: float) -> float:
    """Unique x in (0, 1] with phi(x) = y.

    Bisection on [1e-15, 1], run until the bracket stops shrinking in
    floating point (at most 200 halvings), so small roots keep full relative
    precision. The returned point is the left end of the final bracket, so
    phi(x) >= y always holds; quantities derived from it stay on the
    admissible side of the inequalities that use them.
    """
    if y < 0 or math.isnan(y):
        raise ValueError(f"phi_inverse needs y >= 0, got {y}")
    if y == 0.0:
        return 1.0
    lo, hi = _BRACKET_LO, 1.0
    if phi(lo) < y:
        raise ValueError(f"y = {y} exceeds phi on the bisection bracket")
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _phi_closed(mid) >= y:
            lo = mid
        else:
            hi = mid
    return lo


def check_theorem1_conditions(beta: float, N_star: int, n: int) -> bool:
    """beta < 1/4 and N_* >= 2 + log(n) / phi(4 beta)."""
    if not (0.0 < beta < 0.25):
        return False
    return N_star >= 2.0 + math.log(n) / phi(4.0 * beta)


def beta_max_theorem1(n: int, N_star: int) -> float:
    """Largest beta allowed by the general risk bound: phi^{-1}(log n / (N_* - 2)) / 4."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if N_star <= 2:
        raise ValueError(f"N_star must exceed 2, got {N_star}")
    beta = 0.25 * phi_inverse(math.log(n) / (N_star - 2))
    if beta >= 0.25:
        beta = math.nextafter(0.25, 0.0)
    # guard against last-ulp rounding in the predicate
    while not check_theorem1_conditions(beta, N_star, n):
        beta = math.nextafter(beta, 0.0)
    return beta


def check_orthonormal_conditions(beta: float, p: int, n: int) -> bool:
    """p >= 3, 0 < beta < 1/2 and p + log(p)/phi(2 beta) <= n."""
    if p < 3 or not (0.0 < beta < 0.5):
        return False
    return p + math.log(p) / phi(2.0 * beta) <= n


def beta_max_orthonormal(n: int, p: int, rule: str = REMARK4) -> float:
    """Admissible beta for the closed-form estimator with unknown variance.

    ``remark4`` gives phi^{-1}(log p / (n - p)) / 2. ``appendixA2`` gives the
    largest beta < 1/2 with p + log(p)/phi(2 beta) <= n, found by bisection.
    """
    if n <= p:
        raise ValueError(f"need n > p, got n={n}, p={p}")
    if p < 3:
        raise ValueError(f"need p >= 3, got {p}")
    if rule == REMARK4:
        return 0.5 * phi_inverse(math.log(p) / (n - p))
    if rule == APPENDIX_A2:
        # the predicate is monotone in beta: phi(2 beta) decreases as beta grows
        lo, hi = 0.5 * _BRACKET_LO, 0.5
        if not check_orthonormal_conditions(lo, p, n):
            raise ValueError(f"no admissible beta for n={n}, p={p}")
        for _ in range(_MAX_ITER):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if check_orthonormal_conditions(mid, p, n):
                lo = mid
            else:
                hi = mid
        return lo
    raise ValueError(f"unknown rule {rule!r}")


@dataclass(frozen=True)
class TuningReport:
    beta: float
    beta_rule: str
    conditions_ok: bool
    phi_value: float


def tuning_report(
    n: int,
    N_star: int,
    beta: float | None = None,
    rule: str = GENERAL,
    p: int | None = None,
) -> TuningReport:
    """Pick beta by ``rule`` (or take the user's) and evaluate the matching conditions.

    A user-supplied beta is kept even when the conditions fail; the report
    then carries ``conditions_ok=False``.
    """
    if beta is not None:
        rule = USER
    if rule == GENERAL:
        beta = beta_max_theorem1(n, N_star)
    elif rule == ORTHONORMAL:
        if p is None:
            raise ValueError("the orthonormal rule needs p")
        beta = beta_max_orthonormal(n, p, APPENDIX_A2)
    elif rule != USER:
        raise ValueError(f"unknown beta rule {rule!r}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")

    if rule == ORTHONORMAL or (rule == USER and p is not None):
        ok = check_orthonormal_conditions(beta, p, n)
        phi_value = phi(2 * beta) if 2 * beta < 1 else 0.0
    else:
        ok = N_star > 2 and check_theorem1_conditions(beta, N_star, n)
        phi_value = phi(4 * beta) if 4 * beta < 1 else 0.0
    return TuningReport(beta=beta, beta_rule=rule, conditions_ok=ok, phi_value=phi_value)
