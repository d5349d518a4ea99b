import math

import pytest
from hypothesis import given, strategies as st

from gibbsmix.tuning import (
    APPENDIX_A2,
    REMARK4,
    beta_max_orthonormal,
    beta_max_theorem1,
    check_orthonormal_conditions,
    check_theorem1_conditions,
    phi,
    phi_inverse,
    tuning_report,
)

# reference values from 40-digit evaluations with mpmath
PHI_HALF = 0.09657359027997265
BETA_MAX_1024_512 = 0.19614909195708662
BETA_MAX_32_24 = 0.10020431935010446
REMARK4_60_41 = 0.17742714270577017


def test_phi_reference():
    assert phi(0.5) == pytest.approx(PHI_HALF, rel=1e-14)
    with pytest.raises(ValueError):
        phi(1.0)
    with pytest.raises(ValueError):
        phi(0.0)


def test_phi_inverse_reference():
    assert phi_inverse(0.0965735903) == pytest.approx(0.5, abs=1e-9)
    assert phi_inverse(0.0) == 1.0
    with pytest.raises(ValueError):
        phi_inverse(-1.0)


@given(st.floats(1e-9, 1 - 1e-9))
def test_phi_inverse_round_trip(x):
    y = phi(x)
    r = phi_inverse(y)
    assert r == pytest.approx(x, rel=1e-6)
    assert r == 1.0 or phi(r) >= y


@given(st.floats(1e-6, 0.999), st.floats(1e-6, 0.999))
def test_phi_decreasing(a, b):
    if a < b:
        assert phi(a) >= phi(b)


def test_beta_max_general_reference():
    assert beta_max_theorem1(1024, 512) == pytest.approx(BETA_MAX_1024_512, rel=1e-12)
    assert beta_max_theorem1(32, 24) == pytest.approx(BETA_MAX_32_24, rel=1e-12)
    with pytest.raises(ValueError):
        beta_max_theorem1(32, 2)


@given(st.integers(3, 10**6), st.integers(3, 10**6))
def test_beta_max_general_admissible(n, N):
    beta = beta_max_theorem1(n, N)
    assert 0 < beta < 0.25
    assert check_theorem1_conditions(beta, N, n)


def test_general_condition_boundary():
    # 2 + log(60)/phi(4 * 0.0775) = 19.0178..., so N_* = 19 just fails
    assert not check_theorem1_conditions(0.0775, 19, 60)
    assert check_theorem1_conditions(0.0775, 20, 60)
    assert not check_theorem1_conditions(0.25, 10**9, 60)


def test_beta_orthonormal_rules():
    assert beta_max_orthonormal(60, 41, REMARK4) == pytest.approx(REMARK4_60_41, rel=1e-12)
    b = beta_max_orthonormal(60, 41, APPENDIX_A2)
    assert check_orthonormal_conditions(b, 41, 60)
    assert not check_orthonormal_conditions(math.nextafter(b, 1.0) * (1 + 1e-12), 41, 60)
    with pytest.raises(ValueError):
        beta_max_orthonormal(60, 2)
    with pytest.raises(ValueError):
        beta_max_orthonormal(60, 41, "nope")


def test_tuning_report_user_beta():
    rep = tuning_report(60, 19, beta=1 / 3, p=41)
    assert rep.beta_rule == "user" and rep.conditions_ok is False
    rep = tuning_report(1024, 512)
    assert rep.conditions_ok and rep.beta == beta_max_theorem1(1024, 512)
