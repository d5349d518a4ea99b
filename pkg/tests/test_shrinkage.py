import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gibbsmix import model_collections as mc
from gibbsmix.mixer import KNOWN, PER_MODEL, MixConfig, mix
from gibbsmix.shrinkage import s_beta, shrink_binomial_prior, shrink_known_variance, shrink_unknown_variance

# extended-precision reference: p=41, alpha=b=1, beta=1/3, Z^2/s2 = 20
C_REF = 0.8757836845683102


def test_reference_coefficient():
    Z = np.zeros(41)
    Z[0] = math.sqrt(20.0)
    res = shrink_unknown_variance(Z, 1.0, 1 / 3, 1.0, 1.0)
    assert res.coefficients[0] == pytest.approx(C_REF, rel=1e-14)
    assert res.shrunk[0] == pytest.approx(C_REF * Z[0], rel=1e-14)


def test_saturated_coefficients_stay_interior():
    res = shrink_unknown_variance(np.array([0.0, 1.0, 1e3]), 1e-3, 0.3)
    assert res.coefficients[-1] == 1.0  # rounds in double precision
    assert np.all(res.strictly_interior())


@settings(max_examples=80)
@given(
    arrays(float, st.integers(1, 30), elements=st.floats(-50, 50)),
    st.floats(1e-3, 1e3),
    st.floats(0.01, 2.0),
    st.floats(0.1, 3.0),
    st.floats(0.0, 3.0),
)
def test_coefficients_in_unit_interval_and_monotone(Z, s2, beta, alpha, b):
    res = shrink_unknown_variance(Z, s2, beta, alpha, b)
    c = res.coefficients
    assert np.all((c >= 0) & (c <= 1)) and np.all(res.strictly_interior())
    order = np.argsort(np.abs(Z), kind="stable")
    assert np.all(np.diff(c[order]) >= -1e-15)
    assert np.all(np.abs(res.shrunk) <= np.abs(Z))


def test_input_validation():
    with pytest.raises(ValueError):
        shrink_unknown_variance([1.0], 0.0, 0.2)
    with pytest.raises(ValueError):
        shrink_unknown_variance([], 1.0, 0.2)
    with pytest.raises(ValueError):
        shrink_known_variance([1.0], -1.0, 0.2)


def test_known_variance_matches_enumerated_mixture():
    gen = np.random.default_rng(3)
    d = mc.random_orthonormal_design(12, 4, seed=2)
    coll = mc.orthonormal_subsets(d, alpha=1.0)
    for _ in range(5):
        Y = gen.standard_normal(12) * 2
        cfg = MixConfig(beta=0.3, variance_mode=KNOWN, sigma2=1.5, L_rule=PER_MODEL)
        res = mix(Y, coll, cfg)
        Z = d.columns.T @ Y
        ref = d.columns @ shrink_known_variance(Z, 1.5, 0.3).shrunk
        assert np.max(np.abs(res.mu_hat - ref)) <= 1e-10


def test_s_beta_is_known_variance_factor():
    z = np.linspace(-5, 5, 11)
    c = shrink_known_variance(z, 1.0, 0.4).coefficients
    assert np.allclose(s_beta(z, z.size, 0.4), c, rtol=1e-14)


def test_binomial_prior_p1_closed_form():
    Z = np.array([1.7])
    c = shrink_binomial_prior(Z, 0.8, 0.3, b=1.0).coefficients[0]
    assert c == pytest.approx(1.0 / (1.0 + math.exp(1.0 - 0.3 * 1.7**2 / 0.8)), rel=1e-9)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_binomial_prior_matches_enumerated_mixture(seed):
    gen = np.random.default_rng(seed)
    d = mc.standard_design(9, 5)
    coll = mc.binomial_subsets(d, b=1.0)
    Y = gen.standard_normal(9) * np.r_[gen.uniform(0.5, 4, 5), np.ones(4)]
    res = mix(Y, coll, MixConfig(beta=0.25, L_rule=PER_MODEL))
    ref = shrink_binomial_prior(Y[:5], res.sigma2_hat, 0.25, b=1.0).shrunk
    assert np.max(np.abs(res.mu_hat[:5] - ref)) <= 1e-8
