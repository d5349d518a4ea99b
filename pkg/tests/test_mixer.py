import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gibbsmix import model_collections as mc
from gibbsmix.core import DegenerateResidualError, Model, ModelCollection
from gibbsmix.mixer import (
    PER_MODEL,
    MixConfig,
    alternative_log_weights,
    mix,
    mix_batch,
    residual_variance,
)
from gibbsmix.shrinkage import shrink_unknown_variance


def test_residual_variance_example():
    coll = mc.single_model(mc.standard_design(4, 2), (0, 1))
    assert residual_variance([1.0, 2.0, 3.0, 4.0], coll) == pytest.approx(12.5)
    assert residual_variance([1.0, 2.0, 0.0, 0.0], coll) == 0.0
    assert residual_variance([0.0, 0.0, 3.0, 0.0], coll) == pytest.approx(4.5)


def test_degenerate_residual_raises():
    coll = mc.orthonormal_subsets(mc.standard_design(5, 3))
    with pytest.raises(DegenerateResidualError, match="degenerate residual"):
        mix([1.0, 2.0, 3.0, 0.0, 0.0], coll, MixConfig(beta=0.2))


def test_singleton_collection():
    coll = mc.single_model(mc.standard_design(6, 2), (0, 1))
    Y = np.arange(1.0, 7.0)
    res = mix(Y, coll, MixConfig(beta=0.2))
    assert list(res.weights.values()) == [1.0]
    assert np.allclose(res.mu_hat, [1, 2, 0, 0, 0, 0])


def test_symmetric_models_get_equal_weights():
    d = mc.standard_design(6, 2)
    coll = ModelCollection((Model("a", (0,), 0.5), Model("b", (1,), 0.5)), (0, 1), d)
    res = mix([2.0, -2.0, 1.0, 0.5, -0.3, 0.2], coll, MixConfig(beta=0.2))
    assert res.weights["a"] == pytest.approx(0.5) and res.weights["b"] == pytest.approx(0.5)


def test_p3_closed_form_equivalence():
    d = mc.random_orthonormal_design(10, 3, seed=4)
    gen = np.random.default_rng(0)
    for alpha, b in [(1.0, 1.0), (0.5, 2.0)]:
        coll = mc.orthonormal_subsets(d, alpha=alpha, b=b)
        for _ in range(10):
            Y = gen.standard_normal(10) * 3
            res = mix(Y, coll, MixConfig(beta=0.3, L_rule=PER_MODEL))
            Z = d.columns.T @ Y
            ref = d.columns @ shrink_unknown_variance(Z, res.sigma2_hat, 0.3, alpha, b).shrunk
            assert np.max(np.abs(res.mu_hat - ref)) <= 1e-10


def test_extreme_exponents_do_not_overflow():
    coll = mc.orthonormal_subsets(mc.standard_design(6, 3))
    Y = np.array([1e4, 1e-3, 0.0, 1e-3, -1e-3, 2e-3])
    res = mix(Y, coll, MixConfig(beta=0.2))
    w = np.array(list(res.weights.values()))
    assert np.all(np.isfinite(w)) and abs(w.sum() - 1) <= 1e-10
    assert np.isfinite(res.log_partition)


vecs = arrays(float, 9, elements=st.floats(-20, 20))


@settings(max_examples=60, deadline=None)
@given(vecs, st.floats(0.01, 1.0), st.floats(0.1, 10.0))
def test_weight_invariants(Y, beta, scale):
    d = mc.standard_design(9, 4)
    coll = mc.unordered_linear(d, 2)
    cfg = MixConfig(beta=beta)
    if residual_variance(Y, coll) <= 1e-8:
        return
    mu_hat, w, s2, _ = mix_batch(Y, coll, cfg)
    assert abs(w.sum() - 1.0) <= 1e-10 and np.all(w >= 0)
    # estimate lies in S_*
    assert np.allclose(mu_hat[0, 4:], 0.0, atol=1e-8)
    # alternative exponent differs by a constant
    alt = alternative_log_weights(Y, coll, cfg)
    alt = np.exp(alt - alt.max())
    assert np.allclose(alt / alt.sum(), w[0], atol=1e-12)
    # scale invariance of the weights
    _, w2, _, _ = mix_batch(scale * Y, coll, cfg)
    assert np.allclose(w2, w, atol=1e-10)


def test_shifting_L_by_constant_keeps_weights():
    d = mc.standard_design(8, 3)
    base = mc.orthonormal_subsets(d, b=0.5)
    shifted = ModelCollection(
        tuple(Model(m.id, m.column_indices, m.prior, m.weight_L + 3.0) for m in base.models), base.star_indices, d
    )
    Y = np.linspace(-2, 3, 8)
    cfg = MixConfig(beta=0.2, L_rule=PER_MODEL)
    a, b = mix(Y, base, cfg), mix(Y, shifted, cfg)
    assert np.allclose(a.mu_hat, b.mu_hat, atol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        MixConfig(beta=0.0)
    with pytest.raises(ValueError):
        MixConfig(beta=0.1, variance_mode="known")
    with pytest.raises(ValueError):
        MixConfig(beta=0.1, L_rule="other")


def test_rank_deficient_diagnostic():
    X = np.zeros((6, 2))
    X[:, 0] = 1.0
    X[:, 1] = 1.0
    from gibbsmix.core import DesignFamily

    d = DesignFamily(X)
    coll = ModelCollection((Model("both", (0, 1), 0.5), Model("one", (0,), 0.5)), (0, 1), d)
    res = mix(np.arange(6.0), coll, MixConfig(beta=0.2))
    assert res.diagnostics["rank_deficient_models"] == ["both"]
