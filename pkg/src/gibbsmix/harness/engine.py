"""Deterministic Monte Carlo risk estimation."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import model_collections as mc
from ..bounds import BoundReport, theorem1_bounds
from ..core import DesignFamily, ModelCollection
from ..mixer import MixConfig, _residual_variance_batch, mix_batch, model_L
from ..shrinkage import shrink_unknown_variance
from ..tuning import check_theorem1_conditions
from . import rng
from .scenario import CLOSED_FORM, MIXTURE, Scenario

log = logging.getLogger(__name__)

# fixed so that chunk boundaries (and thus every BLAS call) ignore the worker count
CHUNK = 1024


@dataclass
class McResult:
    empirical_risk: float
    std_error: float
    reps: int
    bound_report: BoundReport | None
    beta: float
    conditions_ok: bool
    per_rep_losses: np.ndarray | None = None


def closed_form_estimate(Y: np.ndarray, design: DesignFamily, star: ModelCollection, beta: float, alpha: float, b: float) -> np.ndarray:
    """Shrinkage estimate for a batch of rows Y on an orthonormal design."""
    Z = design.coefficients(Y)
    s2 = _residual_variance_batch(Y, star)
    scale = design.euclidean_scale()
    out = np.empty_like(Y)
    for i in range(Y.shape[0]):
        c = shrink_unknown_variance(Z[i] * scale, s2[i], beta, alpha, b).coefficients
        out[i] = design.columns @ (c * Z[i])
    return out


@dataclass
class _Prepared:
    mu: np.ndarray
    design: DesignFamily
    collection: ModelCollection
    config: MixConfig


def prepare(scenario: Scenario) -> _Prepared:
    design = scenario.build_design()
    if scenario.estimator == CLOSED_FORM:
        collection = mc.single_model(design, range(design.p))
    else:
        collection = scenario.build_collection(design)
    mu = scenario.build_mu(design)
    config = scenario.build_config(collection)
    return _Prepared(mu, design, collection, config)


def _chunk_losses(prep: _Prepared, scenario: Scenario, reps: range) -> np.ndarray:
    noise = rng.normal_block(scenario.master_seed, reps, scenario.n)
    Y = prep.mu + scenario.sigma * noise
    if scenario.estimator == CLOSED_FORM:
        mu_hat = closed_form_estimate(Y, prep.design, prep.collection, prep.config.beta, scenario.alpha, scenario.b)
    else:
        mu_hat = mix_batch(Y, prep.collection, prep.config)[0]
    d = mu_hat - prep.mu
    return np.sum(d * d, axis=1)


def mc_risk(scenario: Scenario, workers: int = 1, keep_losses: bool = False) -> McResult:
    """Empirical risk E||mu - mu_hat||^2 over ``scenario.reps`` replications.

    Replication r uses the stream keyed by (master_seed, r). Chunks are
    evaluated on ``workers`` threads and reassembled in index order.
    """
    prep = prepare(scenario)
    n_reps = scenario.reps
    if scenario.sigma == 0.0:
        # noiseless: every replication is the same deterministic loss
        loss = _chunk_losses(prep, scenario, range(1))[0]
        losses = np.full(n_reps, loss)
    else:
        chunks = [range(s, min(s + CHUNK, n_reps)) for s in range(0, n_reps, CHUNK)]
        if workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda c: _chunk_losses(prep, scenario, c), chunks))
        else:
            parts = [_chunk_losses(prep, scenario, c) for c in chunks]
        losses = np.concatenate(parts)

    risk = float(np.mean(losses))
    se = float(np.std(losses, ddof=1) / np.sqrt(n_reps)) if n_reps > 1 and scenario.sigma > 0 else 0.0

    report = None
    if scenario.sigma > 0 and scenario.estimator == MIXTURE:
        L = model_L(prep.collection, prep.config)
        report = theorem1_bounds(prep.mu, prep.collection, scenario.sigma**2, prep.config.beta, L=L)
    ok = conditions_hold(prep)
    log.debug("mc_risk: risk=%.6g se=%.3g reps=%d", risk, se, n_reps)
    return McResult(
        empirical_risk=risk,
        std_error=se,
        reps=n_reps,
        bound_report=report,
        beta=prep.config.beta,
        conditions_ok=ok,
        per_rep_losses=losses if keep_losses else None,
    )


def conditions_hold(prep: _Prepared) -> bool:
    """Whether the general risk bound applies: beta and N_* admissible, L_m >= dim/2."""
    coll = prep.collection
    if coll.N_star <= 2:
        return False
    L = model_L(coll, prep.config)
    return bool(
        check_theorem1_conditions(prep.config.beta, coll.N_star, coll.n)
        and np.all(L >= coll.dims() / 2.0)
    )
