"""Fourier-basis denoising example with n = 60 and 41 basis vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import model_collections as mc
from ..bounds import star_bias
from ..core import gram_check
from ..mixer import residual_variance
from ..shrinkage import ShrinkResult, shrink_unknown_variance
from ..tuning import TuningReport, tuning_report
from . import rng
from .engine import McResult, mc_risk
from .output import render_svg, write_csv, write_svg
from .scenario import CLOSED_FORM, Scenario, fourier_test_function, signal_section5

N = 60
N_FREQ = 20
ALPHA = 1.0
B = 1.0
BETA = 1.0 / 3.0


@dataclass
class Illustration:
    x: np.ndarray
    mu: np.ndarray
    Y: np.ndarray
    mu_hat: np.ndarray
    shrink: ShrinkResult
    sigma2_hat: float
    a_hat: np.ndarray  # a_0..a_20, cosine terms with a_0 the constant
    b_hat: np.ndarray  # b_1..b_20, sine terms
    gram_deviation: float
    tuning: TuningReport
    mc: McResult | None = None
    projection_risk: float = float("nan")  # bias + 41 sigma^2
    files: dict = field(default_factory=dict)

    def f_hat(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        j = np.arange(1, N_FREQ + 1)
        return (
            self.a_hat[0]
            + np.cos(2 * np.pi * np.outer(x, j)) @ self.a_hat[1:]
            + np.sin(2 * np.pi * np.outer(x, j)) @ self.b_hat
        )


def run_illustration(sigma: float, seed: int, out_dir=None, reps: int = 500) -> Illustration:
    """Denoise one draw of the test signal and estimate the risk over ``reps`` draws.

    The single draw uses replication stream 0 of ``seed``; the Monte Carlo
    run uses streams 0..reps-1 of the same seed.
    """
    design = mc.fourier_design(N, N_FREQ)
    star = mc.single_model(design, range(design.p))
    x = np.arange(1, N + 1) / N
    mu = signal_section5(N)
    Y = mu + sigma * rng.normals(seed, 0, N)

    Z = design.coefficients(Y)
    s2 = residual_variance(Y, star)
    shrink = shrink_unknown_variance(Z, s2, BETA, ALPHA, B)
    mu_hat = design.columns @ shrink.shrunk

    inner = design.columns.T @ mu_hat  # <mu_hat, v_j>
    a_hat = np.empty(N_FREQ + 1)
    a_hat[0] = np.sqrt(1.0 / N) * inner[N_FREQ]
    a_hat[1:] = np.sqrt(2.0 / N) * inner[N_FREQ + 1 :]
    b_hat = np.sqrt(2.0 / N) * inner[:N_FREQ]

    result = Illustration(
        x=x,
        mu=mu,
        Y=Y,
        mu_hat=mu_hat,
        shrink=shrink,
        sigma2_hat=s2,
        a_hat=a_hat,
        b_hat=b_hat,
        gram_deviation=gram_check(design),
        tuning=tuning_report(N, star.N_star, beta=BETA, p=design.p),
    )

    if reps > 0 and sigma > 0:
        scen = Scenario(
            n=N,
            sigma=sigma,
            mu_spec=("fourier_signal",),
            design="fourier",
            p=design.p,
            collection="full",
            alpha=ALPHA,
            b=B,
            beta=BETA,
            estimator=CLOSED_FORM,
            reps=reps,
            master_seed=seed,
        )
        result.mc = mc_risk(scen)
    result.projection_risk = star_bias(mu, star) + design.p * sigma**2

    if out_dir is not None:
        out = Path(out_dir)
        rows = zip(range(1, N + 1), x, mu, Y, mu_hat)
        result.files["csv"] = write_csv(out / "illustration.csv", ["i", "x", "signal", "observation", "estimate"], rows)
        fine = np.linspace(x[0], 1.0, 600)
        svg = render_svg(
            [("signal", fine, fourier_test_function(fine), "black"), ("estimate", fine, result.f_hat(fine), "red")],
            crosses=(x, Y),
            title=f"n = {N}, sigma = {sigma:g}, seed = {seed}",
        )
        result.files["svg"] = write_svg(out / "illustration.svg", svg)
    return result
