"""Simulation scenarios and their flat ``key = value`` file format.

Example file::

    # sparse signal on 8 random orthonormal vectors
    n = 32
    sigma = 1.0
    design = random_orthonormal
    design_seed = 7
    p = 8
    collection = orthonormal_subsets
    alpha = 1
    mu_coefficients = 6, -4, 0, 0, 0, 0, 0, 0
    beta = general
    L_rule = half_dim
    reps = 10000
    seed = 2024
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import model_collections as mc
from ..approx import TEST_FUNCTIONS, dyadic_grid
from ..core import DesignFamily, ModelCollection
from ..mixer import B_TIMES_CARDINALITY, HALF_DIM, KNOWN, PER_MODEL, RESIDUAL_ESTIMATE, MixConfig
from ..tuning import APPENDIX_A2, REMARK4, beta_max_orthonormal, beta_max_theorem1


class ScenarioError(ValueError):
    """Invalid scenario content; maps to CLI exit code 2."""


MIXTURE = "mixture"
CLOSED_FORM = "closed_form"


def fourier_test_function(x):
    """0.7 cos(x) + cos(7x) + 1.5 sin(x) + 0.8 sin(5x) + 0.9 sin(8x)."""
    x = np.asarray(x, dtype=float)
    return 0.7 * np.cos(x) + np.cos(7 * x) + 1.5 * np.sin(x) + 0.8 * np.sin(5 * x) + 0.9 * np.sin(8 * x)


def signal_section5(n: int) -> np.ndarray:
    """The test signal sampled at x_i = i/n, i = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return fourier_test_function(np.arange(1, n + 1) / n)


@dataclass
class Scenario:
    n: int
    sigma: float
    mu_spec: tuple = ("explicit", None)
    design: str = "standard"
    p: int = 1
    design_seed: int = 0
    collection: str = "orthonormal_subsets"
    alpha: float = 1.0
    b: float = 0.0
    q: int | None = None
    model: tuple[int, ...] = ()
    beta: float | str = "general"
    L_rule: str = HALF_DIM
    L_b: float = 0.0
    variance_mode: str = RESIDUAL_ESTIMATE
    estimator: str = MIXTURE
    reps: int = 1000
    master_seed: int = 0
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.reps < 1:
            raise ScenarioError("reps must be >= 1")
        if self.sigma < 0 or not math.isfinite(self.sigma):
            raise ScenarioError("sigma must be finite and >= 0")
        if self.n < 3:
            raise ScenarioError("n must be >= 3")

    # -- construction -----------------------------------------------------

    def build_design(self) -> DesignFamily:
        if self.design == "standard":
            return mc.standard_design(self.n, self.p)
        if self.design == "random_orthonormal":
            return mc.random_orthonormal_design(self.n, self.p, self.design_seed)
        if self.design == "fourier":
            if self.p % 2 == 0:
                raise ScenarioError("the Fourier design has an odd number of columns (2k+1)")
            return mc.fourier_design(self.n, (self.p - 1) // 2)
        if self.design == "haar":
            fam = mc.haar_family(self.n)
            if self.p != fam.design.p:
                raise ScenarioError(f"haar design has p = n/2 = {fam.design.p}")
            return fam.design
        raise ScenarioError(f"unknown design {self.design!r}")

    def build_collection(self, design: DesignFamily) -> ModelCollection:
        kind = self.collection
        if kind == "orthonormal_subsets":
            return mc.orthonormal_subsets(design, self.alpha, self.b)
        if kind == "binomial_subsets":
            return mc.binomial_subsets(design, self.b)
        if kind == "ordered":
            return mc.ordered_linear(design, self.alpha)
        if kind == "unordered":
            return mc.unordered_linear(design, design.p if self.q is None else self.q)
        if kind == "single":
            return mc.single_model(design, self.model)
        if kind == "full":
            return mc.single_model(design, range(design.p))
        raise ScenarioError(f"unknown collection {kind!r}")

    def build_mu(self, design: DesignFamily) -> np.ndarray:
        kind = self.mu_spec[0]
        if kind == "explicit":
            mu = np.asarray(self.mu_spec[1], dtype=float)
        elif kind == "coefficients":
            coef = np.asarray(self.mu_spec[1], dtype=float)
            if coef.size != design.p:
                raise ScenarioError(f"mu_coefficients needs {design.p} entries, got {coef.size}")
            mu = design.columns @ coef
        elif kind == "fourier_signal":
            mu = signal_section5(self.n)
        elif kind == "bv":
            name = self.mu_spec[1]
            if name not in TEST_FUNCTIONS:
                raise ScenarioError(f"unknown function {name!r}; choose from {sorted(TEST_FUNCTIONS)}")
            mu = TEST_FUNCTIONS[name](dyadic_grid(self.n))
        else:
            raise ScenarioError(f"unknown mu spec {kind!r}")
        if mu.shape != (self.n,):
            raise ScenarioError(f"mu must have length n = {self.n}, got {mu.shape}")
        return mu

    def resolve_beta(self, collection: ModelCollection) -> float:
        if isinstance(self.beta, (int, float)):
            return float(self.beta)
        if self.beta == "general":
            return beta_max_theorem1(self.n, collection.N_star)
        if self.beta in (REMARK4, APPENDIX_A2):
            return beta_max_orthonormal(self.n, collection.d_star, self.beta)
        raise ScenarioError(f"unknown beta rule {self.beta!r}")

    def build_config(self, collection: ModelCollection) -> MixConfig:
        beta = self.resolve_beta(collection)
        sigma2 = self.sigma**2 if self.variance_mode == KNOWN else None
        try:
            return MixConfig(beta=beta, L_rule=self.L_rule, b=self.L_b, variance_mode=self.variance_mode, sigma2=sigma2)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc


_INT_KEYS = {"n", "p", "design_seed", "q", "reps", "seed"}
_FLOAT_KEYS = {"sigma", "alpha", "b", "L_b"}
_STR_KEYS = {"design", "collection", "L_rule", "variance_mode", "estimator"}


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ScenarioError(f"bad number list {text!r}") from exc


def parse_scenario_text(text: str) -> Scenario:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in kv:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        kv[key] = value

    args: dict = {}
    try:
        for key, value in kv.items():
            if key in _INT_KEYS:
                args["master_seed" if key == "seed" else key] = int(value)
            elif key in _FLOAT_KEYS:
                args[key] = float(value)
            elif key in _STR_KEYS:
                args[key] = value
            elif key == "beta":
                try:
                    args["beta"] = float(value)
                except ValueError:
                    args["beta"] = value
            elif key == "model":
                args["model"] = tuple(int(v) for v in _floats(value))
            elif key == "mu":
                if value == "fourier_signal":
                    args["mu_spec"] = ("fourier_signal",)
                elif value.startswith("bv:"):
                    args["mu_spec"] = ("bv", value[3:].strip())
                else:
                    args["mu_spec"] = ("explicit", _floats(value))
            elif key == "mu_coefficients":
                args["mu_spec"] = ("coefficients", _floats(value))
            else:
                raise ScenarioError(f"unknown key {key!r}")
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc
    for required in ("n", "sigma"):
        if required not in args:
            raise ScenarioError(f"missing required key {required!r}")
    if "mu_spec" not in args:
        raise ScenarioError("missing mu or mu_coefficients")
    if args.get("L_rule", HALF_DIM) not in (HALF_DIM, PER_MODEL, B_TIMES_CARDINALITY):
        raise ScenarioError(f"unknown L_rule {args['L_rule']!r}")
    if args.get("variance_mode", RESIDUAL_ESTIMATE) not in (RESIDUAL_ESTIMATE, KNOWN):
        raise ScenarioError(f"unknown variance_mode {args['variance_mode']!r}")
    if args.get("estimator", MIXTURE) not in (MIXTURE, CLOSED_FORM):
        raise ScenarioError(f"unknown estimator {args['estimator']!r}")
    return Scenario(**args)


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    return parse_scenario_text(text)
