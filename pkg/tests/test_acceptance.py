"""Acceptance gate: eight end-to-end criteria, each with a runtime budget.

Every test prints one PASS/FAIL line; the lines are also collected and shown
in the pytest terminal summary. ``python tests/test_acceptance.py`` runs the
gate without pytest.
"""

from __future__ import annotations

import contextlib
import io
import math
import time
import xml.etree.ElementTree as ET

import numpy as np

from gibbsmix import approx
from gibbsmix import model_collections as mc
from gibbsmix.bounds import c_beta, chi2_deviation_bound, theorem1_bounds
from gibbsmix.harness import rng
from gibbsmix.harness.cli import main as cli_main
from gibbsmix.harness.engine import mc_risk
from gibbsmix.harness.illustration import run_illustration
from gibbsmix.harness.scenario import Scenario
from gibbsmix.mixer import MixConfig, PER_MODEL, mix_batch
from gibbsmix.shrinkage import shrink_unknown_variance
from gibbsmix.tuning import beta_max_theorem1

RESULTS: dict[int, str] = {}

P_GRID = [3, 10, 100, 1000, 10_000, 100_000, 1_000_000]


def _report(k: int, ok: bool, elapsed: float, budget: float, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {k}: {detail} ({elapsed:.2f} s, budget {budget:g} s)"
    RESULTS[k] = line
    print(line)


def test_closed_form_matches_enumerated_mixture():
    t0 = time.perf_counter()
    gen = np.random.default_rng(20240601)
    worst = 0.0
    n_extra = 6
    for p in range(1, 11):
        n = p + n_extra
        design = mc.standard_design(n, p)
        for alpha in (0.5, 1.0, 2.0):
            for b in (0.5, 1.0, 2.0):
                coll = mc.orthonormal_subsets(design, alpha=alpha, b=b)
                cfg = MixConfig(beta=float(gen.uniform(0.05, 0.5)), L_rule=PER_MODEL)
                # 100 instances: coefficient scales spread over two decades
                Y = gen.standard_normal((100, n)) * gen.uniform(0.3, 3.0, (100, 1))
                Y[:, :p] *= gen.uniform(0.1, 10.0, (100, 1))
                mu_hat, _, s2, _ = mix_batch(Y, coll, cfg)
                for i in range(100):
                    ref = shrink_unknown_variance(Y[i, :p], s2[i], cfg.beta, alpha, b).shrunk
                    worst = max(worst, float(np.max(np.abs(mu_hat[i, :p] - ref))))
                    worst = max(worst, float(np.max(np.abs(mu_hat[i, p:]), initial=0.0)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5.0
    _report(1, ok, elapsed, 5, f"closed form vs 2^p-model mixture, max |diff| = {worst:.3g}")
    assert ok


def test_c_beta_curve():
    t0 = time.perf_counter()
    half = [c_beta(p, 0.5) for p in P_GRID]
    refined = [c_beta(p, 0.5, z_step=5e-4, n_coarse=1024, x_tol=1e-7) for p in P_GRID]
    drift = max(abs(a - b) for a, b in zip(half, refined))
    others = {beta: [c_beta(p, beta) for p in P_GRID] for beta in (0.25, 0.3, 0.4)}
    others[0.5] = half
    top = max(max(v) for v in others.values())
    elapsed = time.perf_counter() - t0
    ok = max(half) <= 1.0 and drift < 1e-4 and top <= 16.0 and elapsed < 60.0
    _report(
        2, ok, elapsed, 60,
        f"max c_1/2 = {max(half):.6f}, refinement drift = {drift:.2g}, max c_beta over beta grid = {top:.6f}",
    )
    assert ok


def test_projection_risk_identity():
    t0 = time.perf_counter()
    n, reps = 32, 100_000
    mu = np.sin(np.linspace(0.0, 3.0, n)) * 2.0 + np.linspace(-1.0, 1.0, n)
    scen = Scenario(
        n=n, sigma=1.0, mu_spec=("explicit", mu), design="random_orthonormal", p=5, design_seed=7,
        collection="single", model=(0, 1, 2, 3, 4), beta=0.1, reps=reps, master_seed=11,
    )
    res = mc_risk(scen, workers=4)
    design = scen.build_design()
    proj = design.columns @ (design.columns.T @ mu)
    expected = float(np.sum((mu - proj) ** 2)) + 5.0
    z = abs(res.empirical_risk - expected) / res.std_error
    elapsed = time.perf_counter() - t0
    ok = z <= 3.0 and elapsed < 10.0
    _report(3, ok, elapsed, 10, f"risk {res.empirical_risk:.5f} vs {expected:.5f}, {z:.2f} SE")
    assert ok


def _oracle_signals(design):
    n, p = design.n, design.p
    V = design.columns
    outside = np.linspace(-1.0, 1.0, n) ** 2
    outside -= V @ (V.T @ outside)
    outside *= 2.0 / np.linalg.norm(outside)
    return {
        "zero": np.zeros(n),
        "dense in S_*": V @ np.full(p, 3.0),
        "sparse": V @ np.r_[6.0, -5.0, np.zeros(p - 2)],
        "near threshold": V @ np.full(p, 1.2),
        "bias outside S_*": V @ np.r_[4.0, np.zeros(p - 1)] + outside,
    }


def test_oracle_inequality():
    t0 = time.perf_counter()
    n, p, reps = 32, 8, 10_000
    design = mc.random_orthonormal_design(n, p, seed=3)
    beta = beta_max_theorem1(n, n - p)
    checks = []
    for name, mu in _oracle_signals(design).items():
        scen = Scenario(
            n=n, sigma=1.0, mu_spec=("explicit", mu), design="random_orthonormal", p=p, design_seed=3,
            collection="orthonormal_subsets", alpha=1.0, b=0.5, beta=beta, L_rule=PER_MODEL,
            reps=reps, master_seed=5,
        )
        res = mc_risk(scen, workers=4)
        rep = res.bound_report
        checks.append((name, res.empirical_risk, rep.fgibbs_rhs, rep.foracle_rhs, res.conditions_ok))
    elapsed = time.perf_counter() - t0
    ok = all(r <= fo and fg <= fo and c for _, r, fg, fo, c in checks) and elapsed < 30.0
    worst = max(checks, key=lambda c: c[1] / c[3])
    _report(
        4, ok, elapsed, 30,
        f"beta = {beta:.6f}; tightest case '{worst[0]}': risk {worst[1]:.3f} <= foracle {worst[3]:.3f}",
    )
    assert ok


def test_chi2_deviation_domination():
    t0 = time.perf_counter()
    gen = np.random.default_rng(99)
    margins = []
    for N in (10, 50):
        X = gen.chisquare(N, size=1_000_000) / N
        for a in (0.5, 0.9):
            emp = float(np.mean(np.maximum(a / X - 1.0, 0.0)))
            margins.append((N, a, emp, chi2_deviation_bound(N, a)))
    elapsed = time.perf_counter() - t0
    ok = all(bound - emp > 0 for *_, emp, bound in margins) and elapsed < 10.0
    tight = min(margins, key=lambda m: m[3] - m[2])
    _report(
        5, ok, elapsed, 10,
        f"smallest margin at N={tight[0]}, a={tight[1]}: {tight[2]:.5g} < {tight[3]:.5g}",
    )
    assert ok


def test_haar_bv_bounds():
    t0 = time.perf_counter()
    failures = []
    for name, func in approx.TEST_FUNCTIONS.items():
        f = approx.SampledFunction.from_callable(func, 256)
        V = f.total_variation
        if not all(approx.bv_coefficient_bound_check(f).values()):
            failures.append(f"{name}: level sums")
        for J in range(0, f.J_n + 1):
            err = approx.norm_n(f.samples - approx.linear_approx(f, J).samples)
            if err > approx.linear_error_bound(V, J):
                failures.append(f"{name}: linear J={J}")
        for J in range(1, f.J_n + 1):
            kept = approx.compressed_selection(f, J)
            err = approx.norm_n(f.samples - approx.compressed_approx(f, J).samples)
            if err > approx.compressed_error_bound(V, J):
                failures.append(f"{name}: compressed J={J}")
            if len(kept) > 2**J:
                failures.append(f"{name}: {len(kept)} kept > 2^{J}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 2.0
    _report(6, ok, elapsed, 2, "Haar level sums and approximation errors within BV bounds" + (f"; {failures}" if failures else ""))
    assert ok


def test_besov_descriptors():
    t0 = time.perf_counter()
    desc = mc.besov_descriptors(1024, 0.5)
    dim_ratio = max(d.dim_bound / 2**d.J for d in desc)
    pi_ratio = max(-d.log_pi_m / 2**d.J for d in desc)
    elapsed = time.perf_counter() - t0
    ok = dim_ratio <= 2.2 and pi_ratio <= 4.0 and elapsed < 1.0
    _report(
        7, ok, elapsed, 1,
        f"J_* = {desc[-1].J}: max dim/2^J = {dim_ratio:.4f}, max -log pi/2^J = {pi_ratio:.4f}",
    )
    assert ok


def test_illustration_end_to_end(tmp_path):
    t0 = time.perf_counter()
    out = tmp_path / "ill"
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["illustrate", "--sigma", "1", "--seed", "42", "--out-dir", str(out)])
    res = run_illustration(1.0, 42, out_dir=None, reps=500)
    csv_lines = (out / "illustration.csv").read_bytes().split(b"\n")
    csv_ok = b"\r" not in b"".join(csv_lines) and len([l for l in csv_lines if l]) == 61
    svg_root = ET.parse(out / "illustration.svg").getroot()
    svg_ok = svg_root.get("viewBox") == "0 0 800 500"
    interior = bool(np.all(res.shrink.strictly_interior()))
    elapsed = time.perf_counter() - t0
    ok = (
        code == 0
        and res.gram_deviation <= 1e-10
        and interior
        and csv_ok
        and svg_ok
        and res.mc.empirical_risk < res.projection_risk
        and elapsed < 20.0
    )
    _report(
        8, ok, elapsed, 20,
        f"gram dev {res.gram_deviation:.2g}, c_j in (0,1): {interior}, "
        f"risk {res.mc.empirical_risk:.3f} < full projection {res.projection_risk:.3f}",
    )
    assert ok


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for fn in [
        test_closed_form_matches_enumerated_mixture,
        test_c_beta_curve,
        test_projection_risk_identity,
        test_oracle_inequality,
        test_chi2_deviation_domination,
        test_haar_bv_bounds,
        test_besov_descriptors,
    ]:
        with contextlib.suppress(AssertionError):
            fn()
    with tempfile.TemporaryDirectory() as d, contextlib.suppress(AssertionError):
        test_illustration_end_to_end(Path(d))
