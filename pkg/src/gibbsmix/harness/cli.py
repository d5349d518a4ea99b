"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 failed precondition under --strict.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .. import approx
from ..bounds import c_beta, theorem1_bounds
from ..mixer import model_L
from .engine import conditions_hold, mc_risk, prepare
from .illustration import run_illustration
from .output import fmt, write_csv
from .scenario import ScenarioError, load_scenario

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gibbsmix", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("illustrate", help="Fourier denoising example, CSV + SVG output")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", type=Path, default=Path("illustration_out"))
    p.add_argument("--reps", type=int, default=500)

    p = sub.add_parser("mc-risk", help="Monte Carlo risk of a scenario")
    p.add_argument("--scenario", type=Path, required=True)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="fail (exit 3) when the risk-bound conditions do not hold")

    p = sub.add_parser("cbeta", help="tabulate the constant c_beta(p)")
    p.add_argument("--beta", type=_float_list, default=[0.5])
    p.add_argument("--p-grid", type=_int_list, default=[3, 10, 100, 1000, 10000, 100000, 1000000])
    p.add_argument("--out", type=Path)

    p = sub.add_parser("bounds", help="evaluate the risk bounds of a scenario")
    p.add_argument("--scenario", type=Path, required=True)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("approx", help="Haar approximation errors against their BV bounds")
    p.add_argument("--function", choices=sorted(approx.TEST_FUNCTIONS), default="identity")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--levels", type=_int_list)
    p.add_argument("--out", type=Path)
    return parser


def _cmd_illustrate(args) -> int:
    if args.sigma < 0 or args.reps < 0:
        raise ScenarioError("sigma and reps must be non-negative")
    res = run_illustration(args.sigma, args.seed, args.out_dir, reps=args.reps)
    print(f"gram_deviation = {fmt(res.gram_deviation)}")
    print(f"sigma2_hat = {fmt(res.sigma2_hat)}")
    print(f"beta = {fmt(res.tuning.beta)} conditions_ok = {res.tuning.conditions_ok}")
    c = res.shrink.coefficients
    print(f"shrinkage coefficients in (0,1): {bool(np.all(res.shrink.strictly_interior()))} (min {c.min():.3g}, max {c.max():.3g})")
    if res.mc is not None:
        print(f"mixture risk = {fmt(res.mc.empirical_risk)} +- {fmt(res.mc.std_error)} over {res.mc.reps} reps")
        print(f"full projection risk = {fmt(res.projection_risk)}")
    for key, path in res.files.items():
        print(f"{key}: {path}")
    return EXIT_OK


def _load(args):
    scen = load_scenario(args.scenario)
    if getattr(args, "reps", None) is not None:
        scen.reps = args.reps
    if getattr(args, "seed", None) is not None:
        scen.master_seed = args.seed
    return scen


def _cmd_mc_risk(args) -> int:
    scen = _load(args)
    if args.strict and not conditions_hold(prepare(scen)):
        print("precondition failed: beta/N_* or L_m >= dim/2 condition does not hold", file=sys.stderr)
        return EXIT_PRECONDITION
    res = mc_risk(scen, workers=args.workers)
    print(f"empirical_risk = {fmt(res.empirical_risk)}")
    print(f"std_error = {fmt(res.std_error)}")
    print(f"reps = {res.reps}")
    print(f"beta = {fmt(res.beta)}")
    print(f"conditions_ok = {res.conditions_ok}")
    if res.bound_report is not None:
        print(f"fgibbs_rhs = {fmt(res.bound_report.fgibbs_rhs)}")
        print(f"foracle_rhs = {fmt(res.bound_report.foracle_rhs)}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    scen = _load(args)
    prep = prepare(scen)
    ok = conditions_hold(prep)
    if args.strict and not ok:
        print("precondition failed: beta/N_* or L_m >= dim/2 condition does not hold", file=sys.stderr)
        return EXIT_PRECONDITION
    if scen.sigma <= 0:
        raise ScenarioError("bounds need sigma > 0")
    rep = theorem1_bounds(prep.mu, prep.collection, scen.sigma**2, prep.config.beta, L=model_L(prep.collection, prep.config))
    print(f"beta = {fmt(prep.config.beta)}")
    print(f"conditions_ok = {ok}")
    for name in ("fgibbs_rhs", "foracle_rhs", "crude_rhs", "r_star", "epsilon_n", "sigma_bar2"):
        print(f"{name} = {fmt(getattr(rep, name))}")
    print(f"best_model = {rep.best_model}")
    return EXIT_OK


def _cmd_cbeta(args) -> int:
    if any(p < 3 for p in args.p_grid):
        raise ScenarioError("p must be >= 3")
    rows = []
    for beta in args.beta:
        for p in args.p_grid:
            c = c_beta(p, beta)
            rows.append((beta, p, c))
            print(f"beta = {beta:g} p = {p} c_beta = {fmt(c)}")
    if args.out:
        write_csv(args.out, ["beta", "p", "c_beta"], rows)
    return EXIT_OK


def _cmd_approx(args) -> int:
    f = approx.SampledFunction.from_callable(approx.TEST_FUNCTIONS[args.function], args.n)
    V = f.total_variation
    levels = args.levels if args.levels is not None else list(range(0, f.J_n + 1))
    rows = []
    for J in levels:
        if not 0 <= J <= f.J_n:
            raise ScenarioError(f"level {J} outside [0, {f.J_n}]")
        lin = approx.norm_n(f.samples - approx.linear_approx(f, J).samples)
        row = [J, lin, approx.linear_error_bound(V, J)]
        if J >= 1:
            kept = approx.compressed_selection(f, J)
            comp = approx.norm_n(f.samples - approx.compressed_approx(f, J).samples)
            row += [comp, approx.compressed_error_bound(V, J), len(kept)]
        else:
            row += ["", "", ""]
        rows.append(row)
        print("J = {} linear_err = {} bound = {} compressed_err = {} bound = {} kept = {}".format(
            *[r if isinstance(r, str) else fmt(r) for r in row]))
    checks = approx.bv_coefficient_bound_check(f)
    print(f"V(f) = {fmt(V)}; level-sum bound holds at every level: {all(checks.values())}")
    if args.out:
        write_csv(args.out, ["J", "linear_error", "linear_bound", "compressed_error", "compressed_bound", "kept"], rows)
    return EXIT_OK


_COMMANDS = {
    "illustrate": _cmd_illustrate,
    "mc-risk": _cmd_mc_risk,
    "bounds": _cmd_bounds,
    "cbeta": _cmd_cbeta,
    "approx": _cmd_approx,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:  # ScenarioError and domain errors from the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
