"""Batch command-line interface.

Verbs: fidelity, divergence, gmean, grad, hess-bounds, constants, barycenter,
verify, gen. Results go to standard output or --out; diagnostics go to
standard error. Exit codes: 0 success / all properties hold, 1 property
violation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .barycenter import solve_fixed_point, solve_gradient_projection
from .calculus import convexity_constants, gradient_f, hessian_extreme_eigs, hessian_operator
from .entropy import compute_divergence, fidelity, geometric_mean
from .errors import InvalidInput, ParameterError, SandwichOptError
from .inequalities import SUITES, run_suite
from .linalg import as_spd, derive_seed, random_spd
from .serialization import (
    canonical_json,
    format_float,
    load_matrix,
    load_problem,
    matrix_to_json,
    report_to_json,
    save_matrix,
)

DIVERGENCE_CLI_KINDS = {
    "sandwiched": "sandwiched",
    "renyi": "renyi_classic",
    "umegaki": "umegaki",
    "thompson": "thompson",
    "max": "max_relative",
    "bures": "bures",
    "riemannian": "riemannian",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sandwich-opt",
        description="Sandwiched quasi-relative entropies, certified derivatives, "
        "entropic barycenters, and inequality verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(sp):
        sp.add_argument("--out", help="write the result to this path instead of stdout")

    def add_format(sp):
        sp.add_argument(
            "--format", choices=("text", "json", "csv"), default="text",
            help="scalar output format (default text, 17 significant digits)",
        )

    sp = sub.add_parser("fidelity", help="parameterized fidelity of two SPD matrices")
    sp.add_argument("--a", required=True, help="matrix JSON file for A")
    sp.add_argument("--b", required=True, help="matrix JSON file for B")
    sp.add_argument("--t", type=float, required=True)
    add_format(sp)
    add_out(sp)

    sp = sub.add_parser("divergence", help="divergence/distance between SPD matrices")
    sp.add_argument("--kind", required=True, choices=sorted(DIVERGENCE_CLI_KINDS))
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--t", type=float, help="order (sandwiched/renyi only)")
    add_format(sp)
    add_out(sp)

    sp = sub.add_parser("gmean", help="weighted geometric mean A #_t B")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--t", type=float, required=True)
    add_out(sp)

    sp = sub.add_parser("grad", help="gradient of the sandwiched trace functional")
    sp.add_argument("--a", required=True, help="parameter matrix A")
    sp.add_argument("--x", required=True, help="base point X")
    sp.add_argument("--t", type=float, required=True)
    add_out(sp)

    sp = sub.add_parser("hess-bounds", help="extreme eigenvalues of -grad^2 f(X)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--t", type=float, required=True)
    add_out(sp)

    sp = sub.add_parser("constants", help="certified convexity/smoothness constants")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    add_out(sp)

    sp = sub.add_parser("barycenter", help="solve an entropic barycenter problem")
    sp.add_argument("--problem", required=True, help="problem JSON file")
    sp.add_argument("--solver", choices=("gp", "fp"), default="gp")
    sp.add_argument("--eta", type=float, help="step size (gp only; default 1/beta_star)")
    sp.add_argument("--tol", type=float, help="gradient (gp) or residual (fp) tolerance")
    sp.add_argument("--max-iters", type=int, default=100_000)
    sp.add_argument("--x0", help="matrix JSON file with the starting iterate")
    sp.add_argument("--trace", action="store_true", help="include iterates in the report")
    add_out(sp)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t", help="order parameter or comma-separated grid")
    add_out(sp)

    sp = sub.add_parser("gen", help="generate seeded SPD matrix JSON files")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True, help="output directory")

    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _emit_scalar(args, kind, t, value):
    if args.format == "json":
        _emit(canonical_json({"kind": kind, "t": t, "value": value}), args.out)
    elif args.format == "csv":
        ttxt = "" if t is None else format_float(t)
        _emit(f"kind,t,value\n{kind},{ttxt},{format_float(value)}", args.out)
    else:
        _emit(format_float(value), args.out)


def _parse_t_grid(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InvalidInput(f"cannot parse order grid {text!r}") from exc


def _cmd_fidelity(args):
    A = as_spd(load_matrix(args.a))
    B = as_spd(load_matrix(args.b))
    _emit_scalar(args, "fidelity", args.t, fidelity(A, B, args.t))
    return 0


def _cmd_divergence(args):
    kind = DIVERGENCE_CLI_KINDS[args.kind]
    A = as_spd(load_matrix(args.a))
    B = as_spd(load_matrix(args.b))
    if kind in ("sandwiched", "renyi_classic") and args.t is None:
        raise ParameterError(f"--kind {args.kind} requires --t")
    dv = compute_divergence(kind, A, B, t=args.t)
    _emit_scalar(args, dv.kind, dv.t, dv.value)
    return 0


def _cmd_gmean(args):
    A = as_spd(load_matrix(args.a))
    B = as_spd(load_matrix(args.b))
    _emit(canonical_json(matrix_to_json(geometric_mean(A, B, args.t))), args.out)
    return 0


def _cmd_grad(args):
    A = as_spd(load_matrix(args.a))
    X = as_spd(load_matrix(args.x))
    _emit(canonical_json(matrix_to_json(gradient_f(A, X, args.t))), args.out)
    return 0


def _cmd_hess_bounds(args):
    A = as_spd(load_matrix(args.a))
    X = as_spd(load_matrix(args.x))
    lam_min, lam_max = hessian_extreme_eigs(hessian_operator(A, X, args.t))
    _emit(canonical_json({"lambda_min": lam_min, "lambda_max": lam_max}), args.out)
    return 0


def _cmd_constants(args):
    c = convexity_constants(args.t, args.alpha, args.beta)
    _emit(
        canonical_json(
            {"t": c.t, "alpha": c.alpha, "beta": c.beta, "k1": c.k1, "k2": c.k2,
             "cond_bound": c.cond_bound}
        ),
        args.out,
    )
    return 0


def _cmd_barycenter(args):
    problem = load_problem(args.problem)
    x0 = load_matrix(args.x0) if args.x0 else None
    if args.solver == "gp":
        report = solve_gradient_projection(
            problem, eta=args.eta, grad_tol=args.tol,
            max_iters=args.max_iters, x0=x0, trace=args.trace,
        )
    else:
        if args.eta is not None:
            raise InvalidInput("--eta applies to the gp solver only")
        tol = 1e-12 if args.tol is None else args.tol
        report = solve_fixed_point(
            problem, tol=tol, max_iters=args.max_iters, x0=x0, trace=args.trace
        )
    _emit(canonical_json(report_to_json(report, include_iterates=args.trace)), args.out)
    return 0


def _cmd_verify(args):
    t_values = _parse_t_grid(args.t) if args.t else None
    report = run_suite(args.suite, n=args.n, trials=args.trials, seed=args.seed,
                       t_values=t_values)
    _emit(canonical_json(report), args.out)
    return 0 if report["all_hold"] else 1


def _cmd_gen(args):
    os.makedirs(args.out, exist_ok=True)
    for k in range(args.count):
        M = random_spd(args.n, args.alpha, args.beta, derive_seed(args.seed, "gen", k))
        save_matrix(os.path.join(args.out, f"spd_{k:04d}.json"), M)
    return 0


_COMMANDS = {
    "fidelity": _cmd_fidelity,
    "divergence": _cmd_divergence,
    "gmean": _cmd_gmean,
    "grad": _cmd_grad,
    "hess-bounds": _cmd_hess_bounds,
    "constants": _cmd_constants,
    "barycenter": _cmd_barycenter,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SandwichOptError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())
