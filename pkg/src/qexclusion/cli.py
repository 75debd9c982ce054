"""Command-line front end.

Exit codes: 0 success, 1 valid measurement that is not optimal, 2 iteration
limit, 3 unreadable input or bad argument, 4 numerical failure, 5 degenerate
k or bad subset size, 6 problem too large.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time

from . import certify, ensembles, io, models, pbr
from .errors import BadEps, BadSubsetSize, DegenerateK, ExclusionError, ScaleCap, TooFewStates
from .solver import SolveOptions, Status, solve

EXIT_OK = 0
EXIT_NOT_OPTIMAL = 1
EXIT_MAX_ITERS = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4
EXIT_DEGENERATE = 5
EXIT_SCALE = 6

LOG_ENV = "QEXCLUSION_LOG_LEVEL"
CONSISTENCY_TOL = 1e-6

log = logging.getLogger("qexclusion")

_STATUS_EXIT = {
    Status.OPTIMAL: EXIT_OK,
    Status.MAX_ITERS: EXIT_MAX_ITERS,
    Status.NUMERICAL_FAILURE: EXIT_NUMERICAL,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors, which is taken by MaxIters here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.marks = {}

    def run(self, name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        if self.enabled:
            self.marks[name] = time.perf_counter() - t0
        return out

    def attach(self, report: dict) -> dict:
        if self.enabled:
            report["timings"] = {k: io.number(v) for k, v in self.marks.items()}
        return report


def _echo(args, name: str, keys) -> dict:
    out = {"name": name}
    for key in keys:
        value = getattr(args, key)
        out[key] = io.number(value) if isinstance(value, float) else value
    return out


def _numbers(xs) -> list:
    return [io.number(x) for x in xs]


# ---------------------------------------------------------------------------
# solve

def _solve_report(model, rep, labels) -> dict:
    meas = ensembles.Measurement(
        tuple(rep.primal.measurement) + ((rep.primal.inconclusive(),)
                                         if model.variant is models.Variant.UNAMBIGUOUS else ()),
        has_inconclusive=model.variant is models.Variant.UNAMBIGUOUS,
    )
    dual_check = models.feasibility(model, rep.dual)
    out = {
        "variant": model.variant.value,
        "status": rep.status.value,
        "alpha": io.number(rep.alpha),
        "beta": io.number(rep.beta),
        "gap": io.number(rep.gap),
        "iterations": rep.iterations,
        "primal_residual": io.number(rep.primal_residual),
        "dual_residual": io.number(rep.dual_residual),
        "labels": list(labels),
        "measurement": io.measurement_to_dict(meas, labels)["elements"],
    }
    if rep.primal.lam is not None:
        out["lambda"] = io.number(rep.primal.lam)
    cert = {"N": io.encode_matrix(rep.dual.N),
            "margins": [{"name": n, "value": io.number(v)}
                        for n, kind, v in dual_check.constraints if kind == "psd"]}
    if rep.dual.a:
        cert["a"] = _numbers(rep.dual.a)
    out["certificate"] = cert
    return out


def cmd_solve(args) -> int:
    timer = _Timer(args.timings)
    source = io.load_ensemble(args.ensemble)
    if args.m is not None:
        source = ensembles.m_state_reduction(source, args.m)
    ops = ensembles.operators_of(source)
    model = models.build(args.variant, ops, source.labels)
    opts = SolveOptions(gap_tol=args.gap_tol, seed=args.seed)
    rep = timer.run("solve", solve, model, opts)
    report = {"command": _echo(args, "solve", ["ensemble", "variant", "m", "gap_tol", "seed"])}
    report.update(_solve_report(model, rep, source.labels))
    io.write_json(timer.attach(report), args.out)
    return _STATUS_EXIT[rep.status]


# ---------------------------------------------------------------------------
# certify

def cmd_certify(args) -> int:
    source = io.load_ensemble(args.ensemble)
    meas = io.load_measurement(args.measurement)
    cert = certify.theorem1_certificate(source, meas, tol=args.tol)
    report = {
        "command": _echo(args, "certify", ["ensemble", "measurement", "tol"]),
        "is_optimal": cert.is_optimal,
        "alpha": io.number(ensembles.exclusion_error(source, meas)),
        "trace_N": io.number(cert.trace),
        "hermiticity_residual": io.number(cert.hermiticity_residual),
        "objective_match": io.number(cert.objective_match),
        "margins": _numbers(cert.margins),
        "certificate": {"N": io.encode_matrix(cert.N), "margins": _numbers(cert.margins)},
    }
    io.write_json(report, args.out)
    return EXIT_OK if cert.is_optimal else EXIT_NOT_OPTIMAL


# ---------------------------------------------------------------------------
# bound

def _details(details: dict) -> dict:
    out = {}
    for key, value in details.items():
        if isinstance(value, float):
            value = io.number(value)
        elif isinstance(value, list):
            value = [io.number(v) if isinstance(v, float) else v for v in value]
        out[key] = value
    return out


def cmd_bound(args) -> int:
    timer = _Timer(args.timings)
    source = io.load_ensemble(args.ensemble)
    report = {"command": _echo(args, "bound", ["ensemble", "which", "eps", "perm_mode", "seed"])}
    if args.which == "fidelity":
        bound = timer.run("bound", certify.fidelity_condition, source)
    elif args.which == "perm":
        bound = timer.run("bound", certify.perm_lower_bound, source, args.perm_mode, args.seed)
    else:
        n, bound = timer.run("bound", certify.witness_from_fidelity, source, args.eps)
        report["N"] = io.encode_matrix(n)
    report.update({"kind": bound.kind.value, "value": io.number(bound.value),
                   "details": _details(bound.details)})
    io.write_json(timer.attach(report), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# pbr

def cmd_pbr(args) -> int:
    timer = _Timer(args.timings)
    theta = math.radians(args.theta_deg) if args.theta_deg is not None else args.theta
    try:
        game = pbr.PbrGame(args.n, theta)
    except ValueError as exc:
        raise io.ParseError(str(exc)) from exc
    rep = pbr.pbr_report(game)
    report = {
        "command": _echo(args, "pbr", ["n", "theta", "theta_deg", "mode", "seed"]),
        "n": game.n,
        "theta": io.number(game.theta),
        "tan_half_theta": io.number(game.t),
        "threshold": io.number(pbr.threshold(game.n)),
    }
    code = EXIT_OK
    if args.mode in ("analytic", "both"):
        report.update({
            "criterion_met": rep.criterion_met,
            "p_win_global": io.number(rep.p_win_global),
            "p_win_separable": io.number(rep.p_win_separable),
            "alpha_analytic": io.number(rep.alpha_analytic),
            "c_theta": io.number(rep.c_theta),
            "q": io.number(rep.q),
        })
    if args.mode in ("sdp", "both"):
        ens = pbr.build_pbr_ensemble(game)
        model = models.build(models.Variant.MIN_ERROR, ens.weighted, ens.labels)
        sol = timer.run("solve", solve, model, SolveOptions(seed=args.seed))
        report.update({
            "status": sol.status.value,
            "alpha_sdp": io.number(sol.alpha),
            "beta_sdp": io.number(sol.beta),
            "p_win_global_sdp": io.number(1.0 - sol.alpha),
        })
        code = _STATUS_EXIT[sol.status]
        if args.mode == "both":
            diff = abs(sol.alpha - rep.alpha_analytic)
            report["consistency"] = io.number(diff)
            report["consistent"] = diff <= CONSISTENCY_TOL
    io.write_json(timer.attach(report), args.out)
    return code


# ---------------------------------------------------------------------------
# convert

def cmd_convert(args) -> int:
    source = io.load_ensemble(args.ensemble)
    if args.to == "discrimination":
        out = ensembles.to_discrimination(source)
    else:
        if args.m is None:
            raise io.ParseError("--m is required with --to m-exclusion")
        out = ensembles.m_state_reduction(source, args.m)
    io.write_json(io.ensemble_to_dict(out), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qexclusion", description="Quantum state exclusion via semidefinite programming")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an exclusion SDP for an ensemble file")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--variant", required=True, choices=[v.value for v in models.Variant])
    p.add_argument("--m", type=int, default=None, help="exclude m-element subsets instead of single states")
    p.add_argument("--gap-tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0, help="seed for restarts after numerical trouble")
    p.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")
    p.add_argument("--out", required=True, help="report path, or - for stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="check a measurement for optimality")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--measurement", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bound", help="fidelity condition, permutation bound or fidelity witness")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--which", required=True, choices=["fidelity", "perm", "witness"])
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--perm-mode", default="auto", choices=["auto", "exhaustive", "sample"])
    p.add_argument("--seed", type=int, default=0, help="seed for permutation sampling")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("pbr", help="the n-qubit PBR exclusion game")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float, help="angle in radians, 0 <= theta <= pi/2")
    g.add_argument("--theta-deg", type=float, help="angle in degrees")
    p.add_argument("--mode", default="analytic", choices=["analytic", "sdp", "both"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pbr)

    p = sub.add_parser("convert", help="write a derived operator list")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--to", required=True, choices=["discrimination", "m-exclusion"])
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)
    return ap


def _setup_logging() -> None:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ScaleCap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (DegenerateK, BadSubsetSize, TooFewStates) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (BadEps, ExclusionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
