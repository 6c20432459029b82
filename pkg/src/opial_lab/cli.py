"""Command-line front end.

Usage::

    opial-lab constant --p 3 --L 1
    opial-lab verify wirtinger --samples 1000 --seed 7
    opial-lab extremal --p 3 --mu 1 --L 1 --method shoot --compare
    opial-lab sweep --p-min 1 --p-max 5 --steps 9 --L 1
    opial-lab bounds --p 3 --lambda 1 --L 3.14159265 --mode dirichlet

JSON documents go to standard output (or ``--output``), human-readable
summaries to standard error.  Exit codes: 0 success, 1 usage error,
2 numerical failure, 3 precondition failures in a verification corpus.
"""

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import emdenfowler as ef
from . import funcspace as fs
from . import inequalities as ineq
from . import reporting
from . import variational as var
from .quadrature import AccuracyError
from .specfun import DomainError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PRECONDITION = 3

INEQUALITIES = ("wirtinger", "opial", "chain", "interpolation", "meanzero")
SWEEP_COLUMNS = ("p", "L", "c_maximized", "c_closed_form", "c_paper_printed",
                 "rel_diff_max_closed", "rel_diff_max_printed", "iterations", "converged")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    p: float = 3.0
    L: float = 1.0
    lam: float = 1.0
    n: int = 2048
    tol: float = 1e-10
    seed: int = 0
    samples: int = 1000
    output: str = None
    fmt: str = "json"

    def validate(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise UsageError(f"--L must be positive, got {self.L}")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.command in ("constant", "extremal") and not self.p >= 1.0:
            raise UsageError(f"--p must satisfy p > 1 (p = 1 is accepted as the linear case), "
                             f"got {self.p}")
        if self.command == "bounds" and not self.p > 1.0:
            raise UsageError(f"--p must satisfy p > 1, got {self.p}")
        if self.command == "bounds" and not self.lam > 0:
            raise UsageError(f"--lambda must be positive, got {self.lam}")
        if self.command == "constant" and self.n < 64:
            raise UsageError("--n must be at least 64")
        if self.command in ("extremal", "bounds") and self.n < 16:
            raise UsageError("--n must be at least 16")
        if self.command == "verify" and self.samples < 1:
            raise UsageError("--samples must be at least 1")
        return self


def _emit(text, args):
    if args.output:
        reporting.write_output(args.output, text, force=args.force)
    else:
        sys.stdout.write(text)


def _say(message):
    print(message, file=sys.stderr)


def _threads():
    try:
        cap = int(os.environ.get("OPIAL_LAB_THREADS", "0"))
    except ValueError:
        cap = 0
    return cap if cap > 0 else min(4, os.cpu_count() or 1)


# -- constant ---------------------------------------------------------------

def cmd_constant(args):
    RunConfig("constant", p=args.p, L=args.L, n=args.n, tol=args.tol).validate()
    report = var.maximize(args.p, args.L, n=args.n, tol=args.tol, max_iter=args.max_iter)
    doc = reporting.with_version(report.to_dict(include_maximizer=not args.no_maximizer))
    _emit(reporting.dumps(doc), args)
    _say(f"C_p(L) for p={args.p:.10g}, L={args.L:.10g}")
    _say(f"  maximized     {report.c_maximized:.10g}  ({report.iterations} iterations, "
         f"converged={report.converged})")
    _say(f"  closed form   {report.c_closed_form:.10g}  rel diff {report.rel_diff_max_closed:.3e}")
    _say(f"  printed form  {report.c_paper_printed:.10g}  rel diff {report.rel_diff_max_printed:.3e}"
         + ("  <-- DISAGREES with the maximizer" if report.rel_diff_max_printed > 1e-3 else ""))
    return EXIT_OK if report.converged else EXIT_NUMERICAL


# -- verify -----------------------------------------------------------------

def _corpus_member(args, index):
    u = fs.sample_random(args.K, args.decay, seed=[args.seed, index], length=args.L)
    if args.project_mean:
        u = fs.project_mean_zero(u)
    return u


def _check_sample(name, u, args, C):
    if name == "wirtinger":
        return [ineq.wirtinger_check(u)]
    if name == "opial":
        return [ineq.opial_check(u)]
    if name == "chain":
        return list(ineq.chain_check(u))
    if name == "interpolation":
        return [ineq.interpolation_check(u, args.p, C)]
    return [ineq.mean_zero_check(u)]


def cmd_verify(args):
    RunConfig("verify", p=args.p, L=args.L, seed=args.seed, samples=args.samples).validate()
    if args.K < 1 or args.decay < 0:
        raise UsageError("--K must be >= 1 and --decay >= 0")
    C = None
    if args.inequality == "interpolation":
        if not args.p >= 1.0:
            raise UsageError("--p must satisfy p >= 1 for the interpolation check")
        C = args.C if args.C is not None else var.closed_form_constant(args.p, args.L)
    rows = []
    reports = []
    precondition_failures = 0
    for i in range(args.samples):
        u = _corpus_member(args, i)
        try:
            checks = _check_sample(args.inequality, u, args, C)
        except ineq.PreconditionError:
            precondition_failures += 1
            rows.append([i, "", "", "", "", "", "", "", "precondition"])
            continue
        for r in checks:
            reports.append(r)
            rows.append([i, r.name, r.lhs, r.rhs, r.constant, r.ratio, r.holds, r.margin,
                         "ok" if r.holds else "violation"])
    violations = sum(not r.holds for r in reports)
    summary = reporting.with_version({
        "inequality": args.inequality,
        "samples": args.samples,
        "checks": len(reports),
        "passed": len(reports) - violations,
        "violations": violations,
        "precondition_failures": precondition_failures,
        "worst_margin": min((r.margin for r in reports), default=None),
        "worst_ratio": max((r.ratio for r in reports), default=None),
        "seed": args.seed,
        "K": args.K,
        "decay": float(args.decay),
        "L": float(args.L),
        "p": float(args.p),
        "C": C,
        "project_mean": bool(args.project_mean),
    })
    sys.stdout.write(reporting.dumps(summary))
    if args.output:
        header = ["sample", "name", "lhs", "rhs", "constant", "ratio", "holds", "margin", "status"]
        reporting.write_output(args.output, reporting.csv_text(header, rows), force=args.force)
    _say(f"{args.inequality}: {len(reports) - violations}/{len(reports)} checks pass, "
         f"{precondition_failures} precondition failures")
    if violations:
        return EXIT_NUMERICAL
    if precondition_failures:
        return EXIT_PRECONDITION
    return EXIT_OK


# -- extremal ---------------------------------------------------------------

def _solve_extremal(method, p, mu, L, n):
    if method == "shoot":
        return ef.shoot(p, mu, L, n=n)
    if p == 1.0:
        if abs(math.sqrt(mu) * L / math.pi - 1.0) > 1e-6:
            raise ef.SolverError("for p = 1 a positive solution exists only at mu = pi^2 / L^2")
        return ef.profile_from_first_integral(1.0, L, 1.0, n)
    return ef.profile_from_first_integral(p, L, ef.amplitude_for(p, mu, L), n)


def cmd_extremal(args):
    RunConfig("extremal", p=args.p, L=args.L, n=args.n).validate()
    if not args.mu > 0:
        raise UsageError("--mu must be positive")
    prof = _solve_extremal(args.method, args.p, args.mu, args.L, args.n)
    doc = reporting.with_version(prof.sidecar())
    if args.compare:
        other_method = "quadrature" if args.method == "shoot" else "shoot"
        if other_method == "quadrature":
            other = ef.profile_from_first_integral(args.p, args.L, prof.amplitude, args.n) \
                if args.p > 1 else _solve_extremal("quadrature", args.p, args.mu, args.L, args.n)
        else:
            other = _solve_extremal("shoot", args.p, args.mu, args.L, args.n)
        diff = float(np.max(np.abs(prof.profile.values - other.profile.values)))
        doc["compare"] = {"other_method": other_method, "sup_norm_difference": diff}
    text = reporting.dumps(doc)
    if args.output:
        stem = args.output[:-4] if args.output.endswith(".csv") else args.output
        reporting.write_output(stem + ".csv", prof.profile.to_csv(), force=args.force)
        reporting.write_output(stem + ".json", text, force=args.force)
    else:
        sys.stdout.write(text)
    ok = prof.boundary_residual <= 1e-10 and prof.energy_identity_residual <= 1e-6
    _say(f"extremal p={args.p:.10g} mu={args.mu:.10g} L={args.L:.10g}: A={prof.amplitude:.10g} "
         f"E={prof.energy:.10g} residuals={tuple(f'{r:.2e}' for r in prof.residuals)}")
    return EXIT_OK if ok else EXIT_NUMERICAL


# -- sweep ------------------------------------------------------------------

def cmd_sweep(args):
    if not (args.p_min >= 1.0 and args.p_max > args.p_min and args.steps >= 2):
        raise UsageError("need p_min >= 1, p_max > p_min and steps >= 2")
    RunConfig("sweep", L=args.L, n=args.n, tol=args.tol).validate()
    ps = np.linspace(args.p_min, args.p_max, args.steps)

    def row(p):
        r = var.maximize(float(p), args.L, n=args.n, tol=args.tol)
        return [getattr(r, key) for key in SWEEP_COLUMNS]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(row, ps))  # map keeps the p order
    _emit(reporting.csv_text(SWEEP_COLUMNS, rows), args)
    bad = [r for r in rows if not r[-1]]
    _say(f"sweep: {len(rows)} rows, {len(bad)} not converged")
    return EXIT_NUMERICAL if bad else EXIT_OK


# -- bounds -----------------------------------------------------------------

def cmd_bounds(args):
    RunConfig("bounds", p=args.p, L=args.L, lam=args.lam, n=args.n).validate()
    prof = ef.shoot(args.p, args.lam, args.L, n=args.n)
    if args.mode == "dirichlet":
        report = ineq.energy_lower_bound(args.p, args.lam, args.L, prof.energy)
    else:
        report = ineq.mean_zero_energy_bound(args.p, args.lam, args.L, prof.energy)
    doc = reporting.with_version({
        "mode": args.mode,
        "p": float(args.p),
        "lambda": float(args.lam),
        "L": float(args.L),
        "E": prof.energy,
        "threshold": report.lhs,
        "check": report.to_dict(),
    })
    _emit(reporting.dumps(doc), args)
    _say(f"bounds ({args.mode}): E^((p-1)/2) = {report.rhs:.10g}, threshold {report.lhs:.10g}, "
         f"holds={report.holds}")
    return EXIT_OK if report.holds else EXIT_NUMERICAL


def build_parser():
    parser = _Parser(prog="opial-lab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_output(p):
        p.add_argument("--output", help="write to this file instead of standard output")
        p.add_argument("--force", action="store_true", help="allow overwriting --output")

    c = sub.add_parser("constant", help="optimal constant C_p(L) by three routes")
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--L", type=float, default=1.0)
    c.add_argument("--n", type=int, default=2048)
    c.add_argument("--tol", type=float, default=1e-10)
    c.add_argument("--max-iter", type=int, default=500)
    c.add_argument("--no-maximizer", action="store_true", help="omit the maximizer samples")
    common_output(c)
    c.set_defaults(func=cmd_constant)

    v = sub.add_parser("verify", help="run an inequality over a seeded random corpus")
    v.add_argument("inequality", choices=INEQUALITIES)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--K", type=int, default=8)
    v.add_argument("--decay", type=float, default=1.0)
    v.add_argument("--L", type=float, default=1.0)
    v.add_argument("--p", type=float, default=3.0)
    v.add_argument("--C", type=float, default=None,
                   help="constant for the interpolation check (default: closed form)")
    v.add_argument("--project-mean", action="store_true",
                   help="project each sample onto zero mean (for meanzero)")
    common_output(v)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extremal", help="Emden-Fowler ground state profile")
    e.add_argument("--p", type=float, required=True)
    e.add_argument("--mu", type=float, required=True)
    e.add_argument("--L", type=float, default=1.0)
    e.add_argument("--n", type=int, default=ef.DEFAULT_STEPS)
    e.add_argument("--method", choices=("shoot", "quadrature"), default="shoot")
    e.add_argument("--compare", action="store_true", help="also run the other method")
    common_output(e)
    e.set_defaults(func=cmd_extremal)

    s = sub.add_parser("sweep", help="C_p(L) over a range of p (CSV)")
    s.add_argument("--p-min", type=float, required=True)
    s.add_argument("--p-max", type=float, required=True)
    s.add_argument("--steps", type=int, default=9)
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--n", type=int, default=2048)
    s.add_argument("--tol", type=float, default=1e-10)
    common_output(s)
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("bounds", help="a-priori energy lower bound for a solved BVP")
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--lambda", dest="lam", type=float, required=True)
    b.add_argument("--L", type=float, default=1.0)
    b.add_argument("--n", type=int, default=ef.DEFAULT_STEPS)
    b.add_argument("--mode", choices=("dirichlet", "meanzero"), default="dirichlet")
    common_output(b)
    b.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, FileExistsError) as exc:
        parser.print_usage(sys.stderr)
        print(f"opial-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ef.SolverError, AccuracyError) as exc:
        print(f"opial-lab: numerical failure: {exc}", file=sys.stderr)
        diagnostics = getattr(exc, "diagnostics", None)
        if diagnostics:
            print(f"  diagnostics: {diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
