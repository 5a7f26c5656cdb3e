"""Command-line runs with machine-readable output.

    afetrace lvalue -D -4 --route afe
    afetrace elliptic -p 2 -k 2 -M 10
    afetrace verify lfunsum --pmax 5 --kmax 3 --mmax 30

Every run prints one JSON object ``{config, rows, summary}`` or, with
``--format csv``, the same rows as CSV preceded by ``#`` lines carrying the
config and summary.  Exit status: 0 success, 2 invalid input, 3 a tolerance
or identity check failed.

The parallelism degree (``--jobs``, default from ``AFETRACE_JOBS``) is left
out of the recorded config: results are reduced in a fixed order, so output
does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .arith import is_fundamental_discriminant, primes_up_to
from .elliptic import (
    EllipticClassGL2,
    ThetaModel,
    enumerate_elliptic,
    kottwitz_gl3,
    lvalue_provider,
    padic_orbital_product,
    residue_split_check,
    verify_lfun_sum,
    volume,
)
from .gamma_afe import GammaShape, cutoff_V, decay_check, gamma_complex, l_value_afe, stirling_gamma
from .lfunctions import DEFAULT_N_MAX, class_data, l_value_cnf, l_value_direct
from .smoothing import SmoothProbeSpec, disc_map_gl_n, finite_order_phi, probe_derivatives, probe_value_decay

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOLERANCE = 3

ELLIPTIC_COLUMNS = ["m", "sign", "delta", "s_gamma", "D_E", "volume", "padic_product", "term"]
SUITES = ("afe", "lfunsum", "split", "decay", "stirling", "smooth", "kottwitz")
THETA_PROFILES = ("bump", "gaussian", "flat")
SPLIT_TOL = 1e-12


class InvalidInput(ValueError):
    pass


def _default_jobs() -> int:
    raw = os.environ.get("AFETRACE_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items, jobs: int) -> list:
    """map preserving input order; a process pool when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _clean(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


# ---------------------------------------------------------------------------
# lvalue

def cmd_lvalue(args) -> tuple[list, dict]:
    D, s = args.D, args.s
    if args.route == "direct":
        est = l_value_direct(D, s, args.nmax)
    elif args.route == "cnf":
        if s != 1:
            raise InvalidInput("the class number formula route gives s = 1 only")
        if not is_fundamental_discriminant(D) or D == 1:
            raise InvalidInput(f"{D} is not a nontrivial fundamental discriminant")
        est = l_value_cnf(class_data(D))
    else:
        if D == 1:
            raise InvalidInput("trivial character")
        est = l_value_afe(D, s, args.X, min(args.tol, 1e-10))
    row = {"D": D, "s": s, "route": args.route, "value": float(est.value), "error": float(est.error)}
    passed = row["error"] <= args.tol
    return [row], {"passed": passed}


# ---------------------------------------------------------------------------
# elliptic

def _theta_profile(name: str) -> ThetaModel:
    if name == "bump":
        return ThetaModel.bump(1.0)
    if name == "gaussian":
        return ThetaModel(lambda x: math.exp(-x * x))
    return ThetaModel(lambda x: 1.0)


def _elliptic_row(job) -> dict:
    m, sign, p, k, profile, route, nmax = job
    c = EllipticClassGL2.build(m, sign, p, k)
    orb = padic_orbital_product(c)
    row = {"m": m, "sign": sign, "delta": c.delta, "s_gamma": c.s_gamma, "D_E": c.D_E}
    if not c.elliptic:
        row.update(volume=None, padic_product=orb, term=None)
        return row
    kw = {"N_max": nmax} if route == "direct" else {}
    vol = volume(c, lvalue_provider(route, **kw)).value
    th = _theta_profile(profile)(c.x)
    L = vol / math.sqrt(abs(c.D_E))
    row.update(volume=vol, padic_product=orb, term=L * th * float(orb) / c.s_gamma)
    return row


def cmd_elliptic(args) -> tuple[list, dict]:
    classes = enumerate_elliptic(args.p, args.k, args.M, args.include_squares)
    jobs = [(c.m, c.sign, c.p, c.k, args.theta_profile, args.route, args.nmax) for c in classes]
    rows = _pmap(_elliptic_row, jobs, args.jobs)
    total = math.fsum(r["term"] for r in rows if r["term"] is not None)
    return rows, {"n_classes": len(rows), "sum": total, "passed": True}


# ---------------------------------------------------------------------------
# verify suites

def _afe_case(job) -> dict:
    D, X, tol = job
    a = l_value_afe(D, 1.0, X, 1e-10)
    d = l_value_direct(D, 1.0)
    diff = abs(a.value - d.value)
    return {
        "D": D, "X": X, "afe": a.value, "afe_error": a.error,
        "direct": d.value, "direct_error": d.error, "diff": diff, "passed": diff < tol,
    }


def suite_afe(args) -> list:
    Ds = [D for D in range(-args.dmax + 1, args.dmax) if D != 1 and is_fundamental_discriminant(D)]
    jobs = [(D, X, args.tol) for D in Ds for X in (0.25, 1.0, 4.0)]
    return _pmap(_afe_case, jobs, args.jobs)


def _lfunsum_case(job) -> dict:
    m, sign, p, k, tol = job
    r = verify_lfun_sum(EllipticClassGL2.build(m, sign, p, k), tol)
    return {
        "p": p, "k": k, "sign": sign, "m": m, "delta": r.delta, "lhs": r.lhs, "rhs": r.rhs,
        "error_bound": r.error, "discrepancy": r.discrepancy, "printed_ratio": r.printed_ratio,
        "passed": r.passed,
    }


def suite_lfunsum(args) -> list:
    jobs = []
    for p in primes_up_to(args.pmax):
        for k in range(1, args.kmax + 1):
            for c in enumerate_elliptic(p, k, args.mmax):
                jobs.append((c.m, c.sign, p, k, args.tol))
    return _pmap(_lfunsum_case, jobs, args.jobs)


def _split_case(job) -> dict:
    ell, f, p, k, sign, M, width = job
    r = residue_split_check(ell, f, p, k, sign, lambda m: math.exp(-((m / width) ** 2)), M, tol=SPLIT_TOL)
    return {
        "ell": ell, "f": f, "p": p, "k": k, "sign": sign, "M": M, "direct": r.direct,
        "grouped": r.grouped, "discrepancy": r.discrepancy, "n_terms": r.n_terms, "passed": r.passed,
    }


def split_configs(n: int, seed: int) -> list[tuple]:
    """Random (ell <= 5, f <= 4, M <= 400) configurations, M a multiple of 4 ell f^2."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        ell, f = rng.randint(1, 5), rng.randint(1, 4)
        mod = 4 * ell * f * f
        if mod > 400:
            continue
        M = mod * rng.randint(1, 400 // mod)
        p = rng.choice((2, 3, 5, 7))
        out.append((ell, f, p, rng.randint(1, 3), rng.choice((1, -1)), M, rng.uniform(5.0, 200.0)))
    return out


def suite_split(args) -> list:
    return _pmap(_split_case, split_configs(args.cases, args.seed), args.jobs)


def suite_decay(args) -> list:
    rows = []
    grid = np.arange(1.0, 51.0)
    for name, shape in (("odd", GammaShape.odd_quadratic()), ("even", GammaShape.even_quadratic())):
        rep = decay_check(shape, 1.0, args.m, grid)
        v50 = abs(cutoff_V(shape, 1.0, 50.0).value)
        v0 = cutoff_V(shape, 1.0, 1e-3).value
        ok = rep.passed and v50 < 1e-6 and abs(v0 - 1) < 1e-2
        rows.append({
            "shape": name, "m": args.m, "sup": rep.sup, "argsup": rep.argsup, "bound": rep.bound,
            "tail_decreasing": rep.tail_decreasing, "V_at_50": v50, "V_at_0.001": v0, "passed": ok,
        })
    return rows


def suite_stirling(args) -> list:
    rows = []
    ts = np.linspace(10.0, 100.0, 100)
    for sigma in (0.5, 1.0, 2.0, 3.0):
        for t in ts:
            exact = abs(gamma_complex(complex(sigma, t)))
            rel = abs(stirling_gamma(sigma, t) / exact - 1)
            rows.append({"sigma": sigma, "t": float(t), "rel_error": rel, "bound": 2 / t, "passed": rel <= 2 / t})
    return rows


def _smooth_cases(negative_control: bool):
    d2, d3 = disc_map_gl_n(1, 2), disc_map_gl_n(1, 3)
    cases = []
    for n, dm, pt in ((2, d2, (2.0,)), (3, d3, (3.0, 3.0))):
        for beta in (0.0, 0.3, 0.8):
            cases.append(("probe", n, pt, SmoothProbeSpec(dm, beta, 0.5)))
        if negative_control:
            # phi of decay order 2 with beta = 0.8: M alpha - 1 - beta = -0.8
            spec = SmoothProbeSpec(dm, 0.8, 0.5, finite_order_phi(2), decay_order=2)
            cases.append(("control", n, pt, spec))
    return cases


def suite_smooth(args) -> list:
    rows = []
    for kind, n, pt, spec in _smooth_cases(args.negative_control):
        val = probe_value_decay(spec, pt)
        der = probe_derivatives(spec, pt, 1)
        row = {
            "kind": kind, "n": n, "point": list(pt), "beta": spec.beta, "alpha": spec.alpha,
            "margin": spec.margin, "value_finest": val.finest, "deriv_finest": der.finest,
        }
        if kind == "probe":
            row["passed"] = val.finest < 1e-6 and der.finest < 1e-6 and val.passed and der.passed
        else:
            row["passed"] = der.finest > 1e-2
        rows.append(row)
    return rows


def suite_kottwitz(args) -> list:
    rows = []
    spots = {(2, 1, "unramified", None): 85, (3, 1, "ramified", 1): 157}
    for p in primes_up_to(args.pmax):
        for n in range(1, args.nmax + 1):
            for variant, v in (("unramified", None), ("ramified", 1), ("ramified", 2)):
                val = kottwitz_gl3(p, n, variant, v)
                ok = val.denominator == 1 and val > 0
                expected = spots.get((p, n, variant, v))
                if expected is not None:
                    ok = ok and val == expected
                rows.append({"p": p, "n": n, "variant": variant, "val_beta": v, "value": val,
                             "integral": val.denominator == 1, "expected": expected, "passed": ok})
    return rows


SUITE_FUNCS = {
    "afe": suite_afe, "lfunsum": suite_lfunsum, "split": suite_split, "decay": suite_decay,
    "stirling": suite_stirling, "smooth": suite_smooth, "kottwitz": suite_kottwitz,
}


def cmd_verify(args) -> tuple[list, dict]:
    rows = SUITE_FUNCS[args.suite](args)
    n_fail = sum(1 for r in rows if not r["passed"])
    return rows, {"cases": len(rows), "failed": n_fail, "passed": n_fail == 0}


# ---------------------------------------------------------------------------
# parsing and output

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="tolerance for pass/fail (default 1e-6)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $AFETRACE_JOBS or 1); does not affect output")

    parser = argparse.ArgumentParser(prog="afetrace", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"afetrace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    lv = sub.add_parser("lvalue", parents=[common], help="L(s, chi_D) by one route")
    lv.add_argument("-D", type=int, required=True)
    lv.add_argument("-s", type=float, default=1.0)
    lv.add_argument("--route", choices=("direct", "cnf", "afe"), default="direct")
    lv.add_argument("-X", type=float, default=1.0, help="AFE balance parameter")
    lv.add_argument("--nmax", type=int, default=DEFAULT_N_MAX, help="direct-sum cutoff")

    el = sub.add_parser("elliptic", parents=[common], help="per-class elliptic terms for GL(2)")
    el.add_argument("-p", type=int, required=True)
    el.add_argument("-k", type=int, required=True)
    el.add_argument("-M", type=int, required=True, help="trace bound |m| <= M")
    el.add_argument("--include-squares", action="store_true")
    el.add_argument("--theta-profile", choices=THETA_PROFILES, default="bump")
    el.add_argument("--route", choices=("direct", "cnf", "afe"), default="direct")
    el.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)

    ve = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ve.add_argument("suite", choices=SUITES)
    ve.add_argument("--pmax", type=int, default=None, help="prime bound (lfunsum: 5, kottwitz: 50)")
    ve.add_argument("--kmax", type=int, default=3)
    ve.add_argument("--mmax", type=int, default=30)
    ve.add_argument("--nmax", type=int, default=6, help="kottwitz: largest n")
    ve.add_argument("--dmax", type=int, default=200, help="afe: |D| < dmax")
    ve.add_argument("--cases", type=int, default=50, help="split: number of random configurations")
    ve.add_argument("-m", type=float, default=4.0, help="decay: order m")
    ve.add_argument("--negative-control", action="store_true", help="smooth: add the violated-condition control")
    return parser


def _validate(args) -> None:
    if args.jobs is None:
        args.jobs = _default_jobs()
    if args.jobs < 1:
        raise InvalidInput("--jobs must be >= 1")
    if not args.tol > 0:
        raise InvalidInput("--tol must be positive")
    if args.command == "verify" and args.pmax is None:
        args.pmax = 50 if args.suite == "kottwitz" else 5
    if args.command == "elliptic" and args.M < 0:
        raise InvalidInput("-M must be >= 0")


def resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "jobs"}
    if args.command == "verify" and args.suite == "split":
        cfg["split_tol"] = SPLIT_TOL
    cfg["version"] = __version__
    return cfg


def render(config: dict, rows: list, summary: dict, fmt: str) -> str:
    rows = [{k: _clean(v) for k, v in r.items()} for r in rows]
    summary = {k: _clean(v) for k, v in summary.items()}
    if fmt == "json":
        return json.dumps({"config": config, "rows": rows, "summary": summary}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    buf.write("# summary " + json.dumps(summary, sort_keys=True) + "\n")
    if config["command"] == "elliptic":
        columns = ELLIPTIC_COLUMNS
    else:
        columns = list(rows[0]) if rows else []
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: "" if r.get(k) is None else r.get(k) for k in columns})
    return buf.getvalue()


COMMANDS = {"lvalue": cmd_lvalue, "elliptic": cmd_elliptic, "verify": cmd_verify}


def run(argv=None) -> tuple[int, str]:
    """Parse and execute; returns (exit code, rendered output)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        rows, summary = COMMANDS[args.command](args)
    except (InvalidInput, ValueError, OverflowError) as exc:
        return EXIT_INVALID, f"error: {exc}\n"
    out = render(resolved_config(args), rows, summary, args.format)
    return (EXIT_OK if summary["passed"] else EXIT_TOLERANCE), out


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code != EXIT_INVALID else sys.stderr
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
