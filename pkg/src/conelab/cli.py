"""Command-line interface: ``conelab <subcommand> ...``.

Exit codes: 0 success/verified, 1 verification failure, 2 usage error.
Rationals are passed as ``"num/den"`` strings; JSON output keeps a stable key
order and CSV output has a header row.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import branching as br
from . import coefficients as co
from . import gammacone as gc
from . import jordan as jn
from . import laguerre as lg
from . import quadrature as qd
from .params import (
    as_fraction,
    fmt_fraction,
    fmt_partition,
    make_params,
    parse_partition,
    partitions_up_to,
    step,
)
from .report import FAILED
from .suite import SuiteConfig, run_suite
from .symalg import ResourceLimitError, jack_psi

DEFAULT_SEED = 20240611


class UsageError(ValueError):
    pass


def _default_seed() -> int:
    raw = os.environ.get("CONELAB_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CONELAB_SEED must be an integer, got {raw!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"expected an integer or num/den rational, got {text!r}") from None


def _rational_list(text: str) -> List[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _params(args):
    try:
        return make_params(args.r, args.a)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--r/--a: {exc} (need r >= 1 and a > 0)") from None


def _partition_arg(text: str, r: int, flag: str = "--m"):
    try:
        return parse_partition(text, r)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _emit_csv(args, header: Sequence[str], rows: Sequence[Sequence]):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _emit(args, buf.getvalue())


def _domain_args(p: argparse.ArgumentParser, nu: bool = False):
    p.add_argument("--r", type=int, required=True, help="rank r >= 1")
    p.add_argument("--a", type=_rational, required=True, help="multiplicity a > 0 (num/den)")
    if nu:
        p.add_argument("--nu", type=_rational, required=True, help="weight nu (num/den)")


def _out_arg(p):
    p.add_argument("--out", help="write output to this path instead of stdout")


# --- subcommand handlers -----------------------------------------------------


def cmd_gamma(args) -> int:
    params = _params(args)
    lam = _rational_list(args.lam)
    if len(lam) == 1:
        lam = lam * params.r
    if len(lam) != params.r:
        raise UsageError(f"--lambda needs {params.r} components, got {len(lam)}")
    val = gc.gindikin_gamma(lam, params)
    _emit_json(args, {"input": {**params.to_json(), "lambda": [fmt_fraction(x) for x in lam]}, "value": val.to_json()})
    return 0


def cmd_pochhammer(args) -> int:
    params = _params(args)
    lam = _rational_list(args.lam)
    if len(lam) == 1:
        lam = lam * params.r
    if len(lam) != params.r:
        raise UsageError(f"--lambda needs 1 or {params.r} components")
    m = _partition_arg(args.m, params.r)
    val = gc.pochhammer(lam, m, params)
    _emit_json(args, {
        "input": {**params.to_json(), "lambda": [fmt_fraction(x) for x in lam], "m": fmt_partition(m)},
        "value": fmt_fraction(val),
    })
    return 0


def cmd_c_density(args) -> int:
    params = _params(args)
    lam = _float_list(args.lam)
    if len(lam) != params.r:
        raise UsageError(f"--lambda needs {params.r} components")
    _emit_json(args, {"input": {**params.to_json(), "lambda": lam}, "value": gc.c_density(lam, params)})
    return 0


def cmd_jack(args) -> int:
    params = _params(args)
    m = _partition_arg(args.m, params.r)
    psi = jack_psi(m, params)
    _emit_json(args, {"input": {**params.to_json(), "m": fmt_partition(m)}, "psi": psi.to_json()})
    return 0


def cmd_coeffs(args) -> int:
    params = _params(args)
    parts = partitions_up_to(params.r, args.max_weight)
    if args.table == "binom":
        rows = []
        for m in parts:
            row = co.binomial_row(m, params)
            for n in partitions_up_to(params.r, sum(m)):
                rows.append([fmt_partition(m), fmt_partition(n), fmt_fraction(row.get(n, Fraction(0)))])
        _emit_csv(args, ["m", "n", "gen_binom"], rows)
    else:
        rows = []
        for n in parts:
            for k in range(1, params.r + 1):
                b = co.binom_step(n, k, params)
                c = co.c_coeff(n, k, params)
                rows.append([
                    fmt_partition(n), k,
                    fmt_fraction(b.value) if b.defined_at else "undefined",
                    fmt_fraction(c.value) if c.defined_at else "undefined",
                ])
        _emit_csv(args, ["n", "k", "binom_step", "c_coeff"], rows)
    return 0


def _ctx(args, cap: int = 0) -> br.BranchingContext:
    params = _params(args)
    try:
        return br.BranchingContext(params, args.nu, cap)
    except ValueError as exc:
        raise UsageError(f"--nu: {exc}") from None


def cmd_branching(args) -> int:
    ctx = _ctx(args)
    r = ctx.params.r
    out = {"input": ctx.to_json()}
    if args.source is not None:
        src = _partition_arg(args.source, r, "--source")
        node = br.lattice_node(src, ctx)
        vals = br.branching_at_node(src, ctx.with_cap(args.cap))
        out["node"] = {"m": fmt_partition(src), "s": [fmt_fraction(x) for x in node.s]}
        out["values"] = [{"n": fmt_partition(n), "p": fmt_fraction(v)} for n, v in vals.items()]
    if args.n is not None:
        n = _partition_arg(args.n, r, "--n")
        out["n"] = fmt_partition(n)
        out["poly"] = br.branching_poly(n, ctx).to_json()
    if len(out) == 1:
        raise UsageError("give --n and/or --source")
    _emit_json(args, out)
    return 0


def _verify_rows(args):
    if args.identity == "binom":
        return _binom_rows(args), None
    if args.nu is None:
        raise UsageError(f"verify {args.identity} needs --nu")
    ctx = _ctx(args)
    reports = []
    if args.identity in ("recurrence", "difference"):
        for n in partitions_up_to(ctx.params.r, args.max_weight):
            if args.identity == "recurrence":
                reports.append(br.verify_recurrence(n, ctx, mutate=args.mutate_sign))
            else:
                reports.append(br.verify_difference(n, ctx))
        return reports, None
    if args.identity == "euler":
        variants = ["a-half", "d-half"] if args.variant == "both" else [args.variant]
        passing = []
        for v in variants:
            batch = [
                lg.verify_euler_recursion(m, ctx.nu, ctx.params, v, args.placement)
                for m in partitions_up_to(ctx.params.r, args.max_weight)
            ]
            reports.extend(batch)
            if all(rep.ok for rep in batch):
                passing.append(v)
        return reports, passing
    raise UsageError(f"unknown identity {args.identity}")


def _binom_rows(args):
    from .report import EXACT_ZERO, VerificationReport

    params = _params(args)
    reports = []
    for m in partitions_up_to(params.r, args.max_weight):
        for k in range(1, params.r + 1):
            down = step(m, k, "down")
            if down is None:
                continue
            g = co.gen_binom(m, down, params)
            b = co.binom_step(m, k, params).value
            reports.append(VerificationReport(
                "binom-consistency", params.to_json(), EXACT_ZERO if g == b else FAILED, n=m,
                details={"k": k, "gen_binom": fmt_fraction(g), "binom_step": fmt_fraction(b)},
            ))
    return reports


def cmd_verify(args) -> int:
    reports, passing = _verify_rows(args)
    payload = {"reports": [r.to_json(args.include_runtime) for r in reports]}
    if passing is not None:
        payload["passing_variants"] = passing
        ok = bool(passing)
    else:
        ok = all(r.ok for r in reports)
    payload["status"] = "passed" if ok else FAILED
    _emit_json(args, payload)
    return 0 if ok else 1


def cmd_laguerre(args) -> int:
    params = _params(args)
    m = _partition_arg(args.m, params.r)
    L = lg.laguerre_poly(m, args.nu, params)
    out = {
        "input": {**params.to_json(), "nu": fmt_fraction(args.nu), "m": fmt_partition(m)},
        "laguerre_poly": L.to_json(),
        "laguerre_fn": lg.laguerre_fn(m, args.nu, params).to_json(),
    }
    if args.eval is not None:
        x = _float_list(args.eval)
        if len(x) != params.r:
            raise UsageError(f"--eval needs {params.r} coordinates")
        out["eval"] = {"x": x, "L": float(L(x)), "l": lg.laguerre_fn(m, args.nu, params)(x)}
    _emit_json(args, out)
    return 0


def cmd_gram(args) -> int:
    if args.family == "laguerre":
        params = _params(args)
        scheme = qd.RadialScheme(args.scheme or qd.default_scheme(params).kind, args.nodes)
        g = qd.gram_laguerre(args.nu, params, args.max_weight, scheme)
    else:
        if args.r != 1:
            raise UsageError("--r: gram branching is only available at rank 1")
        g = qd.gram_branching_rank1(args.nu, args.max_weight)
    if args.normalized:
        g = g.normalize()
    _emit(args, g.to_csv())
    return 0


def cmd_laplace_check(args) -> int:
    from .report import FAILED as F_, WITHIN_TOLERANCE, VerificationReport
    from .symalg import SymPoly

    params = _params(args)
    scheme = qd.calibrate(params, args.nu, qd.RadialScheme(qd.default_scheme(params).kind, args.nodes))
    reports = []
    for s in args.s:
        val = qd.laplace_at_scalar(lg.ExpPoly(SymPoly.one(params.r)), s, args.nu, params, scheme)
        ref = gc.gindikin_gamma(args.nu, params).value.real * s ** (-params.r * float(args.nu))
        rel = abs(val - ref) / max(abs(ref), 1e-12)
        reports.append(VerificationReport(
            "laplace", {**params.to_json(), "nu": fmt_fraction(args.nu), "s": s},
            WITHIN_TOLERANCE if rel <= 1e-6 else F_, residual=rel, tolerance=1e-6,
        ))
        for m in partitions_up_to(params.r, args.max_weight):
            val = qd.laplace_at_scalar(lg.laguerre_fn(m, args.nu, params), s, args.nu, params, scheme)
            ref = qd.laguerre_transform_reference(m, s, args.nu, params)
            rel = abs(val - ref) / max(abs(val), abs(ref), 1e-12)
            reports.append(VerificationReport(
                "laguerre-transform", {**params.to_json(), "nu": fmt_fraction(args.nu), "s": s},
                WITHIN_TOLERANCE if rel <= 1e-5 else F_, n=m, residual=rel, tolerance=1e-5,
            ))
    ok = all(r.ok for r in reports)
    _emit_json(args, {"reports": [r.to_json() for r in reports], "status": "passed" if ok else F_})
    return 0 if ok else 1


def _grid(text: str) -> List[float]:
    try:
        a, b, h = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if h <= 0 or b < a:
        raise argparse.ArgumentTypeError("need step > 0 and stop >= start")
    n = int(round((b - a) / h))
    return [a + i * h for i in range(n + 1)]


def cmd_berezin(args) -> int:
    rows = [[f"{lam:.10g}", f"{qd.berezin_symbol_rank1(lam, args.nu):.15e}"] for lam in args.grid]
    _emit_csv(args, ["lambda", "b_nu"], rows)
    return 0


def cmd_mc_psi(args) -> int:
    params = _params(args)
    try:
        backend = jn.backend_for(params.a)
    except ValueError as exc:
        raise UsageError(f"--a: {exc}") from None
    try:
        x = jn.parse_matrix(args.x, backend)
    except ValueError as exc:
        raise UsageError(f"--x: {exc}") from None
    if x.r != params.r:
        raise UsageError(f"--x must be {params.r}x{params.r}")
    m = _partition_arg(args.m, params.r)
    seed = args.seed if args.seed is not None else _default_seed()
    est = jn.psi_mc(m, x, args.samples, seed)
    jack = jn.jack_at(m, x, params)
    sig = abs(est.mean - jack) / est.std_error if est.std_error > 0 else 0.0
    _emit_json(args, {
        "input": {**params.to_json(), "m": fmt_partition(m), "x": args.x},
        **est.to_json(), "jack_value": jack, "sigmas": sig,
    })
    return 0


def cmd_suite(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = SuiteConfig(args.name, seed, mutate_recurrence=args.mutate_recurrence)
    result = run_suite(cfg, include_runtime=args.include_runtime)
    _emit_json(args, result)
    return 0 if result["status"] == "passed" else 1


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conelab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gamma", help="Gindikin Gamma function")
    _domain_args(s)
    s.add_argument("--lambda", dest="lam", required=True, help="comma-separated rationals")
    _out_arg(s)
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("pochhammer", help="generalized Pochhammer symbol (lambda)_m")
    _domain_args(s)
    s.add_argument("--lambda", "--nu", dest="lam", required=True)
    s.add_argument("--m", required=True, help="partition, e.g. 2,1")
    _out_arg(s)
    s.set_defaults(func=cmd_pochhammer)

    s = sub.add_parser("c-density", help="|c(lambda)|^-2 up to a constant")
    _domain_args(s)
    s.add_argument("--lambda", dest="lam", required=True)
    _out_arg(s)
    s.set_defaults(func=cmd_c_density)

    s = sub.add_parser("jack", help="spherical polynomial psi_m in the monomial basis")
    _domain_args(s)
    s.add_argument("--m", required=True)
    _out_arg(s)
    s.set_defaults(func=cmd_jack)

    s = sub.add_parser("coeffs", help="tables of binomial and step coefficients")
    _domain_args(s)
    s.add_argument("--max-weight", type=_positive_int, default=3)
    s.add_argument("--table", choices=["binom", "step"], default="binom")
    _out_arg(s)
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("branching", help="branching polynomials and node values")
    _domain_args(s, nu=True)
    s.add_argument("--n", help="index of the polynomial p_{nu,n}")
    s.add_argument("--source", help="lattice node m for branching_at_node")
    s.add_argument("--cap", type=_positive_int, default=3, help="degree cap for node values")
    _out_arg(s)
    s.set_defaults(func=cmd_branching)

    s = sub.add_parser("verify", help="exact identity checks")
    s.add_argument("identity", choices=["recurrence", "difference", "euler", "binom"])
    _domain_args(s)
    s.add_argument("--nu", type=_rational, help="weight nu (num/den); not used by binom")
    s.add_argument("--max-weight", type=_positive_int, default=3)
    s.add_argument("--variant", choices=["a-half", "d-half", "both"], default="both")
    s.add_argument("--placement", choices=["down", "up"], default="down")
    s.add_argument("--mutate-sign", action="store_true", help="flip the recurrence down-term sign")
    s.add_argument("--include-runtime", action="store_true")
    _out_arg(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("laguerre", help="Laguerre polynomial and function")
    _domain_args(s, nu=True)
    s.add_argument("--m", required=True)
    s.add_argument("--eval", help="comma-separated eigenvalues")
    _out_arg(s)
    s.set_defaults(func=cmd_laguerre)

    s = sub.add_parser("gram", help="Gram matrices as CSV")
    s.add_argument("family", choices=["laguerre", "branching"])
    _domain_args(s, nu=True)
    s.add_argument("--max-weight", type=_positive_int, default=3)
    s.add_argument("--nodes", type=int, default=32)
    s.add_argument("--scheme", choices=list(qd.CONE_KINDS))
    s.add_argument("--raw", dest="normalized", action="store_false", help="skip diagonal normalization")
    _out_arg(s)
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("laplace-check", help="numeric Laplace-transform identities")
    _domain_args(s, nu=True)
    s.add_argument("--s", type=_float_list, default=[1.5, 2.0, 3.0])
    s.add_argument("--max-weight", type=_positive_int, default=2)
    s.add_argument("--nodes", type=int, default=32)
    _out_arg(s)
    s.set_defaults(func=cmd_laplace_check)

    s = sub.add_parser("berezin", help="rank-1 Berezin symbol on a lambda grid")
    s.add_argument("--nu", type=_rational, required=True)
    s.add_argument("--lambda-grid", dest="grid", type=_grid, default=_grid("0:10:0.5"))
    _out_arg(s)
    s.set_defaults(func=cmd_berezin)

    s = sub.add_parser("mc-psi", help="Haar Monte-Carlo estimate of psi_m(x)")
    _domain_args(s)
    s.add_argument("--m", required=True)
    s.add_argument("--x", required=True, help='row-major matrix, e.g. "2,0;0,1"')
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    _out_arg(s)
    s.set_defaults(func=cmd_mc_psi)

    s = sub.add_parser("suite", help="run the acceptance battery")
    s.add_argument("name", choices=["quick", "full"])
    s.add_argument("--seed", type=int)
    s.add_argument("--mutate-recurrence", action="store_true", help="flip the recurrence sign (must fail)")
    s.add_argument("--include-runtime", action="store_true", help="add timings (breaks byte-identity)")
    _out_arg(s)
    s.set_defaults(func=cmd_suite)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"conelab: error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimitError, gc.DomainError, br.InterpolationError) as exc:
        print(f"conelab: error: {exc}", file=sys.stderr)
        return 2
    except br.VerificationFailure as exc:
        print(f"conelab: verification failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
