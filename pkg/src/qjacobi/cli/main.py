"""``qjacobi`` command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numeric domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

from .. import analytic as an
from .. import dimensions as dm
from ..algebra import Subalgebra, basis_monomials, profile, q_op
from ..brackets import BracketFamily, star_truncated
from ..calculus import d_deriv, delta, dtau, dz, eisenstein, oberdieck, theta
from .grammar import ParseError, parse
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

DERIVATIONS = {"dz": dz, "dtau": dtau, "ob": oberdieck, "delta": delta, "theta": theta, "d": d_deriv}
FAMILIES = {"rc": BracketFamily.RC, "rcd": BracketFamily.RC_d, "tv": BracketFamily.TV}
ALGEBRAS = {"js": Subalgebra.JS, "js0inf": Subalgebra.JS0inf, "jsinf0": Subalgebra.JSinf0, "jsinf": Subalgebra.JSinf}


class Output:
    """Collects records and renders them as text, JSON lines or CSV."""

    def __init__(self, args):
        self.json = getattr(args, "json", False)
        self.lines: List[str] = []

    def record(self, command: str, inputs: dict, result, text: Optional[str] = None, **extra):
        if self.json:
            rec = {"command": command, "inputs": inputs, "result": result, **extra}
            self.lines.append(json.dumps(rec, sort_keys=False, default=str))
        else:
            self.lines.append(text if text is not None else str(result))

    def raw(self, text: str):
        self.lines.append(text)

    def emit(self, path: Optional[str]):
        body = "\n".join(self.lines) + ("\n" if self.lines else "")
        if path:
            with open(path, "w") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


def _cmd_derive(args, out: Output) -> int:
    f = parse(args.expr)
    g = DERIVATIONS[args.op](f)
    out.record("derive", {"op": args.op, "expr": str(f)}, str(g))
    return EXIT_OK


def _cmd_bracket(args, out: Output) -> int:
    f, g = parse(args.f), parse(args.g)
    fam = FAMILIES[args.family]
    res = fam.bracket(args.n, f, g)
    out.record("bracket", {"family": fam.value, "n": args.n, "f": str(f), "g": str(g)}, str(res))
    return EXIT_OK


def _cmd_depth(args, out: Output) -> int:
    f = parse(args.expr)
    prof = profile(f)
    result = {"weight": prof.weight, "depth": list(prof.depth), "algebra": prof.subalgebra.value if f else None}
    text = f"weight {prof.weight if prof.weight is not None else '-'}  depth {prof.depth}  algebra {result['algebra']}"
    out.record("depth", {"expr": str(f)}, result, text)
    return EXIT_OK


def _cmd_qop(args, out: Output) -> int:
    f = parse(args.expr)
    g = q_op(args.j1, args.j2, f)
    out.record("qop", {"j1": args.j1, "j2": args.j2, "expr": str(f)}, str(g))
    return EXIT_OK


def _cmd_dims(args, out: Output) -> int:
    which = ALGEBRAS[args.algebra]
    if args.route == "all":
        reports = dm.dimension_reports(which, args.kmax)
        routes = list(reports[0].values) if reports else []
        rows = [[r.k] + [r.values[name] for name in routes] + [r.agree] for r in reports]
        header = ["k"] + routes + ["agree"]
        ok = all(r.agree for r in reports)
    else:
        if args.route == "series":
            vals = dm.dims_by_series(which, args.kmax)
        elif args.route == "enumeration":
            vals = [dm.dims_by_enumeration(which, k) for k in range(args.kmax + 1)]
        else:
            vals = [dm.dims_closed_form(which, k) for k in range(args.kmax + 1)]
        rows = [[k, v] for k, v in enumerate(vals)]
        header = ["k", args.route]
        ok = True
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        out.raw(buf.getvalue().rstrip("\n"))
    elif out.json:
        for row in rows:
            out.record("dims", {"algebra": which.value, "k": row[0]}, dict(zip(header[1:], row[1:])))
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        out.raw("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for row in rows:
            out.raw("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))
        if args.route == "all":
            out.raw(f"all routes agree: {ok}")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_basis(args, out: Output) -> int:
    which = ALGEBRAS[args.algebra]
    monos = basis_monomials(args.k, which)
    out.record("basis", {"k": args.k, "algebra": which.value}, [str(m) for m in monos], "\n".join(str(m) for m in monos) or "(empty)")
    return EXIT_OK


def _cmd_eisenstein(args, out: Output) -> int:
    f = eisenstein(args.k)
    out.record("eisenstein", {"k": args.k}, str(f))
    return EXIT_OK


def _cmd_star(args, out: Output) -> int:
    f, g = parse(args.f), parse(args.g)
    fam = FAMILIES[args.family]
    series = star_truncated(args.order, f, g, fam)
    for n, coeff in enumerate(series):
        out.record("star", {"family": fam.value, "order": n, "f": str(f), "g": str(g)}, str(coeff), f"hbar^{n}: {coeff}")
    return EXIT_OK


def _cmd_series(args, out: Output) -> int:
    if args.what == "ek":
        if args.k is None:
            raise ValueError("--k is required for --what ek")
        coeffs = series_ek(args.k, args.terms)
        lead = Fraction(2**args.k, math.factorial(args.k)) * abs(an.bernoulli(args.k))
        inputs = {"what": "ek", "k": args.k, "terms": args.terms, "constant": f"{lead}*pi^{args.k}"}
        out.record("series", inputs, [str(c) for c in coeffs],
                   f"e_{args.k} = {lead}*pi^{args.k} * (" + " + ".join(f"{c}*q^{n}" for n, c in enumerate(coeffs)) + ")")
    else:
        pairs = series_laurent(args.what, args.terms)
        out.record("series", {"what": args.what, "terms": args.terms}, {str(p): str(c) for p, c in pairs},
                   "\n".join(f"z^{p}: {c}" for p, c in pairs))
    return EXIT_OK


def series_ek(k: int, terms: int) -> List[Fraction]:
    """Normalized q-coefficients 1, -2k/B_k sigma_{k-1}(n), ... of e_k."""
    from sympy import divisor_sigma

    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    bk = an.bernoulli(k)
    return [Fraction(1)] + [Fraction(-2 * k) / bk * int(divisor_sigma(n, k - 1)) for n in range(1, terms)]


def series_laurent(what: str, terms: int):
    """Symbolic Laurent coefficients of P or E1 in z."""
    if what == "wp":
        return [(-2, parse("1"))] + [(2 * n, (2 * n + 1) * eisenstein(2 * n + 2)) for n in range(1, terms)]
    return [(-1, parse("1"))] + [(2 * n + 1, -eisenstein(2 * n + 2)) for n in range(0, terms - 1)]


def _cmd_verify(args, out: Output) -> int:
    ctx = an.NumericContext.from_env(tol=args.tol, nq=args.nq, nz=args.nz)
    records = run_suite(args.suite, seed=args.seed, count=args.count, ctx=ctx)
    failed = 0
    for rec in records:
        failed += not rec.passed
        if out.json:
            out.raw(json.dumps(rec.to_json(), default=str))
        else:
            res = f"  residual={rec.residual:.3e}" if rec.residual is not None else ""
            label = ", ".join(f"{k}={v}" for k, v in rec.inputs.items() if k in ("suite", "check", "n", "element", "function", "algebra", "sample"))
            out.raw(f"{'PASS' if rec.passed else 'FAIL'}  {label}{res}")
    if not out.json:
        out.raw(f"{len(records) - failed}/{len(records)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON record per result")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    parser = argparse.ArgumentParser(prog="qjacobi", description="Exact algebra of quasi-Jacobi forms of index zero.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="apply a derivation")
    p.add_argument("--op", choices=sorted(DERIVATIONS), required=True)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("bracket", parents=[common], help="n-th bracket of two forms")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("depth", parents=[common], help="weight, double depth and smallest subalgebra")
    p.add_argument("expr")
    p.set_defaults(func=_cmd_depth)

    p = sub.add_parser("qop", parents=[common], help="depth-expansion coefficient Q_{j1,j2}")
    p.add_argument("j1", type=int)
    p.add_argument("j2", type=int)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_qop)

    p = sub.add_parser("dims", parents=[common], help="dimension table")
    p.add_argument("--algebra", choices=sorted(ALGEBRAS), default="js")
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--route", choices=("all", "series", "enumeration", "closed"), default="series")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("basis", parents=[common], help="monomial basis of a weight space")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algebra", choices=sorted(ALGEBRAS), default="js")
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("eisenstein", parents=[common], help="e_k in the generators")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_eisenstein)

    p = sub.add_parser("star", parents=[common], help="truncated star product")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=_cmd_star)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=("identities", "stability", "associativity", "dimensions", "analytic", "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5, help="random samples per check")
    p.add_argument("--tol", type=float)
    p.add_argument("--nq", type=int)
    p.add_argument("--nz", type=int)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("series", parents=[common], help="expansion coefficients")
    p.add_argument("--what", choices=("ek", "wp", "e1"), required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--terms", type=int, default=6)
    p.set_defaults(func=_cmd_series)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    out = Output(args)
    try:
        code = args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except an.DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.emit(args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
