"""Command-line front end: ``qtcorr <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or domain errors.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import operator
import re
import sys
from fractions import Fraction

from . import correlators as corr
from . import fock
from . import verify
from .exceptions import QtcorrError
from .qseries import (DEFAULT_ORDER, VSeries, exp_series, format_rational, inverse, log_series,
                      pochhammer_fin, pochhammer_inf)
from .verify import Check, exact_check, numeric_check, series_deviation

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise UsageError(f"expected an exact rational like 2/3, got {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise UsageError(f"zero denominator in {text!r}") from None


def parse_number(text: str):
    """Exact Fraction for "n/d" or integer input, float for decimals."""
    text = text.strip()
    if _RATIONAL.match(text):
        return parse_rational(text)
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_list(text: str, count: int | None = None, exact_only: bool = False) -> list:
    items = [parse_rational(x) if exact_only else parse_number(x) for x in text.split(",")]
    if count is not None and len(items) != count:
        raise UsageError(f"expected {count} comma-separated values, got {len(items)}")
    return items


def _echo(x):
    if isinstance(x, (Fraction, int)):
        return format_rational(x)
    return x


def series_record(name: str, s: VSeries) -> Check:
    return Check(name, "info", "", {"series": s.to_json()})


# -- series expressions ---------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def evaluate_series(expr: str, order: int = DEFAULT_ORDER) -> VSeries:
    """Evaluate an arithmetic expression in ``v`` exactly, without ``eval``.

    Allowed: integers, + - * / **, the variable v, and the functions
    poch(a, r[, shift]), pochinf(a[, shift]), exp(s), log(s), inv(s).
    """
    funcs = {
        "poch": lambda a, r, shift=0: pochhammer_fin(a, int(r), order, int(shift)),
        "pochinf": lambda a, shift=0: pochhammer_inf(a, order, int(shift)),
        "exp": lambda s: exp_series(_as_series(s, order)),
        "log": lambda s: log_series(_as_series(s, order)),
        "inv": lambda s: inverse(_as_series(s, order)),
    }

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id == "v":
            return VSeries.monomial(1, 1, order)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, Fraction):
                    raise UsageError("exponents must be numbers")
                if right.denominator == 1:
                    right = int(right)
                if isinstance(left, Fraction) and not isinstance(right, int):
                    raise UsageError("rational powers of numbers are not supported")
            elif isinstance(node.op, ast.Div) and isinstance(left, Fraction) and isinstance(right, Fraction):
                if right == 0:
                    raise UsageError("division by zero")
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in funcs \
                and not node.keywords:
            return funcs[node.func.id](*[walk(a) for a in node.args])
        raise UsageError(f"unsupported syntax in series expression: {ast.dump(node)[:60]}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse expression: {exc.msg}") from None
    return _as_series(walk(tree), order)


def _as_series(x, order: int) -> VSeries:
    return x if isinstance(x, VSeries) else VSeries.constant(x, order)


# -- commands --------------------------------------------------------------------

def cmd_onepoint(args) -> tuple:
    q, t = parse_rational(args.q), parse_rational(args.t)
    N = args.order
    closed = corr.one_point_closed(q, t, N)
    brute = corr.trace_brute_hat([(q, t)], N)
    config = {"q": _echo(q), "t": _echo(t), "order": N}
    results = [
        exact_check("closed_minus_brute", series_deviation(closed, brute), order=N,
                    difference=(closed - brute).to_json()),
        series_record("closed", closed),
        series_record("brute", brute),
    ]
    return config, results


def cmd_twopoint(args) -> tuple:
    params = parse_list(args.params, 4)
    q1, t1, q2, t2 = params
    exact_input = all(isinstance(x, Fraction) for x in params)
    config = {"params": [_echo(x) for x in params], "order": args.order,
              "v": args.v, "tolerance": args.tol, "brute_size": args.brute_size}
    if exact_input and q1 * q2 * t1 * t2 == 1 and args.v is None:
        N = args.order
        closed = corr.two_point_closed_special(q1, t1, q2, t2, N)
        brute = corr.trace_brute_hat([(q1, t1), (q2, t2)], N)
        config["mode"] = "exact"
        return config, [
            exact_check("closed_minus_brute", series_deviation(closed, brute), order=N),
            series_record("closed", closed),
            series_record("brute", brute),
        ]
    if args.v is None:
        raise UsageError("numeric two-point evaluation needs --v (or exact parameters with q1 q2 t1 t2 = 1)")
    v = float(parse_number(args.v))
    config["mode"] = "numeric"
    config["v"] = v
    # the brute-force certificate is the stricter domain check, so it runs first
    brute, bound = corr.trace_brute_hat_numeric([(q1, t1), (q2, t2)], v, args.brute_size)
    closed = corr.two_point_closed_general(q1, t1, q2, t2, v, args.tol)
    terms = corr.t_terms_numeric(q1, t1, q2, t2, v, args.tol)
    return config, [
        numeric_check("closed_minus_brute", abs(closed - brute), args.check_tol + bound,
                      closed=repr(closed.real) if closed.imag == 0 else repr(closed),
                      brute=repr(brute.real) if brute.imag == 0 else repr(brute),
                      tail_bound=f"{bound:.3e}"),
        numeric_check("first_term_hyper_form", abs(terms.T1 - terms.routes["T1_hyper"]), args.check_tol),
    ]


def _vertex_params(text: str, kappa: Fraction) -> fock.VertexParams:
    q1, q2, t1, t2 = parse_list(text, 4, exact_only=True)
    return fock.VertexParams.from_qt(q1, q2, t1, t2, kappa)


def cmd_vertex(args) -> tuple:
    kappa = parse_rational(args.kappa)
    N, K = args.order, args.zeta_order
    first = _vertex_params(args.params, kappa)
    config = {"params": args.params, "kappa": _echo(kappa), "order": N, "n": args.n}
    if args.n == 1:
        closed = fock.zero_mode_trace_closed(first.u, first.w, first.s, first.t, kappa, N)
        proj = fock.v0_expectation(first, N)
        matrix = pochhammer_inf(1, N, shift=1) * fock.v0_trace(first, N, route="matrix")
        return config, [
            exact_check("closed_minus_trace", series_deviation(closed, proj)),
            exact_check("projection_minus_matrix", series_deviation(proj, matrix)),
            series_record("closed", closed),
            series_record("trace", proj),
        ]
    if args.n != 2:
        raise UsageError("exact vertex traces are available for --n 1 and --n 2")
    second = _vertex_params(args.params2 or args.params, kappa)
    config.update({"params2": args.params2 or args.params, "zeta_order": K})
    closed = fock.vertex_product_closed([first, second], N, K)
    brute = fock.two_vertex_trace(first, second, N, K) * pochhammer_inf(1, N, shift=1)
    return config, [
        exact_check("closed_minus_trace", closed.max_deviation(brute), order=N, zeta_order=K),
        Check("closed", "info", "", {"zeta_series": closed.to_json()}),
    ]


def cmd_verify(args) -> tuple:
    names = "all" if args.suite == "all" else [args.suite]
    workers = args.workers if args.workers is not None else verify.worker_count()
    reports = verify.run_suites(names, seed=args.seed, tol=args.tol, workers=workers)
    config = {"suite": args.suite, "seed": args.seed, "tolerance": args.tol}
    results = []
    for suite, checks in reports.items():
        for c in checks:
            results.append(Check(f"{suite}/{c.name}", c.status, c.deviation, c.details))
    return config, results


def cmd_series(args) -> tuple:
    s = evaluate_series(args.expr, args.order)
    return {"expr": args.expr, "order": args.order}, [series_record("value", s)]


# -- output -------------------------------------------------------------------

def render(fmt: str, command: str, config: dict, results: list) -> str:
    if fmt == "json":
        doc = {"command": command, "config": config, "results": [r.to_json() for r in results]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "deviation", "power", "coefficient"])
        for r in results:
            series = r.details.get("series")
            if series:
                for k, c in enumerate(series["coefficients"]):
                    w.writerow([r.name, r.status, r.deviation, k, c])
            else:
                w.writerow([r.name, r.status, r.deviation, "", ""])
        return buf.getvalue()
    lines = []
    for r in results:
        series = r.details.get("series")
        if series:
            lines.append(f"{r.name}: {VSeries.from_json(series)}")
        else:
            lines.append(f"{r.status.upper():5} {r.name}  deviation={r.deviation}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtcorr", description="q,t correlation functions of partitions")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("onepoint", parents=[common], help="one-point function: closed form vs partition sum")
    p.add_argument("--q", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)

    p = sub.add_parser("twopoint", parents=[common], help="two-point function, exact or numeric")
    p.add_argument("--params", required=True, help="q1,t1,q2,t2")
    p.add_argument("--v", default=None, help="numeric value of v (switches to the numeric backend)")
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-12, help="summation tolerance")
    p.add_argument("--check-tol", type=float, default=1e-8, help="agreement tolerance")
    p.add_argument("--brute-size", type=int, default=corr.DEFAULT_BRUTE_SIZE)

    p = sub.add_parser("vertex", parents=[common], help="vertex-operator traces")
    p.add_argument("--params", required=True, help="q1,q2,t1,t2 of the first vertex")
    p.add_argument("--params2", default=None, help="q1,q2,t1,t2 of the second vertex (n = 2)")
    p.add_argument("--kappa", default="1")
    p.add_argument("--n", type=int, default=1, choices=(1, 2))
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--zeta-order", type=int, default=6)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=verify.NUMERIC_TOL)
    p.add_argument("--workers", type=int, default=None, help="overrides QTCORR_THREADS")

    p = sub.add_parser("series", parents=[common], help="exact series arithmetic in v")
    p.add_argument("expr")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    return parser


COMMANDS = {"onepoint": cmd_onepoint, "twopoint": cmd_twopoint, "vertex": cmd_vertex,
            "verify": cmd_verify, "series": cmd_series}


def _validate(parser, args):
    for name in ("order", "zeta_order", "brute_size"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name.replace('_', '-')} must be nonnegative")
    for name in ("tol", "check_tol"):
        if getattr(args, name, 1) <= 0:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "workers", None) is not None and args.workers < 1:
        parser.error("--workers must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        config, results = COMMANDS[args.command](args)
    except (UsageError, QtcorrError, ValueError, ZeroDivisionError) as exc:
        print(f"qtcorr {args.command}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(args.format, args.command, config, results))
    return 1 if any(r.status == "fail" for r in results) else 0


if __name__ == "__main__":
    sys.exit(main())
