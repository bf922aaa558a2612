"""Command line interface: ``kmut verify | run | chi | chow``.

Exit codes: 0 everything passed, 1 an assertion or scenario failed,
2 usage or parse error, 3 math error during evaluation.
"""
from __future__ import annotations

import argparse
import ast as pyast
import json
import operator
import re
import sys
from fractions import Fraction
from pathlib import Path

from ..chow import ChowRing, FormalBundle, ci_euler, direct_sum, line_bundle, porteous_class
from ..errors import KMutError
from ..ktheory import chi_pair
from .ast import Script, SpaceDecl
from .evaluator import EvalError, Evaluator, evaluate
from .lexer import ParseError
from .parser import parse, parse_class_expr

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MATH = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting ---------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


def _json_number(x):
    """Return (number or None, repr or None) for a JSON result field."""
    if x is None:
        return None, None
    if isinstance(x, bool):
        return None, repr(x)
    if isinstance(x, int):
        return x, None
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator, None
    return None, _fmt(x)


def _result(rid: str, status: str, expected, actual, ref: str) -> dict:
    out = {"id": rid, "status": status, "ref": ref}
    for key, value in (("expected", expected), ("actual", actual)):
        num, text = _json_number(value)
        out[key] = num
        if text is not None:
            out[f"{key}_repr"] = text
    return out


def _summary(results: list[dict]) -> dict:
    return {k: sum(r["status"] == k for r in results) for k in ("pass", "fail", "error")}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    from ..scenarios import run_all

    leaves = run_all(args.filter, workers=args.workers)
    if not leaves:
        raise UsageError(f"no scenario id starts with {args.filter!r}")
    results = [_result(r.id, r.status, r.expected, r.actual, r.reference) for r in leaves]
    summary = _summary(results)
    if args.json:
        print(_dump({"suite": "verify", "results": results, "summary": summary}))
    else:
        for r in leaves:
            line = f"{r.status.upper():5} {r.id}: expected {_fmt(r.expected)}, got {_fmt(r.actual)}"
            if r.status == "error":
                line = f"ERROR {r.id}: {r.description}"
            print(line)
            for name, e, a in r.failed_checks():
                print(f"      sub-check failed: {name}: expected {e}, got {a}")
        if summary["fail"] or summary["error"]:
            print(f"{summary['fail']} failed, {summary['error']} errors, {summary['pass']} passed")
        else:
            print(f"all scenarios pass ({summary['pass']})")
    return EXIT_OK if not (summary["fail"] or summary["error"]) else EXIT_FAIL


# -- run ----------------------------------------------------------------------


def _trace_json(report) -> list[dict]:
    out = []
    for rec in report.traces:
        steps = []
        for s in rec.steps:
            if s.direction == "serre":
                steps.append({"direction": "serre", "sign": s.mutator})
            else:
                steps.append({"direction": s.direction, "mutator": str(s.mutator), "chi": s.computed_chi})
        out.append({"expr": rec.source, "line": rec.span.line if rec.span else None, "steps": steps})
    return out


def cmd_run(args) -> int:
    path = Path(args.file)
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    try:
        script = parse(source)
    except ParseError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = evaluate(script)
    except EvalError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        return EXIT_MATH

    if args.json:
        results = [
            _result(
                f"assert.{i:02d}",
                "pass" if a.passed else "fail",
                a.expected,
                a.actual,
                f"{path.name}:{a.span} {a.source}",
            )
            for i, a in enumerate(report.assertions, start=1)
        ]
        doc = {"suite": path.name, "results": results, "summary": _summary(results), "outputs": report.outputs}
        if args.trace:
            doc["trace"] = _trace_json(report)
        print(_dump(doc))
    else:
        for text in report.outputs:
            print(text)
        if args.trace:
            for rec in report.traces:
                print(f"trace {rec.span}: {rec.source}")
                for s in rec.steps:
                    if s.direction == "serre":
                        print(f"  serre {s.mutator:+d}")
                    else:
                        print(f"  {s.direction} past {s.mutator}: chi = {s.computed_chi}")
        for a in report.assertions:
            status = "PASS" if a.passed else "FAIL"
            print(f"{status} {a.span}: {a.source} == {a.expected} (got {a.actual})")
    return EXIT_OK if report.passed else EXIT_FAIL


# -- chi ------------------------------------------------------------------------


def cmd_chi(args) -> int:
    try:
        a = parse_class_expr(args.a, args.space)
        b = parse_class_expr(args.b, args.space)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ev = Evaluator(Script(SpaceDecl(args.space), ()))
    try:
        print(chi_pair(ev.cexpr(a), ev.cexpr(b)))
    except EvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    return EXIT_OK


# -- chow -----------------------------------------------------------------------

_RING_RE = re.compile(r"P(\d+)(xP\d+)*")


def parse_ring(text: str) -> ChowRing:
    """``P4xP1`` -> ChowRing((4, 1)); generators ``h``, ``t`` (or ``h1``..``hk``)."""
    if not _RING_RE.fullmatch(text):
        raise UsageError(f"bad ring {text!r}: expected something like P4 or P4xP1")
    dims = tuple(int(p[1:]) for p in text.split("x"))
    if any(d < 1 for d in dims):
        raise UsageError(f"bad ring {text!r}: factor dimensions must be positive")
    return ChowRing(dims)


def parse_degree(text: str, ring: ChowRing) -> tuple:
    try:
        degs = tuple(Fraction(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bad degree {text!r}: expected comma-separated numbers")
    if len(degs) != ring.arity:
        raise UsageError(f"degree {text!r} needs {ring.arity} entries for {ring}")
    return tuple(int(d) if d.denominator == 1 else d for d in degs)


_BINOPS = {pyast.Add: operator.add, pyast.Sub: operator.sub, pyast.Mult: operator.mul, pyast.Div: operator.truediv}


def eval_chow_expr(text: str, ring: ChowRing):
    """Evaluate a polynomial in the ring's generators, e.g. ``(2*h)**2*(3*h)**2``."""
    names = dict(zip(ring.names, ring.gens()))
    try:
        tree = pyast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc.msg}")

    def walk(node):
        if isinstance(node, pyast.Expression):
            return walk(node.body)
        if isinstance(node, pyast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return ring.scalar(node.value)
        if isinstance(node, pyast.Name):
            if node.id not in names:
                raise UsageError(f"unknown generator {node.id!r}; this ring has {', '.join(ring.names)}")
            return names[node.id]
        if isinstance(node, pyast.UnaryOp) and isinstance(node.op, (pyast.USub, pyast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, pyast.USub) else v
        if isinstance(node, pyast.BinOp):
            if isinstance(node.op, pyast.Pow):
                exp = node.right
                if not (isinstance(exp, pyast.Constant) and isinstance(exp.value, int)):
                    raise UsageError("exponents must be integer literals")
                return walk(node.left) ** exp.value
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        raise UsageError(f"unsupported syntax in {text!r}")

    return walk(tree)


def _sum_of_lines(ring: ChowRing, degrees: list[str]) -> FormalBundle:
    bundle = None
    for d in degrees:
        piece = line_bundle(ring, parse_degree(d, ring))
        bundle = piece if bundle is None else direct_sum(bundle, piece)
    return bundle


def cmd_chow(args) -> int:
    ring = parse_ring(args.ring)
    if args.chow_cmd == "integrate":
        print(_fmt(eval_chow_expr(args.expr, ring).integrate()))
    elif args.chow_cmd == "euler-ci":
        print(_fmt(ci_euler(ring, [parse_degree(d, ring) for d in args.degrees])))
    else:
        cls = porteous_class(_sum_of_lines(ring, args.source), _sum_of_lines(ring, args.target), args.rank)
        top = cls.part(ring.dim)
        if cls == top and cls:
            print(_fmt(cls.integrate()))
        else:
            print(cls)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kmut", description="K-group mutation and Chow-ring calculator")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run the scenario suite")
    v.add_argument("--filter", default=None, metavar="PREFIX", help="only scenario ids with this prefix")
    v.add_argument("--json", action="store_true")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("run", help="evaluate a .kmut script")
    r.add_argument("file")
    r.add_argument("--json", action="store_true")
    r.add_argument("--trace", action="store_true", help="show the chi used by every mutation step")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("chi", help="Euler pairing chi(A, B) of two classes")
    c.add_argument("space", choices=["P", "H", "P4xP1"])
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(func=cmd_chi)

    ch = sub.add_parser("chow", help="Chow-ring computations on products of projective spaces")
    chs = ch.add_subparsers(dest="chow_cmd", required=True)
    i = chs.add_parser("integrate", help="degree of a polynomial in h, t (or h1..hk)")
    i.add_argument("ring")
    i.add_argument("expr")
    e = chs.add_parser("euler-ci", help="topological Euler characteristic of a complete intersection")
    e.add_argument("ring")
    e.add_argument("degrees", nargs="+", metavar="DEG", help="divisor multidegree such as 2,1")
    pt = chs.add_parser("porteous", help="Thom-Porteous class of the rank <= r locus of E -> F")
    pt.add_argument("ring")
    pt.add_argument("--source", nargs="+", required=True, metavar="DEG", help="line-bundle degrees summing to E")
    pt.add_argument("--target", nargs="+", required=True, metavar="DEG", help="line-bundle degrees summing to F")
    pt.add_argument("--rank", type=int, required=True)
    ch.set_defaults(func=cmd_chow)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KMutError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


def cli_main(argv: list[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
