"""Evaluation of parsed ``.kmut`` scripts.

Statements run in order.  A failed ``assert`` marks the report failed but
evaluation continues; a math error (for instance pairing two fiber sheaves)
aborts with an :class:`EvalError` pointing at the offending node.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import KMutError, MutationError
from ..ktheory import SPACES, KClass, chi, chi_pair, euler_on_Y, exc_div_class, fiber, line
from ..mutation import MutationStep, gram_matrix, run_sequence
from .ast import (
    Assert,
    AtomF,
    AtomO,
    AtomOe,
    Eval,
    Let,
    Mutate,
    Name,
    Print,
    Scale,
    Script,
    Serre,
    Span,
    Sum,
    expr_source,
)


class EvalError(KMutError):
    def __init__(self, message: str, span: Span | None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.message}"


@dataclass
class AssertionResult:
    source: str
    expected: int
    actual: int
    span: Span | None = None

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class TraceRecord:
    """Mutation steps executed while evaluating one ``lmut``/``rmut``/``serre`` node."""

    source: str
    span: Span | None
    steps: tuple[MutationStep, ...]


@dataclass
class EvalReport:
    outputs: list[str] = field(default_factory=list)
    assertions: list[AssertionResult] = field(default_factory=list)
    traces: list[TraceRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def _format_gram(gram) -> str:
    width = max(len(str(x)) for row in gram for x in row)
    return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in gram)


class Evaluator:
    def __init__(self, script: Script):
        self.script = script
        self.space = SPACES[script.space.name]
        self.env: dict[str, KClass] = {}
        self.report = EvalReport()

    def run(self) -> EvalReport:
        for stmt in self.script.statements:
            if isinstance(stmt, Let):
                self.env[stmt.name] = self.cexpr(stmt.expr)
            elif isinstance(stmt, Print):
                if isinstance(stmt.expr, Eval):
                    value = self.eexpr(stmt.expr)
                    text = _format_gram(value) if stmt.expr.func == "gram" else str(value)
                else:
                    text = str(self.cexpr(stmt.expr))
                self.report.outputs.append(text)
            elif isinstance(stmt, Assert):
                actual = self.eexpr(stmt.expr)
                self.report.assertions.append(
                    AssertionResult(expr_source(stmt.expr), stmt.expected, actual, stmt.span)
                )
        return self.report

    def _guard(self, node, fn, *args):
        try:
            return fn(*args)
        except MutationError as exc:
            raise EvalError(f"mutation step {exc.step + 1} failed: {exc.cause}", node.span) from exc
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise EvalError(str(exc), node.span) from exc

    def cexpr(self, node) -> KClass:
        space = self.space
        if isinstance(node, Name):
            if node.ident not in self.env:
                raise EvalError(f"undefined name {node.ident!r}", node.span)
            return self.env[node.ident]
        if isinstance(node, AtomO):
            return self._guard(node, line, space, node.degrees, node.e or 0)
        if isinstance(node, AtomF):
            return self._guard(node, fiber, space, node.twist)
        if isinstance(node, AtomOe):
            return self._guard(node, exc_div_class, space, node.k, node.extra or None)
        if isinstance(node, Scale):
            return node.coeff * self.cexpr(node.operand)
        if isinstance(node, Sum):
            total = KClass(space)
            for sign, term in node.terms:
                value = self.cexpr(term)
                total = total + value if sign == "+" else total - value
            return total
        if isinstance(node, Mutate):
            direction = "left" if node.direction == "lmut" else "right"
            target = self.cexpr(node.target)
            steps = [(direction, self.cexpr(m)) for m in node.mutators]
            return self._traced(node, target, steps)
        if isinstance(node, Serre):
            return self._traced(node, self.cexpr(node.operand), [("serre", node.sign)])
        raise EvalError(f"not a class expression: {type(node).__name__}", getattr(node, "span", None))

    def _traced(self, node, target, steps) -> KClass:
        trace = self._guard(node, run_sequence, target, steps)
        self.report.traces.append(TraceRecord(expr_source(node), node.span, trace.steps))
        return trace.final

    def eexpr(self, node: Eval):
        args = [self.cexpr(a) for a in node.args]
        if node.func == "chi":
            return self._guard(node, chi_pair, *args)
        if node.func == "chiH":
            return self._guard(node, chi, args[0])
        if node.func == "chiY":
            return self._guard(node, euler_on_Y, args[0])
        if node.func == "gram":
            return self._guard(node, gram_matrix, args)
        raise EvalError(f"unknown function {node.func!r}", node.span)


def evaluate(script: Script) -> EvalReport:
    return Evaluator(script).run()
