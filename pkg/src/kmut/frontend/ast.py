"""Syntax tree for ``.kmut`` scripts and its canonical printer.

Every node records a source ``span`` that is excluded from equality, so
``parse(to_source(tree)) == tree`` is a meaningful round-trip check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Name:
    ident: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AtomO:
    degrees: tuple[int, ...]
    e: Optional[int] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AtomF:
    twist: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AtomOe:
    """``Oe(k)`` or ``Oe(x,y|k)``: exceptional divisor sheaf ``O_e(k e)`` twisted by ``O(x,y)``."""

    k: int
    extra: tuple[int, ...] = ()
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Scale:
    coeff: int
    operand: "ClassExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[str, "ClassExpr"], ...]  # (sign, term); first sign is "+"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Mutate:
    direction: str  # "lmut" or "rmut"
    target: "ClassExpr"
    mutators: tuple["ClassExpr", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Serre:
    operand: "ClassExpr"
    sign: int
    span: Optional[Span] = _span()


ClassExpr = Union[Name, AtomO, AtomF, AtomOe, Scale, Sum, Mutate, Serre]


@dataclass(frozen=True)
class Eval:
    func: str  # chi, chiH, chiY, gram
    args: tuple[ClassExpr, ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Let:
    name: str
    expr: ClassExpr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Print:
    expr: Union[Eval, ClassExpr]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Assert:
    expr: Eval
    expected: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Script:
    space: SpaceDecl
    statements: tuple[Union[Let, Print, Assert], ...]
    span: Optional[Span] = _span()


def _ints(xs) -> str:
    return ",".join(str(x) for x in xs)


def expr_source(node, nested: bool = False) -> str:
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, AtomO):
        tail = f"|{node.e}" if node.e is not None else ""
        return f"O({_ints(node.degrees)}{tail})"
    if isinstance(node, AtomF):
        return f"F({node.twist})"
    if isinstance(node, AtomOe):
        if node.extra:
            return f"Oe({_ints(node.extra)}|{node.k})"
        return f"Oe({node.k})"
    if isinstance(node, Scale):
        return f"{node.coeff}*{expr_source(node.operand, nested=True)}"
    if isinstance(node, Sum):
        text = expr_source(node.terms[0][1], nested=True)
        for sign, term in node.terms[1:]:
            text += f" {sign} {expr_source(term, nested=True)}"
        return f"({text})" if nested else text
    if isinstance(node, Mutate):
        muts = ", ".join(expr_source(m) for m in node.mutators)
        return f"{node.direction}({expr_source(node.target)}; {muts})"
    if isinstance(node, Serre):
        return f"serre({expr_source(node.operand)}, {node.sign:+d})"
    if isinstance(node, Eval):
        return f"{node.func}({', '.join(expr_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def to_source(script: Script) -> str:
    """Canonical text of a script; reparses to an equal tree."""
    lines = [f"space {script.space.name}"]
    for stmt in script.statements:
        if isinstance(stmt, Let):
            lines.append(f"let {stmt.name} = {expr_source(stmt.expr)}")
        elif isinstance(stmt, Print):
            lines.append(f"print {expr_source(stmt.expr)}")
        else:
            lines.append(f"assert {expr_source(stmt.expr)} == {stmt.expected}")
    return "\n".join(lines) + "\n"
