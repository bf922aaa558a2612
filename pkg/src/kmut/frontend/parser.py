"""Recursive-descent parser for ``.kmut`` scripts.

Grammar (whitespace-insensitive, ``#`` comments)::

    script    := "space" SPACE { stmt }
    stmt      := "let" IDENT "=" cexpr | "print" (eexpr | cexpr) | "assert" eexpr "==" INT
    cexpr     := term { ("+" | "-") term }
    term      := [ INT "*" ] prim
    prim      := IDENT | atom | "(" cexpr ")"
               | ("lmut" | "rmut") "(" cexpr ";" cexpr { "," cexpr } ")"
               | "serre" "(" cexpr "," ("+1" | "-1") ")"
    atom      := "O" "(" INT { "," INT } [ "|" INT ] ")" | "F" "(" INT ")"
               | "Oe" "(" INT ")" | "Oe" "(" INT { "," INT } "|" INT ")"
    eexpr     := "chi" "(" cexpr "," cexpr ")" | "chiH" "(" cexpr ")" | "chiY" "(" cexpr ")"
               | "gram" "(" cexpr { "," cexpr } ")"

``O(x,y|z)`` means ``O(x,y)(z e)``; ``Oe(x,y|k)`` is ``O_e(k e)`` twisted by ``O(x,y)``.
"""
from __future__ import annotations

from ..ktheory import SPACES, HyperSpace, ProjProduct
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
    SpaceDecl,
    Sum,
)
from .lexer import ParseError, Token, tokenize

EVAL_FUNCS = {"chi": 2, "chiH": 1, "chiY": 1, "gram": None}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.space = None
        self.names: set[str] = set()

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def span(self, tok: Token | None = None) -> Span:
        tok = tok or self.tok
        return Span(tok.line, tok.column)

    def error(self, message: str, hint: str | None = None, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column, hint)

    def unexpected(self, message: str, hint: str | None = None):
        found = self.tok.lexeme or "end of input"
        self.error(f"{message}, found {found!r}", hint)

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (lexeme is None or t.lexeme == lexeme)

    def accept(self, kind: str, lexeme: str | None = None) -> Token | None:
        if self.at(kind, lexeme):
            t = self.tok
            self.pos += 1
            return t
        return None

    def expect(self, kind: str, lexeme: str | None = None, hint: str | None = None) -> Token:
        t = self.accept(kind, lexeme)
        if t is None:
            what = repr(lexeme) if lexeme else kind
            self.unexpected(f"expected {what}", hint)
        return t

    def expect_int(self) -> int:
        return self.expect("int", hint="an integer literal").value

    # -- grammar
    def script(self) -> Script:
        start = self.expect("keyword", "space", hint="scripts start with 'space P', 'space H' or 'space P4xP1'")
        name_tok = self.expect("ident", hint="one of " + ", ".join(SPACES))
        if name_tok.lexeme not in SPACES:
            self.error(f"unknown space {name_tok.lexeme!r}", "one of " + ", ".join(SPACES), tok=name_tok)
        self.space = SPACES[name_tok.lexeme]
        decl = SpaceDecl(name_tok.lexeme, self.span(start))
        stmts = []
        while not self.at("eof"):
            stmts.append(self.statement())
        return Script(decl, tuple(stmts), decl.span)

    def statement(self):
        t = self.tok
        if self.accept("keyword", "let"):
            name = self.expect("ident", hint="a variable name").lexeme
            if name in ("O", "F", "Oe"):
                self.error(f"{name!r} is reserved for atoms", tok=self.tokens[self.pos - 1])
            self.expect("punct", "=")
            expr = self.cexpr()
            self.names.add(name)
            return Let(name, expr, self.span(t))
        if self.accept("keyword", "print"):
            if self.tok.kind == "keyword" and self.tok.lexeme in EVAL_FUNCS:
                return Print(self.eexpr(), self.span(t))
            return Print(self.cexpr(), self.span(t))
        if self.accept("keyword", "assert"):
            ev = self.eexpr()
            if ev.func == "gram":
                self.error("gram matrices cannot be asserted", tok=t)
            self.expect("punct", "==")
            return Assert(ev, self.expect_int(), self.span(t))
        self.unexpected("expected a statement", "'let', 'print' or 'assert'")

    def eexpr(self) -> Eval:
        t = self.tok
        if t.kind != "keyword" or t.lexeme not in EVAL_FUNCS:
            self.unexpected("expected chi, chiH, chiY or gram")
        self.pos += 1
        self.expect("punct", "(")
        args = [self.cexpr()]
        while self.accept("punct", ","):
            args.append(self.cexpr())
        arity = EVAL_FUNCS[t.lexeme]
        if arity is not None and len(args) != arity:
            self.error(f"{t.lexeme} takes {arity} argument(s), got {len(args)}", tok=t)
        self.expect("punct", ")")
        return Eval(t.lexeme, tuple(args), self.span(t))

    def cexpr(self):
        start = self.tok
        terms = [("+", self.term())]
        while self.at("punct", "+") or self.at("punct", "-"):
            sign = self.tok.lexeme
            self.pos += 1
            terms.append((sign, self.term()))
        if len(terms) == 1:
            return terms[0][1]
        return Sum(tuple(terms), self.span(start))

    def term(self):
        t = self.tok
        if t.kind == "int":
            self.pos += 1
            self.expect("punct", "*", hint="an integer multiplicity is written N*expr")
            return Scale(t.value, self.prim(), self.span(t))
        return self.prim()

    def prim(self):
        t = self.tok
        if t.kind == "ident":
            nxt = self.tokens[self.pos + 1]
            if t.lexeme in ("O", "F", "Oe") and nxt.kind == "punct" and nxt.lexeme == "(":
                return self.atom()
            self.pos += 1
            if t.lexeme not in self.names:
                self.error(f"undefined name {t.lexeme!r}", tok=t)
            return Name(t.lexeme, self.span(t))
        if self.accept("punct", "("):
            inner = self.cexpr()
            self.expect("punct", ")")
            return inner
        if t.kind == "keyword" and t.lexeme in ("lmut", "rmut"):
            self.pos += 1
            self.expect("punct", "(")
            target = self.cexpr()
            self.expect("punct", ";", hint="write lmut(target; mutator, ...)")
            muts = [self.cexpr()]
            while self.accept("punct", ","):
                muts.append(self.cexpr())
            self.expect("punct", ")")
            return Mutate(t.lexeme, target, tuple(muts), self.span(t))
        if t.kind == "keyword" and t.lexeme == "serre":
            self.pos += 1
            self.expect("punct", "(")
            operand = self.cexpr()
            self.expect("punct", ",")
            sign_tok = self.expect("int", hint="+1 or -1")
            if sign_tok.lexeme not in ("+1", "-1"):
                self.error("serre sign must be +1 or -1", tok=sign_tok)
            self.expect("punct", ")")
            return Serre(operand, sign_tok.value, self.span(t))
        self.unexpected("expected a class expression", "a name, an atom O(..)/F(..)/Oe(..), lmut, rmut, serre or '('")

    def _int_list(self) -> list[int]:
        vals = [self.expect_int()]
        while self.accept("punct", ","):
            vals.append(self.expect_int())
        return vals

    def atom(self):
        head = self.tok
        self.pos += 2  # head and "("
        space = self.space
        span = self.span(head)
        if head.lexeme == "F":
            if not isinstance(space, HyperSpace):
                self.error("fiber sheaves F(d) only exist on space H", tok=head)
            node = AtomF(self.expect_int(), span)
        elif head.lexeme == "O":
            degs = self._int_list()
            self._check_arity(degs, head)
            e = None
            if self.accept("punct", "|"):
                if isinstance(space, ProjProduct):
                    self.error(f"space {space} has no exceptional divisor", tok=head)
                e = self.expect_int()
            node = AtomO(tuple(degs), e, span)
        else:
            if isinstance(space, ProjProduct):
                self.error(f"space {space} has no exceptional divisor", tok=head)
            vals = self._int_list()
            if self.accept("punct", "|"):
                self._check_arity(vals, head)
                node = AtomOe(self.expect_int(), tuple(vals), span)
            elif len(vals) == 1:
                node = AtomOe(vals[0], (), span)
            else:
                self.unexpected("expected '|'", "write Oe(k) or Oe(x,y|k)")
        self.expect("punct", ")")
        return node

    def _check_arity(self, degs, head: Token):
        if len(degs) != self.space.arity:
            self.error(
                f"{head.lexeme}(...) needs {self.space.arity} degree(s) on this space, got {len(degs)}",
                tok=head,
            )


def parse(source_or_tokens) -> Script:
    tokens = tokenize(source_or_tokens) if isinstance(source_or_tokens, str) else source_or_tokens
    return Parser(list(tokens)).script()


def parse_class_expr(source: str, space_name: str):
    """Parse a lone class expression against a named space (for the CLI)."""
    p = Parser(tokenize(source))
    if space_name not in SPACES:
        raise ParseError(f"unknown space {space_name!r}", 1, 1, "one of " + ", ".join(SPACES))
    p.space = SPACES[space_name]
    expr = p.cexpr()
    p.expect("eof")
    return expr
