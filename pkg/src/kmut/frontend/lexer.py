"""Tokenizer for ``.kmut`` scripts."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import KMutError

KEYWORDS = frozenset(
    {"space", "let", "print", "assert", "lmut", "rmut", "serre", "chi", "chiH", "chiY", "gram"}
)
PUNCT = ("==", "(", ")", ",", "|", ";", "=", "+", "-", "*")
# a sign directly after one of these starts a signed integer literal
_SIGN_CONTEXT = frozenset({"(", ",", "|", ";", "=", "==", "+", "-", "*"})


class ParseError(KMutError):
    def __init__(self, message: str, line: int, column: int, hint: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.hint = hint

    def __str__(self):
        text = f"{self.line}:{self.column}: {self.message}"
        if self.hint:
            text += f" ({self.hint})"
        return text


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, punct, eof
    lexeme: str
    line: int
    column: int

    @property
    def value(self) -> int:
        return int(self.lexeme)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def prev_allows_sign() -> bool:
        if not tokens:
            return True
        last = tokens[-1]
        return last.kind == "keyword" or (last.kind == "punct" and last.lexeme in _SIGN_CONTEXT)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isascii() and ch.isdigit() or (
            ch in "+-" and i + 1 < n and source[i + 1].isascii() and source[i + 1].isdigit() and prev_allows_sign()
        ):
            j = i + 1
            while j < n and source[j].isascii() and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i + 1
            while j < n and source[j].isascii() and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if j < n and not source[j].isascii() and source[j].isalpha():
                raise ParseError(f"invalid character {source[j]!r} in identifier", line, col + j - i, "identifiers are ASCII")
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, line, start_col))
            col += j - i
            i = j
            continue
        for p in PUNCT:
            if source.startswith(p, i):
                tokens.append(Token("punct", p, line, start_col))
                i += len(p)
                col += len(p)
                break
        else:
            hint = "identifiers are ASCII" if not ch.isascii() else None
            raise ParseError(f"invalid character {ch!r}", line, col, hint)
    tokens.append(Token("eof", "", line, col))
    return tokens
