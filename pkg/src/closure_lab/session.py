"""Input language for the closure-lab CLI: lexer, parser, pretty-printer.

Statements declare one ambient ring, then ideals, elements, modules, maps and
oracles by name, followed by check commands.  Parsing resolves polynomial
expressions to canonical values over the declared base ring, so printing a
parsed session and re-parsing it yields an identical AST.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .rings import PolyRing, Polynomial, order_by_name


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(expected))
        suffix = f" (expected one of: {', '.join(self.expected)})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, PUNCT, EOF
    text: str
    line: int
    col: int


_PUNCT2 = ("->",)
_PUNCT1 = "();,=/^*+-:"


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text[i : i + 2] in _PUNCT2:
            tokens.append(Token("PUNCT", text[i : i + 2], line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT1:
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("PUNCT", "NAME")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text == text and tok.kind in ("PUNCT", "NAME"):
            return self.next()
        raise ParseError(f"found {tok.text!r}", tok.line, tok.col, (repr(text),))

    def expect_kind(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"found {tok.text!r}", tok.line, tok.col, (kind,))
        return self.next()

    def expect_int(self) -> int:
        return int(self.expect_kind("INT").text)

    def fail(self, message: str, expected: tuple[str, ...] = ()):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col, expected)


# --- polynomial expressions ----------------------------------------------
# expr := ['-'] term (('+'|'-') term)* ; term := factor ('*' factor)*
# factor := atom ['^' INT] ; atom := INT | VAR | '(' expr ')'


def _parse_poly(cur: _Cursor, ring: PolyRing) -> Polynomial:
    def atom() -> Polynomial:
        tok = cur.peek()
        if tok.kind == "INT":
            cur.next()
            return ring.constant(int(tok.text))
        if tok.kind == "NAME":
            cur.next()
            try:
                return ring.gen(ring.names.index(tok.text))
            except ValueError:
                raise ParseError(
                    f"unknown variable {tok.text!r}", tok.line, tok.col, ring.names
                ) from None
        if cur.accept("("):
            value = expr()
            cur.expect(")")
            return value
        cur.fail("expected a polynomial atom", ("INT", "variable", "'('"))

    def factor() -> Polynomial:
        value = atom()
        if cur.accept("^"):
            value = value ** cur.expect_int()
        return value

    def term() -> Polynomial:
        value = factor()
        while cur.accept("*"):
            value = value * factor()
        return value

    def expr() -> Polynomial:
        negate = cur.accept("-")
        value = term()
        if negate:
            value = -value
        while True:
            if cur.accept("+"):
                value = value + term()
            elif cur.accept("-"):
                value = value - term()
            else:
                return value

    return expr()


def parse_poly_text(ring: PolyRing, text: str) -> Polynomial:
    cur = _Cursor(tokenize(text))
    value = _parse_poly(cur, ring)
    tok = cur.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col, ("EOF",))
    return value
