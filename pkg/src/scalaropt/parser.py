"""Lexer and recursive-descent parser for one-variable expressions.

Grammar (whitespace insignificant, identifiers lowercase):

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' factor)?          right-associative
    atom    := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass

from scalaropt.errors import ExprSyntaxError, UnknownIdentifierError
from scalaropt.expr import (
    FUNCTIONS,
    NAMED_CONSTANTS,
    VARIABLE_NAME,
    Binary,
    BinaryOp,
    Constant,
    Expr,
    Unary,
    UnaryOp,
    Variable,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Token:
    """One lexeme and where it starts."""

    kind: str  # "number", "ident", an operator/paren character, or "end"
    text: str
    offset: int  # UTF-8 byte offset


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_BINARY_TOKENS = {
    "+": BinaryOp.ADD,
    "-": BinaryOp.SUB,
    "*": BinaryOp.MUL,
    "/": BinaryOp.DIV,
}


def tokenize(text: str) -> list[Token]:
    """Split text into tokens, ending with an ``end`` token."""
    tokens: list[Token] = []
    pos = 0
    byte_offset = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", byte_offset)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "number":
            tokens.append(Token("number", lexeme, byte_offset))
        elif kind == "ident":
            tokens.append(Token("ident", lexeme, byte_offset))
        elif kind == "op":
            tokens.append(Token(lexeme, lexeme, byte_offset))
        byte_offset += len(lexeme.encode("utf-8"))
        pos = m.end()
    tokens.append(Token("end", "", byte_offset))
    return tokens


class Parser:
    """Recursive-descent parser over a token list; one method per grammar rule."""

    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.current = 0

    def peek(self) -> Token:
        return self.tokens[self.current]

    def advance(self) -> Token:
        token = self.tokens[self.current]
        if token.kind != "end":
            self.current += 1
        return token

    def check(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def expect(self, kind: str, what: str) -> Token:
        """Consume a token of ``kind`` or fail naming ``what``."""
        if not self.check(kind):
            self._fail(what)
        return self.advance()

    def _fail(self, expected: str) -> None:
        token = self.peek()
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ExprSyntaxError(f"expected {expected}, found {found}", token.offset)

    # -- grammar rules -------------------------------------------------

    def parse(self) -> Expr:
        result = self.expr()
        if not self.check("end"):
            self._fail("operator or end of input")
        return result

    def expr(self) -> Expr:
        left = self.term()
        while self.check("+", "-"):
            op = _BINARY_TOKENS[self.advance().kind]
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.check("*", "/"):
            op = _BINARY_TOKENS[self.advance().kind]
            left = Binary(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        if self.check("-"):
            self.advance()
            return Unary(UnaryOp.NEG, self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.check("^"):
            self.advance()
            return Binary(BinaryOp.POW, base, self.factor())
        return base

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number {token.text!r} is out of range", token.offset)
            return Constant(value)
        if token.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")", "')'")
            return inner
        if token.kind == "ident":
            return self._identifier()
        self._fail("number, 'x', constant, function or '('")
        raise AssertionError("unreachable")

    def _identifier(self) -> Expr:
        token = self.advance()
        name = token.text
        if name == VARIABLE_NAME:
            return Variable()
        if name in NAMED_CONSTANTS:
            return Constant(NAMED_CONSTANTS[name], symbol=name)
        if name in FUNCTIONS:
            self.expect("(", f"'(' after {name}")
            argument = self.expr()
            self.expect(")", "')'")
            return Unary(UnaryOp(name), argument)
        raise UnknownIdentifierError(name, token.offset)


def parse(text: str) -> Expr:
    """Parse expression text into an ``Expr`` tree.

    Raises:
        ExprSyntaxError: malformed input, with byte offset and expected token.
        UnknownIdentifierError: identifier other than x, pi, e or a function.
    """
    tree = Parser(tokenize(text)).parse()
    log.debug("Parsed %r", text)
    return tree
