"""Recursive-descent parser for polynomial and rational-function expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

Identifiers match ``[a-z][a-z0-9_]*``; implicit multiplication is rejected.
"""
from __future__ import annotations

import re
from typing import Sequence

from .mpoly import MPoly
from .ratfunc import DivisionByZeroPolynomial, RatFunc


class ExpressionSyntaxError(SyntaxError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


class UnknownVariable(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[a-z][a-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(message, self.text, tok[2])

    def parse(self) -> RatFunc:
        value = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            self.fail("implicit multiplication or trailing input" if tok[0] in ("int", "ident") or tok[1] == "("
                      else f"unexpected {tok[1]!r}")
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroPolynomial(
                        f"division by zero polynomial at position {tok[2]}: {self.text!r}")
                value = value / rhs
        return value

    def unary(self) -> RatFunc:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be a nonnegative integer literal", tok)
            base = base ** int(tok[1])
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.fail("chained exponent needs parentheses")
        return base

    def atom(self) -> RatFunc:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return RatFunc.const(int(val), self.variables)
        if kind == "ident":
            if val not in self.variables:
                raise UnknownVariable(f"unknown variable {val!r} at position {pos}; known: {list(self.variables)}")
            return RatFunc.var(val, self.variables)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'", close)
            return inner
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def parse_ratfunc(text: str, variables: Sequence[str]) -> RatFunc:
    return _Parser(text, tuple(variables)).parse()


def parse_expression(text: str, variables: Sequence[str]) -> MPoly | RatFunc:
    """Parse to the canonical value: an MPoly when the result is a polynomial, else a RatFunc."""
    value = parse_ratfunc(text, variables)
    return value.as_poly() if value.is_polynomial() else value


def parse_poly(text: str, variables: Sequence[str]) -> MPoly:
    value = parse_ratfunc(text, variables)
    if not value.is_polynomial():
        raise ValueError(f"{text!r} is not a polynomial")
    return value.as_poly()


def identifiers(text: str) -> list:
    """Identifiers in order of first appearance (no validation)."""
    seen = []
    for m in re.finditer(r"[a-z][a-z0-9_]*", text):
        if m.group() not in seen:
            seen.append(m.group())
    return seen
