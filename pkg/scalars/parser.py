"""Textual scalar grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := int | 'i' | 'r2' | 't' | ident | '(' expr ')'

Every expression evaluates to a RatFunc in t once its named parameters are bound.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from scalars.errors import InputError, ScalarSyntaxError, UnboundParameterError
from scalars.field import I, R2, ExactScalar
from scalars.poly import Poly, RatFunc

Binding = Union[int, Fraction, ExactScalar, RatFunc]

RESERVED = {"i", "r2", "t"}

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ScalarDivisionError(InputError, ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    value: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            break
        number, name, op = match.groups()
        start = match.start(match.lastindex) if match.lastindex else pos
        if number is not None:
            tokens.append(Token("int", number, start))
        elif name is not None:
            tokens.append(Token("name", name, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise ScalarSyntaxError(f"Unexpected character {op!r}", text, start)
            tokens.append(Token("op", op, start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, bindings: Mapping[str, Binding]):
        self.text = text
        self.bindings = bindings
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.value == op:
            self.index += 1
            return True
        return False

    def _error(self, message: str) -> ScalarSyntaxError:
        return ScalarSyntaxError(message, self.text, self.current.position)

    def parse(self) -> RatFunc:
        if self.current.kind == "end":
            raise self._error("Empty expression")
        value = self.expr()
        if self.current.kind != "end":
            raise self._error(f"Unexpected token {self.current.value!r}")
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while True:
            if self._accept("+"):
                value = value + self.term()
            elif self._accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RatFunc:
        value = self.unary()
        while True:
            if self._accept("*"):
                value = value * self.unary()
            elif self.current.kind == "op" and self.current.value == "/":
                position = self.current.position
                self.index += 1
                divisor = self.unary()
                if divisor.is_zero():
                    raise ScalarDivisionError(
                        f"Division by zero at position {position} in {self.text!r}"
                    )
                value = value / divisor
            else:
                return value

    def unary(self) -> RatFunc:
        if self._accept("-"):
            return -self.unary()
        return self.factor()

    def factor(self) -> RatFunc:
        base = self.atom()
        if self._accept("^"):
            if self.current.kind != "int":
                raise self._error("Exponent must be a non-negative integer")
            base = base ** int(self._advance().value)
        return base

    def atom(self) -> RatFunc:
        token = self.current
        if token.kind == "int":
            self.index += 1
            return RatFunc.coerce(int(token.value))
        if token.kind == "name":
            self.index += 1
            if token.value == "i":
                return RatFunc.coerce(I)
            if token.value == "r2":
                return RatFunc.coerce(R2)
            if token.value == "t":
                return RatFunc.t()
            if token.value not in self.bindings:
                raise UnboundParameterError(token.value)
            return RatFunc.coerce(self.bindings[token.value])
        if self._accept("("):
            value = self.expr()
            if not self._accept(")"):
                raise self._error("Expected ')'")
            return value
        raise self._error(f"Unexpected token {token.value or 'end of input'!r}")


def parse_scalar_expr(text: str, bindings: Optional[Mapping[str, Binding]] = None) -> RatFunc:
    return _Parser(str(text), bindings or {}).parse()


def parse_constant(text: str, bindings: Optional[Mapping[str, Binding]] = None) -> ExactScalar:
    """Parse an expression that must not depend on t."""
    value = parse_scalar_expr(text, bindings)
    if not value.is_constant:
        raise InputError(f"Expected a constant, got {text!r}")
    return value.constant_value()


def free_names(text: str) -> set[str]:
    return {
        tok.value for tok in tokenize(str(text))
        if tok.kind == "name" and tok.value not in RESERVED
    }


def ratfunc_eval(f: RatFunc, t0: Union[int, Fraction, ExactScalar]) -> ExactScalar:
    return f.evaluate(t0)


def ratfunc_is_zero(f: RatFunc) -> bool:
    return f.is_zero()


def format_scalar(value: Union[int, Fraction, ExactScalar]) -> str:
    return str(ExactScalar.coerce(value))


def _format_poly(poly: Poly) -> str:
    if poly.is_zero():
        return "0"
    parts: list[tuple[str, str]] = []
    for degree in range(poly.degree, -1, -1):
        coeff = poly.coeffs[degree]
        if coeff.is_zero():
            continue
        power = "" if degree == 0 else ("t" if degree == 1 else f"t^{degree}")
        if coeff.is_rational:
            mag = abs(coeff.rational())
            sign = "-" if coeff.rational() < 0 else "+"
            if not power:
                body = str(mag)
            elif mag == 1:
                body = power
            else:
                body = f"{mag}*{power}"
        else:
            sign = "+"
            body = f"({coeff})" + (f"*{power}" if power else "")
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_ratfunc(f: RatFunc) -> str:
    if f.den.is_one():
        return _format_poly(f.num)
    return f"({_format_poly(f.num)})/({_format_poly(f.den)})"
