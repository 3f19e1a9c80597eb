"""Parser for the expression text grammar.

Grammar (``^`` binds tightest and is right associative)::

    expr    := term (("+" | "-") term)*
    term    := power (("*" | "/") power)*
    power   := atom ("^" power)?
    atom    := NUMBER | NAME ["(" "x" ")"] | FUNC "(" expr ["," expr] ")" | "(" expr ")"

``a/b`` with two integer literals folds into one rational constant, so
``1/2*lovasz_theta(x)`` is a product with the constant 1/2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from graphbrain.expr import (
    OPERATORS,
    Binary,
    ConstantLeaf,
    Expression,
    InvariantSymbol,
    Leaf,
    Unary,
)


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {text!r}" if text else ""))
        self.position = position


class UnknownSymbolError(KeyError):
    pass


FUNCTIONS = {
    "minimum": "min", "min": "min",
    "maximum": "max", "max": "max",
    "floor": "floor", "ceil": "ceil", "sqrt": "sqrt",
    "log": "log", "tan": "tan", "arccosh": "arccosh",
}
INFIX = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError("unexpected character", pos, text)
        num, name, punct = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if punct == "**" else punct, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, table: Mapping[str, InvariantSymbol]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            raise ExpressionSyntaxError(f"expected {value!r}", pos, self.text)

    def parse(self) -> Expression:
        e, _ = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError("trailing input", pos, self.text)
        return e

    # each level returns (expression, is_integer_literal)
    def expr(self):
        left, lit = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = INFIX[self.take()[1]]
            right, _ = self.term()
            left, lit = Binary(OPERATORS[op], left, right), False
        return left, lit

    def term(self):
        left, lit = self.power()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = INFIX[self.take()[1]]
            right, rlit = self.power()
            if op == "div" and lit and rlit and right.head.value != 0:
                left = Leaf(ConstantLeaf(left.head.value / right.head.value))
            else:
                left = Binary(OPERATORS[op], left, right)
            lit = False
        return left, lit

    def power(self):
        base, lit = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            exp, _ = self.power()
            return Binary(OPERATORS["pow"], base, exp), False
        return base, lit

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(val)
            return Leaf(ConstantLeaf(value)), value.denominator == 1 and "." not in val
        if kind == "op" and val == "(":
            e, _ = self.expr()
            self.expect(")")
            return e, False
        if kind == "name":
            if val in FUNCTIONS and self.peek()[1] == "(":
                op = OPERATORS[FUNCTIONS[val]]
                self.take()
                first, _ = self.expr()
                if op.arity == 2:
                    self.expect(",")
                    second, _ = self.expr()
                    self.expect(")")
                    return Binary(op, first, second), False
                self.expect(")")
                return Unary(op, first), False
            if val not in self.table:
                raise UnknownSymbolError(f"unknown symbol {val!r} at position {pos}")
            # optional "(x)" argument suffix
            if self.peek()[1] == "(" and self.toks[self.i + 1][1] == "x" and self.toks[self.i + 2][1] == ")":
                self.i += 3
            return Leaf(self.table[val]), False
        raise ExpressionSyntaxError(f"unexpected token {val!r}" if val else "unexpected end", pos, self.text)


def parse_expression(text: str, table: Mapping[str, InvariantSymbol] | None = None) -> Expression:
    """Parse ``text``; ``table`` maps names to symbols (defaults to all known invariants)."""
    if table is None:
        from graphbrain.invariants import symbol_table

        table = symbol_table()
    return _Parser(text, table).parse()


_RELATION = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)(?:\(x\))?\s*(<=|>=)\s*(.+)$")


def parse_conjecture(text: str, table: Mapping[str, InvariantSymbol] | None = None):
    """Split ``"target(x) <= expr"`` into ``(target, "upper" | "lower", Expression)``."""
    m = _RELATION.match(text)
    if not m:
        raise ExpressionSyntaxError("expected 'target <= expr' or 'target >= expr'", 0, text)
    target, rel, rhs = m.groups()
    direction = "upper" if rel == "<=" else "lower"
    return target, direction, parse_expression(rhs, table)
