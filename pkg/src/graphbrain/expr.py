"""Expression trees over invariant symbols, constants and real operators.

Values live in the extended reals: finite floats, ``+inf``, ``-inf`` and
*Undefined*, which is represented by ``nan``.  Every operator maps Undefined
to Undefined, and guard violations and indeterminate forms produce it, so
evaluation never raises on a domain problem.

Expressions are immutable named tuples carrying their canonical key and
complexity.  Keys are prefix serialisations built from self-delimiting
tokens, so the key set is prefix-free and lexicographic order on keys agrees
with the order of (head, first child, second child).  The enumerator relies
on that to emit every stratum already sorted.
"""

from __future__ import annotations

import bisect
import gc
import math
from contextlib import contextmanager
from functools import partial
from itertools import repeat
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

import numpy as np

UNDEFINED = math.nan
POS_INF = math.inf
NEG_INF = -math.inf

TAN_POLE_GUARD = 1e-9


def is_undefined(x: float) -> bool:
    return x != x


class MissingSymbolError(KeyError):
    """An expression referenced a symbol the environment does not define."""


@dataclass(frozen=True)
class InvariantSymbol:
    id: int
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("invariant name must be nonempty")

    @property
    def token(self) -> bytes:
        return b"i" + self.name.encode() + b";"


@dataclass(frozen=True)
class ConstantLeaf:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def token(self) -> bytes:
        return b"c" + str(self.value).encode() + b";"

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class OperatorSpec:
    """A unary or binary real operator.

    ``fn`` works elementwise on numpy arrays (0-d arrays included) and must
    return ``nan`` wherever the operation is undefined.
    """

    name: str
    arity: int
    fn: Callable = field(compare=False, repr=False)
    commutative: bool = False
    symbol: str | None = None  # infix spelling, binary only
    spelling: str | None = None  # function-style spelling used when rendering

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise ValueError("arity must be 1 or 2")
        if self.commutative and self.arity != 2:
            raise ValueError("only binary operators can be commutative")

    @property
    def token(self) -> bytes:
        return b"o" + self.name.encode() + b";"


Head = Union[InvariantSymbol, ConstantLeaf, OperatorSpec]


class Expression(NamedTuple):
    head: Head
    args: tuple
    key: bytes
    complexity: int

    @property
    def is_leaf(self) -> bool:
        return not self.args

    def symbols(self) -> set[InvariantSymbol]:
        if isinstance(self.head, InvariantSymbol):
            return {self.head}
        out: set[InvariantSymbol] = set()
        for a in self.args:
            out |= a.symbols()
        return out

    def __str__(self) -> str:
        return render(self)


_new = tuple.__new__


def Leaf(item: InvariantSymbol | ConstantLeaf | int | Fraction) -> Expression:
    if not isinstance(item, (InvariantSymbol, ConstantLeaf)):
        item = ConstantLeaf(Fraction(item))
    return _new(Expression, (item, (), item.token, 1))


def Unary(op: OperatorSpec, child: Expression) -> Expression:
    if op.arity != 1:
        raise ValueError(f"{op.name} is not unary")
    return _new(Expression, (op, (child,), op.token + child.key, child.complexity + 1))


def Binary(op: OperatorSpec, left: Expression, right: Expression) -> Expression:
    if op.arity != 2:
        raise ValueError(f"{op.name} is not binary")
    kl, kr = left.key, right.key
    if op.commutative and kr < kl:
        kl, kr = kr, kl
    return _new(
        Expression,
        (op, (left, right), op.token + kl + kr, left.complexity + right.complexity + 1),
    )


def complexity(e: Expression) -> int:
    return e.complexity


def canonical_key(e: Expression) -> bytes:
    return e.key


def canonicalize(e: Expression) -> Expression:
    """Return ``e`` with the operands of commutative nodes ordered by key."""
    if e.is_leaf:
        return e
    args = tuple(canonicalize(a) for a in e.args)
    if len(args) == 1:
        return Unary(e.head, args[0])
    left, right = args
    if e.head.commutative and right.key < left.key:
        left, right = right, left
    return Binary(e.head, left, right)


# --------------------------------------------------------------------------
# operator semantics

def _ignore(fn):
    def wrapped(*args):
        with np.errstate(all="ignore"):
            return fn(*args)

    wrapped.__name__ = fn.__name__
    return wrapped


@_ignore
def _div(x, y):
    return np.where(y == 0, np.nan, np.true_divide(x, np.where(y == 0, 1.0, y)))


@_ignore
def _pow(x, y):
    # negative bases only with integral exponents
    ax = np.abs(x)
    mag = np.power(np.where(ax > 0, ax, 1.0), y)
    integral = np.isfinite(y) & (np.floor(y) == y)
    odd = integral & (np.fmod(np.where(integral, y, 0.0), 2) != 0)
    neg = np.where(integral, np.where(odd, -mag, mag), np.nan)
    zero = np.where(y > 0, 0.0, np.nan)
    return np.where(x > 0, mag, np.where(x == 0, zero, np.where(x < 0, neg, np.nan)))


@_ignore
def _log(x):
    return np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), np.nan)


@_ignore
def _tan(x):
    return np.where(np.abs(np.cos(x)) < TAN_POLE_GUARD, np.nan, np.tan(x))


@_ignore
def _arccosh(x):
    return np.where(x >= 1, np.arccosh(np.where(x >= 1, x, 1.0)), np.nan)


def _plain(ufunc):
    return _ignore(lambda *a: ufunc(*a))


OPERATORS: dict[str, OperatorSpec] = {
    op.name: op
    for op in [
        OperatorSpec("add", 2, _plain(np.add), commutative=True, symbol="+"),
        OperatorSpec("sub", 2, _plain(np.subtract), symbol="-"),
        OperatorSpec("mul", 2, _plain(np.multiply), commutative=True, symbol="*"),
        OperatorSpec("div", 2, _div, symbol="/"),
        OperatorSpec("pow", 2, _pow, symbol="^"),
        OperatorSpec("min", 2, _plain(np.minimum), commutative=True, spelling="minimum"),
        OperatorSpec("max", 2, _plain(np.maximum), commutative=True, spelling="maximum"),
        OperatorSpec("sqrt", 1, _plain(np.sqrt)),
        OperatorSpec("floor", 1, _plain(np.floor)),
        OperatorSpec("ceil", 1, _plain(np.ceil)),
        OperatorSpec("log", 1, _log),
        OperatorSpec("tan", 1, _tan),
        OperatorSpec("arccosh", 1, _arccosh),
    ]
}

DEFAULT_CONSTANTS = (Fraction(1), Fraction(2), Fraction(10), Fraction(1, 2))


def operator(name: str) -> OperatorSpec:
    try:
        return OPERATORS[name]
    except KeyError:
        raise KeyError(f"unknown operator {name!r}; known: {', '.join(OPERATORS)}") from None


# --------------------------------------------------------------------------
# evaluation

def _lookup(env: Mapping, sym: InvariantSymbol):
    if sym in env:
        return env[sym]
    if sym.name in env:
        return env[sym.name]
    raise MissingSymbolError(sym.name)


def evaluate(e: Expression, env: Mapping) -> float:
    """Evaluate ``e`` bottom-up; ``env`` maps symbols (or their names) to values."""
    return float(_eval(e, env, lambda v: np.float64(v)))


def evaluate_vector(e: Expression, columns: Mapping) -> np.ndarray:
    """Evaluate ``e`` over many objects at once.

    ``columns`` maps each symbol (or name) to a float array of per-object
    values; constants broadcast.
    """
    return np.asarray(_eval(e, columns, lambda v: np.asarray(v, dtype=float)), dtype=float)


def _eval(e: Expression, env: Mapping, wrap):
    head = e.head
    if isinstance(head, InvariantSymbol):
        return wrap(_lookup(env, head))
    if isinstance(head, ConstantLeaf):
        return np.float64(float(head.value))
    vals = [_eval(a, env, wrap) for a in e.args]
    return head.fn(*vals)


# --------------------------------------------------------------------------
# rendering

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 3}


def _prec(e: Expression) -> int:
    head = e.head
    if isinstance(head, ConstantLeaf):
        return 2 if head.value.denominator != 1 else 9
    if isinstance(head, OperatorSpec) and head.symbol:
        return _PREC[head.name]
    return 9


def _is_int_const(e: Expression) -> bool:
    return isinstance(e.head, ConstantLeaf) and e.head.value.denominator == 1


def render(e: Expression, arg_suffix: str = "") -> str:
    """Render in the function-style grammar accepted by :func:`parse_expression`.

    ``arg_suffix="(x)"`` reproduces the ``order(x)`` spelling of conjecture
    output.
    """
    head = e.head
    if isinstance(head, InvariantSymbol):
        return head.name + arg_suffix
    if isinstance(head, ConstantLeaf):
        return str(head.value)
    if head.arity == 1:
        return f"{head.spelling or head.name}({render(e.args[0], arg_suffix)})"
    left, right = e.args
    if not head.symbol:
        return (
            f"{head.spelling or head.name}"
            f"({render(left, arg_suffix)}, {render(right, arg_suffix)})"
        )
    p = _PREC[head.name]
    ls, rs = render(left, arg_suffix), render(right, arg_suffix)
    if head.name == "pow":
        # right associative
        if _prec(left) <= p:
            ls = f"({ls})"
        if _prec(right) < p:
            rs = f"({rs})"
    else:
        # "(1)/2" keeps a division node apart from the constant 1/2
        int_div = head.name == "div" and _is_int_const(left) and _is_int_const(right)
        if _prec(left) < p or int_div:
            ls = f"({ls})"
        if _prec(right) <= p:
            rs = f"({rs})"
    return f"{ls} {head.symbol} {rs}"


# --------------------------------------------------------------------------
# enumeration

@contextmanager
def _gc_paused():
    # expressions are acyclic tuples; cyclic GC passes over millions of fresh
    # tuples would dominate enumeration time
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


class ExpressionSpace:
    """All canonical expressions over a fixed ingredient pool, by stratum.

    Strata are built lazily and kept, since stratum ``c`` is assembled from
    strata ``< c``.  Within a stratum expressions are sorted by key.
    """

    def __init__(
        self,
        invariants: Sequence[InvariantSymbol],
        constants: Iterable = (),
        operators: Sequence[OperatorSpec] = (),
    ):
        leaves = [Leaf(s) for s in invariants] + [Leaf(ConstantLeaf(c)) for c in constants]
        uniq = {e.key: e for e in leaves}
        if len(uniq) != len(leaves):
            raise ValueError("duplicate leaf in pool")
        self._leaves = [uniq[k] for k in sorted(uniq)]
        ops = {op.token: op for op in operators}
        self._ops = [ops[t] for t in sorted(ops)]
        self._strata: list[list[Expression]] = [[]]
        self._keys: list[list[bytes]] = [[]]
        self._merged: dict[int, list[Expression]] = {}

    def stratum(self, c: int) -> list[Expression]:
        if c < 1:
            raise ValueError("complexity must be >= 1")
        while len(self._strata) <= c:
            with _gc_paused():
                nxt = self._build(len(self._strata))
            self._strata.append(nxt)
            self._keys.append([e.key for e in nxt])
        return self._strata[c]

    def _lower(self, top: int) -> list[Expression]:
        # every expression of complexity 1..top, sorted by key
        if top not in self._merged:
            merged = [e for c in range(1, top + 1) for e in self._strata[c]]
            merged.sort(key=lambda e: e.key)
            self._merged[top] = merged
        return self._merged[top]

    def _build(self, c: int) -> list[Expression]:
        if c == 1:
            return list(self._leaves)
        # built with map/zip so the per-expression work stays in C
        out: list[Expression] = []
        extend = out.extend
        strata, keys = self._strata, self._keys
        make = partial(_new, Expression)
        for op in self._ops:
            t = op.token
            if op.arity == 1:
                children = strata[c - 1]
                args = zip(children)
                extend(map(make, zip(repeat(op), args, map(t.__add__, keys[c - 1]), repeat(c))))
                continue
            if c < 3:
                continue
            comm = op.commutative
            for a in self._lower(c - 2):
                j = c - 1 - a.complexity
                rights, rkeys = strata[j], keys[j]
                ka = a.key
                if comm:
                    start = bisect.bisect_left(rkeys, ka)
                    if start:
                        rights, rkeys = rights[start:], rkeys[start:]
                args = zip(repeat(a), rights)
                extend(map(make, zip(repeat(op), args, map((t + ka).__add__, rkeys), repeat(c))))
        return out

    def enumerate(self, max_complexity: int) -> Iterator[Expression]:
        if max_complexity < 1:
            raise ValueError("max_complexity must be >= 1")
        for c in range(1, max_complexity + 1):
            yield from self.stratum(c)


def enumerate_expressions(
    invariants: Sequence[InvariantSymbol],
    constants: Iterable = (),
    operators: Sequence[OperatorSpec] = (),
    max_complexity: int = 3,
) -> Iterator[Expression]:
    """Stream every canonical expression of complexity <= ``max_complexity``.

    Order is (complexity, canonical key).  Only commutativity is used to
    identify expressions; ``b1 + b1`` and ``sqrt(sqrt(b1))`` are kept.
    """
    return ExpressionSpace(invariants, constants, operators).enumerate(max_complexity)


def symbols(names: Iterable[str]) -> list[InvariantSymbol]:
    return [InvariantSymbol(i, n) for i, n in enumerate(names)]
