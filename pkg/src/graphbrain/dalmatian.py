"""Conjecturing with the Dalmatian filter.

Candidates are pulled from the expression enumerator in (complexity, key)
order.  A candidate becomes a conjecture when it is a valid bound for the
target on every stored object and, on at least one object, strictly
improves on every stored conjecture and every theory bound.  After each
insertion, conjectures that are no longer the best bound anywhere are
pruned; the pruned ones are kept in the report.
"""

from __future__ import annotations

import dataclasses
import enum
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from graphbrain.expr import (
    DEFAULT_CONSTANTS,
    ConstantLeaf,
    Expression,
    ExpressionSpace,
    InvariantSymbol,
    OperatorSpec,
    evaluate_vector,
    operator,
    render,
)
from graphbrain.graphs import Graph
from graphbrain.invariants import INVARIANTS
from graphbrain.parse import parse_expression
from graphbrain.table import ValueTable, graph_key

REL_TOL = 1e-9


class Direction(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.UPPER else -1

    @property
    def relation(self) -> str:
        return "<=" if self is Direction.UPPER else ">="


class DuplicateObjectError(ValueError):
    pass


@dataclass
class TargetSpec:
    target: str
    direction: Direction
    objects: list[Graph]
    pool: list[str]
    constants: list[Fraction] = field(default_factory=list)
    operators: list[str] = field(default_factory=list)
    theory: list[str | Expression] = field(default_factory=list)
    max_complexity: int = 3
    max_candidates: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        self.direction = Direction(self.direction)
        if self.target in self.pool:
            raise ValueError("target must not be in the invariant pool")
        if self.max_complexity < 1:
            raise ValueError("max_complexity must be >= 1")
        self.constants = [Fraction(c) for c in self.constants]

    def symbols(self) -> list[InvariantSymbol]:
        return [InvariantSymbol(i, name) for i, name in enumerate(self.pool)]

    def operator_specs(self) -> list[OperatorSpec]:
        return [operator(name) for name in self.operators]

    def symbol_table(self) -> dict[str, InvariantSymbol]:
        names = list(INVARIANTS) + [n for n in self.pool if n not in INVARIANTS]
        return {n: InvariantSymbol(i, n) for i, n in enumerate(names)}

    def theory_expressions(self) -> list[Expression]:
        table = self.symbol_table()
        return [t if isinstance(t, Expression) else parse_expression(t, table) for t in self.theory]

    def needed_invariants(self) -> set[str]:
        names = set(self.pool) | {self.target}
        for t in self.theory_expressions():
            names |= {s.name for s in t.symbols()}
        return names

    @classmethod
    def default(cls, **kw) -> "TargetSpec":
        kw.setdefault("constants", list(DEFAULT_CONSTANTS))
        return cls(**kw)


@dataclass
class Conjecture:
    expression: Expression
    direction: Direction
    target: str
    status: str = "open"  # open | proved | disproved
    counterexample: Graph | None = None
    index: int = -1  # emission order within its run
    witness: int | None = None  # object index where it was strictly best when emitted

    def __str__(self) -> str:
        return f"{self.target}(x) {self.direction.relation} {render(self.expression, '(x)')}"

    @property
    def key(self) -> bytes:
        return self.expression.key


@dataclass
class RunReport:
    examined: int = 0
    emitted: list[Conjecture] = field(default_factory=list)
    pruned: list[Conjecture] = field(default_factory=list)
    wall_time: float = 0.0
    partial: bool = False
    reason: str = ""


@dataclass
class RunResult:
    conjectures: list[Conjecture]
    report: RunReport

    def lines(self) -> list[str]:
        return [str(c) for c in self.conjectures]


# --------------------------------------------------------------------------
# vector helpers

class _Context:
    """Per-run column cache over the spec's objects."""

    def __init__(self, spec: TargetSpec, table: ValueTable | None, compute: bool = True):
        self.spec = spec
        self.table = table if table is not None else ValueTable()
        self.keys = [self.table.add(g) for g in spec.objects]
        names = spec.needed_invariants()
        if compute:
            self.table.ensure(self.keys, names)
        self.columns = {n: self.table.column(self.keys, n) for n in names}
        self.tols = {n: self.table.tolerance_column(self.keys, n) for n in names}
        self.sign = spec.direction.sign
        self.target = self.columns[spec.target]

    def evaluate(self, e: Expression) -> tuple[np.ndarray, np.ndarray]:
        extra = {s.name for s in e.symbols()} - set(self.columns)
        if extra:
            self.table.ensure(self.keys, extra)
            for n in extra:
                self.columns[n] = self.table.column(self.keys, n)
                self.tols[n] = self.table.tolerance_column(self.keys, n)
        vec = evaluate_vector(e, self.columns) * np.ones(len(self.keys))
        tol = np.zeros(len(self.keys))
        for s in e.symbols():
            tol = np.maximum(tol, self.tols[s.name])
        return vec, tol


def _is_true(signed: np.ndarray, signed_target: np.ndarray) -> bool:
    if np.isnan(signed).any():
        return False
    slack = REL_TOL * np.maximum(1.0, np.abs(signed_target))
    return bool(np.all(signed >= signed_target - slack))


def _beats(signed, tol, best, best_tol) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        scale = np.maximum(1.0, np.maximum(np.abs(signed), np.abs(best)))
        scale = np.where(np.isfinite(scale), scale, 1.0)
        return signed < best - (REL_TOL * scale + tol + best_tol)


def _pointwise_best(vecs: Sequence[np.ndarray], tols: Sequence[np.ndarray], n: int):
    """Signed pointwise minimum with the tolerance of the expression attaining it."""
    if not vecs:
        return np.full(n, np.inf), np.zeros(n)
    stack = np.vstack(vecs)
    idx = _winners(stack)
    cols = np.arange(n)
    return stack[idx, cols], np.vstack(tols)[idx, cols]


def _winners(stack: np.ndarray) -> np.ndarray:
    """Row index of the earliest row within tolerance of each column's minimum."""
    best = stack.min(axis=0)
    with np.errstate(invalid="ignore"):
        scale = np.where(np.isfinite(best), np.maximum(1.0, np.abs(best)), 1.0)
        near = (stack <= best + REL_TOL * scale) | (stack == best)
    return near.argmax(axis=0)


# --------------------------------------------------------------------------
# public operations

def truth_check(e: Expression, spec: TargetSpec, table: ValueTable) -> bool:
    """Is ``e`` a valid bound for the target on every object (Undefined never is)?"""
    ctx = _Context(spec, table, compute=False)
    vec, _ = ctx.evaluate(e)
    return _is_true(ctx.sign * vec, ctx.sign * ctx.target)


def significance_check(
    e: Expression, kept: Sequence[Conjecture], spec: TargetSpec, table: ValueTable
) -> bool:
    ctx = _Context(spec, table, compute=False)
    others = [c.expression for c in kept] + spec.theory_expressions()
    if not others:
        return True
    vec, tol = ctx.evaluate(e)
    pairs = [ctx.evaluate(o) for o in others]
    best, best_tol = _pointwise_best(
        [ctx.sign * v for v, _ in pairs], [t for _, t in pairs], len(ctx.keys)
    )
    return bool(_beats(ctx.sign * vec, tol, best, best_tol).any())


def prune_dominated(kept: Sequence[Conjecture], spec: TargetSpec, table: ValueTable) -> list[Conjecture]:
    """Keep only conjectures that are the (earliest) best bound on some object."""
    if not kept:
        return []
    ctx = _Context(spec, table, compute=False)
    stack = np.vstack([ctx.sign * ctx.evaluate(c.expression)[0] for c in kept])
    alive = set(_winners(stack).tolist())
    return [c for i, c in enumerate(kept) if i in alive]


def run(spec: TargetSpec, table: ValueTable | None = None) -> RunResult:
    start = time.perf_counter()
    ctx = _Context(spec, table)
    n_obj = len(ctx.keys)
    sign = ctx.sign
    signed_target = sign * ctx.target
    report = RunReport()

    theory = [ctx.evaluate(t) for t in spec.theory_expressions()]
    theory_signed = [sign * v for v, _ in theory]
    theory_tols = [t for _, t in theory]

    kept: list[tuple[Conjecture, np.ndarray, np.ndarray]] = []
    best, best_tol = _pointwise_best(theory_signed, theory_tols, n_obj)

    space = ExpressionSpace(spec.symbols(), spec.constants, spec.operator_specs())
    cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
    leaf_values = {}
    for name in spec.pool:
        leaf_values[name] = (ctx.columns[name], ctx.tols[name])
    ones = np.ones(n_obj)
    zeros = np.zeros(n_obj)

    for e in space.enumerate(spec.max_complexity):
        if spec.max_candidates is not None and report.examined >= spec.max_candidates:
            report.partial, report.reason = True, "candidate budget exhausted"
            break
        if spec.time_limit is not None and report.examined % 256 == 0:
            if time.perf_counter() - start > spec.time_limit:
                report.partial, report.reason = True, "time budget exhausted"
                break
        report.examined += 1

        head = e.head
        if isinstance(head, InvariantSymbol):
            vec, tol = leaf_values[head.name]
        elif isinstance(head, ConstantLeaf):
            vec, tol = float(head.value) * ones, zeros
        else:
            parts = [cache[a.key] for a in e.args]
            vec = head.fn(*(p[0] for p in parts))
            tol = parts[0][1] if len(parts) == 1 else np.maximum(parts[0][1], parts[1][1])
        if e.complexity < spec.max_complexity:
            cache[e.key] = (vec, tol)

        signed = sign * vec
        if not _is_true(signed, signed_target):
            continue
        if kept or theory:
            wins = _beats(signed, tol, best, best_tol)
            if not wins.any():
                continue
            witness = int(wins.argmax())
        else:
            witness = 0 if n_obj else None

        conj = Conjecture(e, spec.direction, spec.target, index=len(report.emitted), witness=witness)
        report.emitted.append(conj)
        kept.append((conj, signed, tol))

        alive = set(_winners(np.vstack([k[1] for k in kept])).tolist()) if n_obj else set(range(len(kept)))
        report.pruned += [k[0] for i, k in enumerate(kept) if i not in alive]
        kept = [k for i, k in enumerate(kept) if i in alive]
        best, best_tol = _pointwise_best(
            theory_signed + [k[1] for k in kept], theory_tols + [k[2] for k in kept], n_obj
        )

    report.wall_time = time.perf_counter() - start
    return RunResult([k[0] for k in kept], report)


def add_counterexample(
    spec: TargetSpec, g: Graph, kept: Sequence[Conjecture] = (), table: ValueTable | None = None
) -> TargetSpec:
    """Return a copy of ``spec`` with ``g`` appended to its objects."""
    key = graph_key(g)
    if any(graph_key(h) == key for h in spec.objects):
        raise DuplicateObjectError(f"an isomorphic copy of {key} is already stored")
    new = dataclasses.replace(spec, objects=list(spec.objects) + [g])
    if kept:
        refreshed = refresh(kept, new, table)
        if not any(c.status == "disproved" and c.counterexample is g for c in refreshed):
            warnings.warn(f"{key} does not falsify any kept conjecture", stacklevel=2)
    return new


def refresh(kept: Sequence[Conjecture], spec: TargetSpec, table: ValueTable | None = None) -> list[Conjecture]:
    """Re-check open conjectures on the spec's objects; mark falsified ones disproved."""
    ctx = _Context(spec, table)
    out = []
    for c in kept:
        if c.status == "open":
            vec, _ = ctx.evaluate(c.expression)
            signed = ctx.sign * vec
            slack = REL_TOL * np.maximum(1.0, np.abs(ctx.target))
            bad = np.isnan(signed) | (signed < ctx.sign * ctx.target - slack)
            if bad.any():
                g = spec.objects[int(bad.argmax())]
                c = dataclasses.replace(c, status="disproved", counterexample=g)
        out.append(c)
    return out
