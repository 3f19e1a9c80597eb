"""Exhaustive and randomised checking of bounds on the independence number."""

from __future__ import annotations

import random
from itertools import product
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from graphbrain.canon import graphs_up_to
from graphbrain.expr import Expression, evaluate
from graphbrain.graphs import RANDOM_MODELS, Graph, write_graph6
from graphbrain.invariants import INVARIANTS, independence_number
from graphbrain.parse import parse_expression

MAX_EXHAUSTIVE_ORDER = 8
THETA_EXHAUSTIVE_ORDER = 7
THETA_FUZZ_ORDER = 12
REL_TOL = 1e-9


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    direction: str  # "upper": alpha <= expr; "lower": alpha >= expr
    source: str
    min_order: int = 1
    connected_only: bool = True

    @property
    def expression(self) -> Expression:
        return parse_expression(self.text)

    @property
    def uses_theta(self) -> bool:
        return "lovasz_theta" in {s.name for s in self.expression.symbols()}

    def __str__(self) -> str:
        rel = "<=" if self.direction == "upper" else ">="
        return f"independence_number(x) {rel} {self.text}"


_FIG12 = [
    "minimum(girth(x), floor(lovasz_theta(x)))",
    "minimum(diameter(x), lovasz_theta(x))",
    "maximum(residue(x), 1/2*lovasz_theta(x))",
    "2*floor(arccosh(lovasz_theta(x)))",
    "floor(arccosh(lovasz_theta(x)))^2",
    "ceil(lovasz_theta(x)) - radius(x)",
    "ceil(lovasz_theta(x)) - girth(x)",
    "floor(2*tan(matching_number(x)) - 2)",
    "floor(log(tan(order(x))^2)/log(10))",
]


def builtin_corpus() -> list[CorpusEntry]:
    entries = [
        CorpusEntry("theorem1", "order - radius", "upper", "Theorem1"),
        CorpusEntry("theorem2", "max_degree - triangle_number", "lower", "Theorem2", connected_only=False),
        CorpusEntry("conjecture1", "minimum(girth, floor(lovasz_theta))", "lower", "Conjecture1"),
        CorpusEntry("conjecture2", "(average_distance)^(degree_sum)", "upper", "Conjecture2", min_order=2),
    ]
    entries += [
        CorpusEntry(f"fig12_{i}", text, "lower", f"Fig12({i})") for i, text in enumerate(_FIG12, 1)
    ]
    return entries


def corpus_entry(name: str) -> CorpusEntry:
    for e in builtin_corpus():
        if e.name == name:
            return e
    raise KeyError(f"unknown corpus entry {name!r}")


def entry_from_conjecture(text: str, name: str = "custom") -> CorpusEntry:
    from graphbrain.parse import parse_conjecture

    target, direction, _ = parse_conjecture(text)
    if target != "independence_number":
        raise ValueError("only independence_number conjectures can be checked")
    rhs = text.split("<=" if direction == "upper" else ">=", 1)[1].strip()
    return CorpusEntry(name, rhs, direction, "user")


# --------------------------------------------------------------------------

def _violated(direction: str, value: float, alpha: int) -> bool:
    if value != value:
        return True
    slack = REL_TOL * max(1.0, alpha)
    if direction == "upper":
        return value < alpha - slack
    return value > alpha + slack


def judge(entry: CorpusEntry, g: Graph, expr: Expression | None = None) -> str:
    """``"ok"``, ``"violation"`` or ``"ambiguous"`` for ``entry`` on ``g``.

    Undefined counts as a violation.  Approximate invariants (theta) are
    also tried at value +- tolerance; a violation must hold at every such
    point, otherwise the graph is ambiguous rather than a counterexample.
    """
    expr = expr or entry.expression
    env, approx = {}, []
    for s in expr.symbols():
        d = INVARIANTS[s.name]
        env[s.name] = float(d.fn(g))
        if d.tolerance:
            approx.append((s.name, d.tolerance))
    alpha = independence_number(g)
    verdicts = {_violated(entry.direction, evaluate(expr, env), alpha)}
    for shifts in product((-1, 1), repeat=len(approx)):
        shifted = dict(env)
        for (name, tol), sign in zip(approx, shifts):
            shifted[name] = env[name] + sign * tol
        verdicts.add(_violated(entry.direction, evaluate(expr, shifted), alpha))
    if verdicts == {True}:
        return "violation"
    return "ok" if verdicts == {False} else "ambiguous"


def violates(entry: CorpusEntry, g: Graph, expr: Expression | None = None) -> bool:
    """True when ``g`` is a definite counterexample to the entry."""
    return judge(entry, g, expr) == "violation"


def _applies(entry: CorpusEntry, g: Graph) -> bool:
    return g.n >= entry.min_order and (not entry.connected_only or g.is_connected())


@dataclass
class CheckResult:
    entry: str
    verified: bool
    count: int
    counterexample: Graph | None = None
    seed: int | None = None
    trial: int | None = None
    ambiguous: int = 0  # graphs within the theta tolerance of a violation

    @property
    def graph6(self) -> str | None:
        return write_graph6(self.counterexample) if self.counterexample is not None else None

    def __str__(self) -> str:
        if self.verified:
            extra = f" ({self.ambiguous} within theta tolerance)" if self.ambiguous else ""
            return f"{self.entry}: verified on {self.count} graphs{extra}"
        where = f" (seed {self.seed}, trial {self.trial})" if self.seed is not None else ""
        return f"{self.entry}: counterexample {self.graph6} after {self.count} graphs{where}"


def check_graphs(entry: CorpusEntry, graphs: Iterable[Graph]) -> CheckResult:
    """Check ``entry`` on a graph stream; the first violation wins."""
    expr = entry.expression
    count = ambiguous = 0
    for g in graphs:
        if not _applies(entry, g):
            continue
        count += 1
        verdict = judge(entry, g, expr)
        if verdict == "violation":
            return CheckResult(entry.name, False, count, g, ambiguous=ambiguous)
        ambiguous += verdict == "ambiguous"
    return CheckResult(entry.name, True, count, ambiguous=ambiguous)


def exhaustive_check(entry: CorpusEntry, max_order: int, connected_only: bool | None = None) -> CheckResult:
    """Check ``entry`` on every graph (or every connected graph) up to ``max_order``."""
    if max_order > MAX_EXHAUSTIVE_ORDER:
        raise ValueError(f"exhaustive checks support max_order <= {MAX_EXHAUSTIVE_ORDER}")
    if connected_only is None:
        connected_only = entry.connected_only
    stream = graphs_up_to(max_order, connected=connected_only, min_order=entry.min_order)
    return check_graphs(entry, stream)


@dataclass(frozen=True)
class ModelRange:
    """A random model with the range its order is drawn from."""

    name: str
    n_min: int = 2
    n_max: int = 40
    p_min: float = 0.05
    p_max: float = 0.95
    degree_max: int = 6

    def draw(self, rng: random.Random, n_cap: int | None = None) -> Graph:
        hi = self.n_max if n_cap is None else min(self.n_max, n_cap)
        lo = min(self.n_min, hi)
        seed = rng.getrandbits(64)
        if self.name == "erdos_renyi":
            return RANDOM_MODELS["erdos_renyi"](rng.randint(lo, hi), rng.uniform(self.p_min, self.p_max), seed)
        if self.name == "random_bipartite":
            n = max(rng.randint(lo, hi), 2)
            a = rng.randint(1, n - 1)
            return RANDOM_MODELS["random_bipartite"](a, n - a, rng.uniform(self.p_min, self.p_max), seed)
        if self.name == "random_regular":
            n = max(rng.randint(lo, hi), 3)
            d = rng.randint(1, min(self.degree_max, n - 1))
            if (n * d) % 2:
                d = d - 1 if d > 1 else d + 1
                if d >= n:
                    n += 1
            return RANDOM_MODELS["random_regular"](n, d, seed)
        raise KeyError(f"unknown random model {self.name!r}")


DEFAULT_MODELS = (ModelRange("erdos_renyi"), ModelRange("random_regular"), ModelRange("random_bipartite"))


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on a largest connected component (lowest vertex breaks ties)."""
    from graphbrain.graphs import _bits

    remaining = (1 << g.n) - 1
    best = 0
    while remaining:
        seen = frontier = remaining & -remaining
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        remaining &= ~seen
        if seen.bit_count() > best.bit_count():
            best = seen
    keep = list(_bits(best))
    if len(keep) == g.n:
        return g
    pos = {v: i for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v]) for u, v in g.edges() if u in pos and v in pos]
    return Graph.from_edges(len(keep), edges, g.name)


def fuzz_check(
    entry: CorpusEntry,
    models: Sequence[ModelRange] = DEFAULT_MODELS,
    trials: int = 200,
    seed: int = 0,
) -> CheckResult:
    """Check ``entry`` on random graphs; connected-only entries see the largest component.

    The order of entries using Lovász theta is capped at the theta solver's
    guaranteed range.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not models:
        raise ValueError("need at least one model")
    rng = random.Random(seed)
    expr = entry.expression
    cap = THETA_FUZZ_ORDER if entry.uses_theta else None
    count = ambiguous = 0
    for trial in range(trials):
        model = models[rng.randrange(len(models))]
        g = model.draw(rng, cap)
        if entry.connected_only:
            g = largest_component(g)
        if g.n < entry.min_order:
            continue
        count += 1
        verdict = judge(entry, g, expr)
        if verdict == "violation":
            return CheckResult(entry.name, False, count, g, seed=seed, trial=trial, ambiguous=ambiguous)
        ambiguous += verdict == "ambiguous"
    return CheckResult(entry.name, True, count, seed=seed, ambiguous=ambiguous)
