"""Graph invariants used by the independence-number bounds and conjectures.

Integral invariants are exact.  Distance invariants of a disconnected graph
are Undefined (``nan``); girth of a forest is ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from graphbrain.expr import UNDEFINED, InvariantSymbol
from graphbrain.graphs import Graph, _bits
from graphbrain.spectrum import jacobi_eigenvalues
from graphbrain.theta import THETA_TOL, lovasz_theta as _theta

ZERO_EIGEN_TOL = 1e-8
EXACT_SOLVER_MAX_ORDER = 20


@dataclass(frozen=True)
class InvariantValue:
    value: float
    tolerance: float | None = None  # None means exact

    @property
    def exact(self) -> bool:
        return self.tolerance is None


# --------------------------------------------------------------------------
# counting

def order(g: Graph) -> int:
    return g.n


def size(g: Graph) -> int:
    return sum(nb.bit_count() for nb in g.adj) // 2


def degree_sum(g: Graph) -> int:
    return sum(nb.bit_count() for nb in g.adj)


def max_degree(g: Graph) -> int:
    return max(nb.bit_count() for nb in g.adj)


def min_degree(g: Graph) -> int:
    return min(nb.bit_count() for nb in g.adj)


def triangle_number(g: Graph) -> int:
    count = 0
    for v in range(g.n):
        higher = g.adj[v] >> (v + 1) << (v + 1)
        for u in _bits(higher):
            count += (g.adj[u] & higher >> (u + 1) << (u + 1)).bit_count()
    return count


# --------------------------------------------------------------------------
# distances

def _bfs_layers(g: Graph, src: int) -> list[int]:
    """Bitmask of the vertices at each distance from ``src``."""
    seen = frontier = 1 << src
    layers = [frontier]
    while True:
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        if not frontier:
            return layers
        seen |= frontier
        layers.append(frontier)


def _distance_rows(g: Graph):
    rows = [_bfs_layers(g, v) for v in range(g.n)]
    return rows, _reached(rows[0]) == (1 << g.n) - 1


def _reached(layers: list[int]) -> int:
    out = 0
    for layer in layers:
        out |= layer
    return out


def eccentricities(g: Graph) -> list[float]:
    rows, connected = _distance_rows(g)
    if not connected:
        return [UNDEFINED] * g.n
    return [len(r) - 1 for r in rows]


def radius(g: Graph) -> float:
    return min(eccentricities(g))


def diameter(g: Graph) -> float:
    return max(eccentricities(g))


def average_distance(g: Graph) -> float:
    if g.n < 2:
        return UNDEFINED
    rows, connected = _distance_rows(g)
    if not connected:
        return UNDEFINED
    total = sum(d * layer.bit_count() for r in rows for d, layer in enumerate(r))
    return total / (g.n * (g.n - 1))


def girth(g: Graph) -> float:
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for v in queue:
            for u in _bits(g.adj[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


# --------------------------------------------------------------------------
# matchings and independent sets

def matching_number(g: Graph) -> int:
    """Exact: memoised recursion on vertex subsets up to 20 vertices, blossom beyond."""
    if g.n > EXACT_SOLVER_MAX_ORDER:
        import networkx as nx

        h = nx.Graph(g.edges())
        return len(nx.max_weight_matching(h, maxcardinality=True))
    adj = g.adj

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        # lowest remaining vertex is either unmatched or matched to a neighbour
        while mask and not adj[(mask & -mask).bit_length() - 1] & mask:
            mask &= mask - 1
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = best(rest)
        for u in _bits(adj[v] & rest):
            out = max(out, 1 + best(rest & ~(1 << u)))
        return out

    return best((1 << g.n) - 1)


def _alpha(adj: tuple, mask: int) -> int:
    best = 0

    def go(mask: int, size: int):
        nonlocal best
        # vertices of degree <= 1 inside mask belong to some maximum set
        while True:
            if size + mask.bit_count() <= best:
                return
            if not mask:
                best = size
                return
            low = None
            top, top_deg = -1, -1
            for v in _bits(mask):
                d = (adj[v] & mask).bit_count()
                if d <= 1:
                    low = v
                    break
                if d > top_deg:
                    top, top_deg = v, d
            if low is None:
                break
            mask &= ~(1 << low | adj[low])
            size += 1
        go(mask & ~(1 << top | adj[top]), size + 1)
        go(mask & ~(1 << top), size)

    go(mask, 0)
    return best


def independence_number(g: Graph) -> int:
    """Exact branch and bound: branch on a max-degree vertex, bound by vertices left.

    Fast up to about 20 vertices; larger sparse or dense graphs are usually fine too.
    """
    return _alpha(g.adj, (1 << g.n) - 1)


def _bipartite_matching(n: int, adj: tuple) -> int:
    """Maximum matching between left copies and right copies (Kuhn's algorithm)."""
    match_right = [-1] * n

    def augment(v: int, seen: list[bool]) -> bool:
        for u in _bits(adj[v]):
            if not seen[u]:
                seen[u] = True
                if match_right[u] < 0 or augment(match_right[u], seen):
                    match_right[u] = v
                    return True
        return False

    return sum(augment(v, [False] * n) for v in range(n))


def fractional_independence_number(g: Graph) -> Fraction:
    """Optimum of the LP relaxation of independence, equal to alpha(double cover) / 2.

    The double cover is bipartite, so by König its independence number is
    ``2n`` minus its maximum matching.
    """
    nu = _bipartite_matching(g.n, g.adj)
    return Fraction(2 * g.n - nu, 2)


def critical_independence_number(g: Graph) -> int:
    """Size of a largest independent set ``I`` maximising ``|I| - |N(I)|``.

    Enumerates independent sets, so only meant for small graphs.
    """
    adj = g.adj
    best_diff, best_size = 0, 0  # the empty set

    def go(cand: int, members: int, nbhd: int, size: int):
        nonlocal best_diff, best_size
        diff = size - nbhd.bit_count()
        if diff > best_diff or (diff == best_diff and size > best_size):
            best_diff, best_size = diff, size
        # adding vertices raises the difference by at most the candidates left
        if diff + cand.bit_count() < best_diff:
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            go(cand & ~adj[v], members | 1 << v, nbhd | adj[v], size + 1)

    go((1 << g.n) - 1, 0, 0, 0)
    return best_size


def annihilation_number(g: Graph) -> int:
    degs = sorted(g.degrees())
    total = sum(degs)
    prefix, k = 0, 0
    for i, d in enumerate(degs, 1):
        prefix += d
        if prefix <= total - prefix:
            k = i
        else:
            break
    return k


def residue(g: Graph) -> int:
    return havel_hakimi_residue(g.degrees())


def havel_hakimi_residue(degrees) -> int:
    seq = sorted(degrees, reverse=True)
    if sum(seq) % 2:
        raise ValueError("degree sum must be even")
    while seq and seq[0] > 0:
        d = seq.pop(0)
        if d > len(seq):
            raise ValueError("sequence is not graphical")
        for i in range(d):
            seq[i] -= 1
            if seq[i] < 0:
                raise ValueError("sequence is not graphical")
        seq.sort(reverse=True)
    return len(seq)


def max_even_minus_even_horizontal(g: Graph) -> float:
    if not g.is_connected():
        return UNDEFINED
    best = -math.inf
    for v in range(g.n):
        even = 0
        for d, layer in enumerate(_bfs_layers(g, v)):
            if d % 2 == 0:
                even |= layer
        induced = sum((g.adj[u] & even).bit_count() for u in _bits(even)) // 2
        best = max(best, even.bit_count() - induced)
    return best


# --------------------------------------------------------------------------
# spectral

def adjacency_spectrum(g: Graph) -> np.ndarray:
    return jacobi_eigenvalues(g.adjacency_matrix())


def cvetkovic_bound(g: Graph) -> int:
    lam = adjacency_spectrum(g)
    nonneg = int(np.sum(lam >= -ZERO_EIGEN_TOL))
    nonpos = int(np.sum(lam <= ZERO_EIGEN_TOL))
    return min(nonneg, nonpos)


def hansen_zheng_bound(g: Graph) -> int:
    """floor(1/2 + sqrt(1/4 + n^2 - n - 2m)) in integer arithmetic."""
    n, m = g.n, size(g)
    disc = 1 + 4 * (n * n - n - 2 * m)
    return (1 + math.isqrt(disc)) // 2


@lru_cache(maxsize=1 << 15)
def lovasz_theta(g: Graph) -> float:
    # cached: several corpus entries and bounds evaluate theta on the same graphs
    return _theta(g).value


# --------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class InvariantDef:
    name: str
    fn: Callable[[Graph], float]
    tolerance: float | None = None

    def compute(self, g: Graph) -> InvariantValue:
        return InvariantValue(float(self.fn(g)), self.tolerance)


INVARIANTS: dict[str, InvariantDef] = {
    d.name: d
    for d in [
        InvariantDef("order", order),
        InvariantDef("size", size),
        InvariantDef("degree_sum", degree_sum),
        InvariantDef("max_degree", max_degree),
        InvariantDef("min_degree", min_degree),
        InvariantDef("radius", radius),
        InvariantDef("diameter", diameter),
        InvariantDef("average_distance", average_distance),
        InvariantDef("girth", girth),
        InvariantDef("triangle_number", triangle_number),
        InvariantDef("matching_number", matching_number),
        InvariantDef("independence_number", independence_number),
        InvariantDef("annihilation_number", annihilation_number),
        InvariantDef("fractional_independence_number", fractional_independence_number),
        InvariantDef("lovasz_theta", lovasz_theta, THETA_TOL),
        InvariantDef("cvetkovic_bound", cvetkovic_bound),
        InvariantDef("hansen_zheng_bound", hansen_zheng_bound),
        InvariantDef("residue", residue),
        InvariantDef("critical_independence_number", critical_independence_number),
        InvariantDef("max_even_minus_even_horizontal", max_even_minus_even_horizontal),
    ]
}

UPPER_BOUNDS = (
    "annihilation_number",
    "fractional_independence_number",
    "lovasz_theta",
    "cvetkovic_bound",
    "order - matching_number",
    "hansen_zheng_bound",
)
LOWER_BOUNDS = (
    "radius",
    "residue",
    "critical_independence_number",
    "max_even_minus_even_horizontal",
)


def invariant(name: str) -> InvariantDef:
    try:
        return INVARIANTS[name]
    except KeyError:
        raise KeyError(f"unknown invariant {name!r}") from None


def compute(name: str, g: Graph) -> InvariantValue:
    return invariant(name).compute(g)


@lru_cache(maxsize=1)
def _symbols() -> dict[str, InvariantSymbol]:
    return {name: InvariantSymbol(i, name) for i, name in enumerate(INVARIANTS)}


def symbol_table() -> dict[str, InvariantSymbol]:
    return dict(_symbols())


def symbol(name: str) -> InvariantSymbol:
    invariant(name)
    return _symbols()[name]
