"""Canonical labelling and exhaustive generation of small graphs.

The canonical form is found by individualisation-refinement: colour
refinement to an equitable ordered partition, then backtracking over the
first non-singleton cell.  Each leaf (a discrete partition) gives a
relabelled adjacency certificate; the largest certificate wins.  Automorphisms
found along the way, as leaves that reproduce an earlier certificate, prune
children lying in one orbit of the stabiliser of the current prefix.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from graphbrain.graphs import Graph, _bits, write_graph6

MAX_CANON_ORDER = 16
MAX_GENERATOR_ORDER = 8


def _refine(adj: tuple, cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        out = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                a = adj[v]
                groups.setdefault(tuple((a & m).bit_count() for m in masks), []).append(v)
            if len(groups) == 1:
                out.append(cell)
            else:
                split = True
                out.extend(groups[k] for k in sorted(groups))
        cells = out
        if not split:
            return cells


def _certificate(adj: tuple, order: list[int]) -> tuple:
    pos = [0] * len(order)
    for k, v in enumerate(order):
        pos[v] = k
    cert = []
    for v in order:
        m = 0
        for u in _bits(adj[v]):
            m |= 1 << pos[u]
        cert.append(m)
    return tuple(cert)


class _Search:
    def __init__(self, adj: tuple):
        self.adj = adj
        self.first: tuple | None = None
        self.first_order: list[int] | None = None
        self.best: tuple | None = None
        self.best_order: list[int] | None = None
        self.autos: list[list[int]] = []

    def _record_auto(self, src: list[int], dst: list[int]):
        gamma = [0] * len(src)
        for a, b in zip(src, dst):
            gamma[a] = b
        if any(gamma[v] != v for v in range(len(gamma))):
            self.autos.append(gamma)

    def leaf(self, order: list[int]):
        cert = _certificate(self.adj, order)
        if self.first is None:
            self.first, self.first_order = cert, order
            self.best, self.best_order = cert, order
            return
        if cert == self.first:
            self._record_auto(self.first_order, order)
        elif cert == self.best:
            self._record_auto(self.best_order, order)
        elif cert > self.best:
            self.best, self.best_order = cert, order

    def _orbit_roots(self, prefix: list[int]) -> list[int]:
        n = len(self.adj)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gamma in self.autos:
            if all(gamma[p] == p for p in prefix):
                for v in range(n):
                    a, b = find(v), find(gamma[v])
                    if a != b:
                        parent[a] = b
        return [find(v) for v in range(n)]

    def run(self, cells: list[list[int]], prefix: list[int]):
        cells = _refine(self.adj, cells)
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            self.leaf([c[0] for c in cells])
            return
        target = cells[idx]
        done: list[int] = []
        for v in target:
            if done and self.autos:
                roots = self._orbit_roots(prefix)
                if any(roots[v] == roots[u] for u in done):
                    continue
            done.append(v)
            child = cells[:idx] + [[v], [u for u in target if u != v]] + cells[idx + 1:]
            self.run(child, prefix + [v])


def canonical_order(g: Graph) -> list[int]:
    """Vertex order giving the canonical relabelling of ``g``."""
    if g.n > MAX_CANON_ORDER:
        raise ValueError(f"canonical form supports n <= {MAX_CANON_ORDER}, got {g.n}")
    s = _Search(g.adj)
    s.run([list(range(g.n))], [])
    return s.best_order


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_order(g))


def canonical_form(g: Graph) -> bytes:
    """graph6 bytes of the canonical relabelling; equal iff isomorphic."""
    return write_graph6(canonical_graph(g)).encode()


# --------------------------------------------------------------------------
# generation

def _extend(graphs: list[Graph], connected: bool) -> list[Graph]:
    forms: dict[bytes, Graph] = {}
    for g in graphs:
        n = g.n
        for subset in range(1 if connected else 0, 1 << n):
            adj = list(g.adj)
            for u in _bits(subset):
                adj[u] |= 1 << n
            adj.append(subset)
            h = Graph._trusted(n + 1, tuple(adj))
            order = canonical_order(h)
            form = write_graph6(h.relabel(order)).encode()
            if form not in forms:
                forms[form] = h.relabel(order)
    return [forms[k] for k in sorted(forms)]


@lru_cache(maxsize=None)
def _generate(n: int, connected: bool) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, [0]),)
    return tuple(_extend(list(_generate(n - 1, connected)), connected))


def _check_order(n: int):
    if not 1 <= n <= MAX_GENERATOR_ORDER:
        raise ValueError(f"generator supports 1 <= n <= {MAX_GENERATOR_ORDER}, got {n}")


def enumerate_connected(n: int) -> Iterator[Graph]:
    """One canonical representative per isomorphism class of connected order-n graphs.

    Every connected graph has a vertex whose removal leaves it connected,
    so extending each class of order ``n-1`` by a vertex with a nonempty
    neighbourhood reaches every class of order ``n``.
    """
    _check_order(n)
    return iter(_generate(n, True))


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """One canonical representative per isomorphism class of order-n graphs."""
    _check_order(n)
    return iter(_generate(n, False))


def graphs_up_to(max_order: int, connected: bool = True, min_order: int = 1) -> Iterator[Graph]:
    gen = enumerate_connected if connected else enumerate_graphs
    for n in range(min_order, max_order + 1):
        yield from gen(n)
