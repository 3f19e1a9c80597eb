"""Simple undirected graphs stored as neighbourhood bitmasks."""

from __future__ import annotations

import random
import re
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is an int whose bit ``u`` is set when ``uv`` is an edge.
    """

    __slots__ = ("n", "adj", "name")

    def __init__(self, n: int, adj: Iterable[int], name: str | None = None):
        adj = tuple(adj)
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        full = (1 << n) - 1
        for v, nb in enumerate(adj):
            if nb & ~full or nb >> v & 1:
                raise ValueError(f"bad neighbourhood for vertex {v}")
            for u in _bits(nb):
                if not adj[u] >> v & 1:
                    raise ValueError(f"asymmetric edge {v}-{u}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str | None = None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, name)

    @classmethod
    def _trusted(cls, n: int, adj: tuple, name=None) -> "Graph":
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        object.__setattr__(g, "name", name)
        return g

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in _bits(self.adj[v]) if u < v]

    def degrees(self) -> list[int]:
        return [nb.bit_count() for nb in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def is_connected(self) -> bool:
        seen = frontier = 1
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1

    def relabel(self, order: list[int]) -> "Graph":
        """Graph whose vertex ``k`` is this graph's vertex ``order[k]``."""
        pos = [0] * self.n
        for k, v in enumerate(order):
            pos[v] = k
        adj = []
        for v in order:
            m = 0
            for u in _bits(self.adj[v]):
                m |= 1 << pos[u]
            adj.append(m)
        return Graph._trusted(self.n, tuple(adj), self.name)

    def with_name(self, name: str | None) -> "Graph":
        return Graph._trusted(self.n, self.adj, name)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={len(self.edges())} {write_graph6(self) if self.n <= 62 else ''}>"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --------------------------------------------------------------------------
# graph6

class Graph6Error(ValueError):
    pass


def write_graph6(g: Graph) -> str:
    if g.n > 62:
        raise Graph6Error("graph6 writer supports n <= 62 only")
    bits = [g.adj[j] >> i & 1 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return chr(63 + g.n) + body


def parse_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] < 63:
        n, rest = vals[0], vals[1:]
    elif len(vals) >= 4 and vals[1] < 63:
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        rest = vals[4:]
    elif len(vals) >= 8:
        n = 0
        for v in vals[2:8]:
            n = n << 6 | v
        rest = vals[8:]
    else:
        raise Graph6Error("truncated graph6 header")
    need = n * (n - 1) // 2
    if len(rest) != (need + 5) // 6:
        raise Graph6Error(f"bad length: n={n} needs {(need + 5) // 6} data bytes, got {len(rest)}")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if rest[k // 6] >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, adj)


def read_graph6_file(path) -> list[Graph]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(parse_graph6(line))
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}") from None
    return out


# --------------------------------------------------------------------------
# constructors

def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n, f"empty{n}")


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)], f"k{n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"p{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"c{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], f"k{a}_{b}")


def star_graph(m: int) -> Graph:
    return complete_bipartite(1, m).with_name(f"star{m}")


def kneser_graph(n: int, k: int) -> Graph:
    subsets = [frozenset(s) for s in combinations(range(n), k)]
    edges = [(i, j) for i, j in combinations(range(len(subsets)), 2) if not subsets[i] & subsets[j]]
    return Graph.from_edges(len(subsets), edges, f"kneser{n}_{k}")


def petersen_graph() -> Graph:
    return kneser_graph(5, 2).with_name("petersen")


def ciliate(c: int, q: int) -> Graph:
    """Even cycle of length ``c`` with a pendant path of ``q`` vertices at each cycle vertex.

    ``c == 2`` is the degenerate cycle: a single edge.
    """
    if c < 2 or c % 2:
        raise ValueError("cycle length must be even and >= 2")
    if q < 0:
        raise ValueError("path length must be >= 0")
    edges = [(0, 1)] if c == 2 else [(i, (i + 1) % c) for i in range(c)]
    nxt = c
    for v in range(c):
        prev = v
        for _ in range(q):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return Graph.from_edges(c * (q + 1), edges, f"ciliate{c}_{q}")


_NAMED = [
    (re.compile(r"petersen"), lambda: petersen_graph()),
    (re.compile(r"k(\d+)_(\d+)"), lambda a, b: complete_bipartite(int(a), int(b))),
    (re.compile(r"k(\d+)"), lambda n: complete_graph(int(n))),
    (re.compile(r"c(\d+)"), lambda n: cycle_graph(int(n))),
    (re.compile(r"p(\d+)"), lambda n: path_graph(int(n))),
    (re.compile(r"star(\d+)"), lambda m: star_graph(int(m))),
    (re.compile(r"empty(\d+)"), lambda n: empty_graph(int(n))),
    (re.compile(r"ciliate(\d+)_(\d+)"), lambda c, q: ciliate(int(c), int(q))),
]


def named_graph(name: str) -> Graph:
    """Look up ``petersen``, ``k5``, ``c5``, ``k2_3``, ``p4``, ``star3``, ``empty4``, ``ciliate4_2``."""
    key = name.strip().lower()
    for pattern, build in _NAMED:
        m = pattern.fullmatch(key)
        if m:
            return build(*m.groups())
    raise KeyError(f"unknown graph name {name!r}")


def catalog() -> list[Graph]:
    """Named example graphs, the four table graphs first."""
    graphs = [complete_graph(5), cycle_graph(5), complete_bipartite(2, 3), petersen_graph()]
    graphs += [path_graph(n) for n in range(2, 8)]
    graphs += [cycle_graph(n) for n in (3, 4, 6, 7, 8)]
    graphs += [star_graph(m) for m in range(2, 7)]
    graphs += [complete_graph(n) for n in (1, 2, 3, 4, 6, 7)]
    graphs += [complete_bipartite(a, b) for a, b in [(2, 2), (3, 3), (2, 4), (3, 4)]]
    graphs += [ciliate(2, 1), ciliate(6, 0), ciliate(4, 2)]
    return graphs


def table_graphs() -> list[Graph]:
    return catalog()[:4]


# --------------------------------------------------------------------------
# random models

def erdos_renyi(n: int, p: float, seed=None) -> Graph:
    if n < 1 or not 0 <= p <= 1:
        raise ValueError("need n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges, f"gnp{n}")


def random_bipartite(a: int, b: int, p: float, seed=None) -> Graph:
    if a < 1 or b < 0 or not 0 <= p <= 1:
        raise ValueError("need a >= 1, b >= 0 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < p]
    return Graph.from_edges(a + b, edges, f"bip{a}_{b}")


def random_regular(n: int, d: int, seed=None) -> Graph:
    """Random d-regular graph from the pairing model.

    Points are paired only with compatible partners and the pairing restarts
    on a dead end (networkx's implementation).  Dense degrees use the
    complement of a sparse regular graph, where restarts are rare.
    """
    import networkx as nx

    if n < 1 or d < 0 or d >= n or (n * d) % 2:
        raise ValueError(f"no simple {d}-regular graph on {n} vertices")
    rng = random.Random(seed)
    dense = d > (n - 1) // 2
    k = n - 1 - d if dense else d
    h = nx.random_regular_graph(k, n, seed=rng.getrandbits(32)) if k else nx.empty_graph(n)
    g = Graph.from_edges(n, h.edges())
    if dense:
        full = (1 << n) - 1
        g = Graph(n, [full & ~nb & ~(1 << v) for v, nb in enumerate(g.adj)])
    return g.with_name(f"reg{n}_{d}")


RANDOM_MODELS = {
    "erdos_renyi": erdos_renyi,
    "random_regular": random_regular,
    "random_bipartite": random_bipartite,
}
