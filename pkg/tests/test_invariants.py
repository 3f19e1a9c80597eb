import math
import random
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphbrain import graphs as gk
from graphbrain import invariants as inv
from graphbrain.graphs import Graph
from graphbrain.spectrum import jacobi_eigenvalues
from graphbrain.theta import THETA_TOL, lovasz_theta

K5, C5, K23, PET = "k5", "c5", "k2_3", "petersen"


# -- oracles ---------------------------------------------------------------

def alpha_oracle(g):
    best = 0
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if len(vs) > best and all(not g.has_edge(u, v) for u, v in combinations(vs, 2)):
            best = len(vs)
    return best


def matching_oracle(g):
    edges = g.edges()
    for k in range(len(edges), 0, -1):
        for sub in combinations(edges, k):
            ends = [x for e in sub for x in e]
            if len(set(ends)) == len(ends):
                return k
    return 0


_HALF_GRIDS = {}


def fractional_oracle(g):
    """max sum x over {0, 1/2, 1}^n with x_u + x_v <= 1 on edges (half-integral LP)."""
    grid = _HALF_GRIDS.get(g.n)
    if grid is None:
        grid = _HALF_GRIDS[g.n] = np.array(list(product((0, 1, 2), repeat=g.n)), dtype=np.int8)
    ok = np.ones(len(grid), dtype=bool)
    for u, v in g.edges():
        ok &= grid[:, u] + grid[:, v] <= 2
    return grid[ok].sum(axis=1).max() / 2


def theta_sdp(g):
    cp = pytest.importorskip("cvxpy")
    X = cp.Variable((g.n, g.n), symmetric=True)
    cons = [X >> 0, cp.trace(X) == 1] + [X[u, v] == 0 for u, v in g.edges()]
    prob = cp.Problem(cp.Maximize(cp.sum(X)), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


def is_bipartite(g):
    colour = {}
    for s in range(g.n):
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    stack.append(u)
                elif colour[u] == colour[v]:
                    return False
    return True


def val(name, g):
    return inv.compute(name, g).value


# -- table values ----------------------------------------------------------

UPPER_TABLE = {
    # definition-derived K5 values for annihilation, fractional and theta
    "annihilation_number": {K5: 2, C5: 2, K23: 3, PET: 5},
    "fractional_independence_number": {K5: 2.5, C5: 2.5, K23: 3, PET: 5},
    "cvetkovic_bound": {K5: 1, C5: 2, K23: 4, PET: 4},
    "order - matching_number": {K5: 3, C5: 3, K23: 3, PET: 5},
    "hansen_zheng_bound": {K5: 1, C5: 3, K23: 3, PET: 8},
}
LOWER_TABLE = {
    "radius": {K5: 1, C5: 2, K23: 2, PET: 2},
    "residue": {K5: 1, C5: 2, K23: 2, PET: 3},
    "critical_independence_number": {K5: 0, C5: 0, K23: 3, PET: 0},
    "max_even_minus_even_horizontal": {K5: 1, C5: 2, K23: 3, PET: 1},
}


@pytest.mark.parametrize("name", sorted(UPPER_TABLE) + sorted(LOWER_TABLE))
def test_table_values(name, table_graphs):
    from graphbrain.expr import evaluate
    from graphbrain.parse import parse_expression

    expected = {**UPPER_TABLE, **LOWER_TABLE}[name]
    e = parse_expression(name)
    for gname, want in expected.items():
        g = table_graphs[gname]
        env = {s.name: val(s.name, g) for s in e.symbols()}
        assert evaluate(e, env) == want, (name, gname)


def test_theta_table(table_graphs):
    want = {K5: 1, C5: 2.236, K23: 3, PET: 4}
    for gname, w in want.items():
        assert abs(val("lovasz_theta", table_graphs[gname]) - w) <= 1e-3
    assert inv.compute("lovasz_theta", table_graphs[C5]).tolerance == THETA_TOL


def test_alpha_table(table_graphs):
    assert {k: val("independence_number", g) for k, g in table_graphs.items()} == {K5: 1, C5: 2, K23: 3, PET: 4}


def test_basic_counts(table_graphs):
    k5, c5, k23 = table_graphs[K5], table_graphs[C5], table_graphs[K23]
    assert (inv.order(k5), inv.size(k5)) == (5, 10)
    assert inv.degree_sum(c5) == 10
    assert inv.max_degree(k23) == 3
    assert inv.triangle_number(k5) == 10 and inv.triangle_number(c5) == 0
    assert inv.triangle_number(gk.star_graph(5)) == 0


def test_distances(table_graphs):
    assert inv.average_distance(table_graphs[C5]) == 1.5
    assert inv.girth(gk.path_graph(6)) == math.inf
    assert inv.girth(table_graphs[PET]) == 5
    disc = Graph.from_edges(4, [(0, 1), (2, 3)])
    for f in (inv.radius, inv.diameter, inv.average_distance, inv.max_even_minus_even_horizontal):
        assert math.isnan(f(disc))
    assert math.isnan(inv.average_distance(gk.complete_graph(1)))


def test_matching_examples(table_graphs):
    assert [inv.matching_number(table_graphs[k]) for k in (K5, C5, K23, PET)] == [2, 2, 2, 5]
    assert inv.matching_number(gk.path_graph(4)) == 2
    assert inv.matching_number(gk.complete_graph(2)) == 1


def test_matching_large_fallback():
    import networkx as nx

    g = gk.erdos_renyi(30, 0.15, 3)
    h = nx.Graph(g.edges())
    assert inv.matching_number(g) == len(nx.max_weight_matching(h, maxcardinality=True))
    assert inv.matching_number(gk.path_graph(25)) == 12


def test_independence_examples():
    assert inv.independence_number(gk.empty_graph(9)) == 9
    assert inv.independence_number(gk.cycle_graph(11)) == 5


def test_oracles_connected_upto7(connected_upto7):
    for g in connected_upto7:
        assert inv.independence_number(g) == alpha_oracle(g)


def test_matching_oracle_small(all_upto6):
    for g in all_upto6:
        assert inv.matching_number(g) == matching_oracle(g)


def test_fractional_oracle(connected_upto7, all_upto6):
    for g in connected_upto7 + all_upto6:
        assert float(inv.fractional_independence_number(g)) == fractional_oracle(g)


def test_triangles_brute_force(all_upto6):
    for g in all_upto6:
        brute = sum(1 for a, b, c in combinations(range(g.n), 3) if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c))
        assert inv.triangle_number(g) == brute


def test_critical_independence_on_bipartite(connected_upto7):
    for g in connected_upto7:
        if is_bipartite(g):
            assert inv.critical_independence_number(g) == inv.independence_number(g)
            assert inv.fractional_independence_number(g) == inv.independence_number(g)


def test_star_even_horizontal():
    for m in range(1, 8):
        assert inv.max_even_minus_even_horizontal(gk.star_graph(m)) == m


def test_empty_graph_bounds():
    e = gk.empty_graph(6)
    assert inv.cvetkovic_bound(e) == 6
    assert inv.residue(e) == 6
    assert inv.girth(e) == math.inf


def test_havel_hakimi():
    assert inv.havel_hakimi_residue([3, 3, 3, 3]) == 1
    assert inv.havel_hakimi_residue([2, 2, 2, 2, 2]) == 2
    with pytest.raises(ValueError):
        inv.havel_hakimi_residue([3, 1])
    with pytest.raises(ValueError):
        inv.havel_hakimi_residue([4, 1, 1])


def test_annihilation_definition(all_upto6):
    for g in all_upto6:
        d = sorted(g.degrees())
        brute = max(k for k in range(g.n + 1) if sum(d[:k]) <= sum(d[k:]))
        assert inv.annihilation_number(g) == brute


# -- spectra ---------------------------------------------------------------

def test_jacobi_matches_numpy(connected_upto7):
    for g in connected_upto7[::3]:
        a = g.adjacency_matrix()
        lam = jacobi_eigenvalues(a)
        assert np.allclose(lam, np.linalg.eigvalsh(a), atol=1e-8)
        assert abs(lam.sum()) < 1e-6
        assert abs((lam ** 2).sum() - 2 * inv.size(g)) < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**31))
def test_jacobi_random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n))
    m = m + m.T
    assert np.allclose(jacobi_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-8)


# -- Lovász theta ----------------------------------------------------------

@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_theta_odd_cycles(n):
    c = math.cos(math.pi / n)
    assert abs(lovasz_theta(gk.cycle_graph(n)).value - n * c / (1 + c)) <= 1e-3


def test_theta_bipartite_equals_alpha(connected_upto7):
    for g in connected_upto7:
        if is_bipartite(g) and g.n >= 2:
            assert abs(inv.lovasz_theta(g) - inv.independence_number(g)) <= 1e-3


def test_theta_vs_sdp_oracle(connected_upto7):
    rng = random.Random(1)
    sample = rng.sample(connected_upto7, 40) + [gk.petersen_graph(), gk.ciliate(4, 1)]
    for g in sample:
        if not g.edges():
            continue
        res = lovasz_theta(g)
        assert res.converged
        assert abs(res.value - theta_sdp(g)) <= 1e-3, g.edges()


def test_theta_edgeless():
    assert lovasz_theta(gk.empty_graph(4)).value == 4


# -- published bounds ------------------------------------------------------

def test_bound_sanity_without_theta(connected_upto7):
    from graphbrain.expr import evaluate
    from graphbrain.parse import parse_expression

    uppers = [parse_expression(t) for t in inv.UPPER_BOUNDS if "theta" not in t]
    lowers = [parse_expression(t) for t in inv.LOWER_BOUNDS]
    for g in connected_upto7:
        a = inv.independence_number(g)
        for e in uppers:
            env = {s.name: val(s.name, g) for s in e.symbols()}
            assert evaluate(e, env) >= a
        for e in lowers:
            env = {s.name: val(s.name, g) for s in e.symbols()}
            assert evaluate(e, env) <= a


def test_theorems(connected_upto7):
    for g in connected_upto7:
        assert inv.independence_number(g) <= g.n - inv.radius(g)
    from graphbrain.canon import enumerate_graphs

    for n in range(1, 8):
        for g in enumerate_graphs(n):
            assert inv.independence_number(g) >= inv.max_degree(g) - inv.triangle_number(g)


def test_registry():
    assert len(inv.INVARIANTS) == 20
    assert [n for n, d in inv.INVARIANTS.items() if not inv.compute(n, gk.cycle_graph(5)).exact] == ["lovasz_theta"]
    with pytest.raises(KeyError):
        inv.invariant("chromatic_number")
