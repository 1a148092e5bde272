import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherecolor.coloring import (
    Coloring,
    ColoringError,
    is_nice_coloring,
    proper_colorings,
    search_nice_coloring,
    square_graph,
)
from spherecolor.generators import icosahedral_subdivision, torus_grid
from spherecolor.isbell import IsbellParams, isbell_color


def brute_nice(adj, k):
    """All nice colourings by trying every assignment against networkx's power graph."""
    g = nx.Graph()
    g.add_nodes_from(range(len(adj)))
    g.add_edges_from((v, w) for v, ns in enumerate(adj) for w in ns)
    sq = nx.power(g, 2)
    out = []
    for cols in itertools.product(range(1, k + 1), repeat=len(adj)):
        if all(cols[u] != cols[v] for u, v in sq.edges):
            out.append(cols)
    return out


small_graphs = st.integers(2, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12)))


def to_adj(n, pairs):
    adj = [set() for _ in range(n)]
    for a, b in pairs:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    return [sorted(x) for x in adj]


def test_square_graph_examples():
    assert square_graph([[1], [0, 2], [1]]) == [[1, 2], [0, 2], [0, 1]]
    cycle6 = [[(i - 1) % 6, (i + 1) % 6] for i in range(6)]
    assert all(len(n) == 4 for n in square_graph(cycle6))
    # interior lattice vertex: 6 neighbours plus 12 at distance two
    assert len(square_graph(torus_grid(7, 7))[0]) == 18


def test_is_nice_examples(ico):
    ok, witness = is_nice_coloring(ico, list(range(1, 13)), 12)
    assert ok and witness is None
    ok, witness = is_nice_coloring(ico, [1] * 12, 1)
    assert not ok and witness is not None
    u, v = witness
    assert ico.distance_matrix[u, v] <= 2


def test_is_nice_rejects_bad_input(ico):
    with pytest.raises(ColoringError):
        is_nice_coloring(ico, [1] * 11)
    with pytest.raises(ColoringError):
        is_nice_coloring(ico, [None] + [1] * 11)
    with pytest.raises(ColoringError):
        is_nice_coloring(ico, [9] * 12, 7)


def test_coloring_document():
    c = Coloring.from_dict({"k": 3, "colors": [1, None, 3]})
    assert c.to_dict() == {"k": 3, "colors": [1, None, 3]}
    with pytest.raises(ColoringError):
        Coloring.from_dict({"k": 3, "colors": [4]})
    with pytest.raises(ColoringError):
        Coloring.from_dict({"colors": [1]})


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.integers(1, 4))
def test_enumeration_matches_brute_force(graph, k):
    adj = to_adj(*graph)
    expected = brute_nice(adj, k)
    out = search_nice_coloring(adj, k, mode="enumerate", max_solutions_kept=len(expected) + 1)
    assert out.status == "enumerated"
    assert out.count == len(expected)
    assert sorted(out.solutions) == sorted(expected)


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.integers(1, 4))
def test_find_and_unsat_agree_with_brute_force(graph, k):
    adj = to_adj(*graph)
    exists = bool(brute_nice(adj, k))
    found = search_nice_coloring(adj, k, mode="find")
    proof = search_nice_coloring(adj, k, mode="prove_unsat")
    assert (found.status == "sat") == exists
    assert proof.status == ("sat" if exists else "unsat")
    if exists:
        assert is_nice_coloring(adj, found.coloring.colors, k)[0]


def test_fixed_assignment_is_respected():
    path = [[1], [0, 2], [1, 3], [2]]
    out = search_nice_coloring(path, 3, mode="enumerate", fixed={0: 2, 3: 2}, max_solutions_kept=10)
    assert out.status == "enumerated"
    assert all(s[0] == 2 and s[3] == 2 for s in out.solutions)
    assert out.count == len([s for s in brute_nice(path, 3) if s[0] == 2 and s[3] == 2])


def test_conflicting_fixed_assignment():
    out = search_nice_coloring([[1], [0]], 2, mode="enumerate", fixed={0: 1, 1: 1})
    assert out.status == "enumerated" and out.count == 0


def test_sphere_f2_has_no_nice_7_coloring():
    out = search_nice_coloring(icosahedral_subdivision(2), 7, mode="prove_unsat")
    assert out.status == "unsat"


def test_isbell_torus_is_sat():
    # periods (7, 0) and (0, 7) lie in the period lattice of every Isbell colouring
    m = torus_grid(7, 7)
    p = IsbellParams("A")
    sigma = [isbell_color(p, (v % 7, v // 7)) for v in range(49)]
    assert is_nice_coloring(m, sigma, 7)[0]
    out = search_nice_coloring(m, 7, mode="find")
    assert out.status == "sat"
    assert is_nice_coloring(m, out.coloring.colors, 7)[0]


def test_node_budget_gives_indeterminate():
    out = search_nice_coloring(icosahedral_subdivision(3), 7, mode="prove_unsat",
                               symmetry_breaking=False, max_nodes=5)
    assert out.status == "indeterminate"
    assert out.stats.nodes <= 5


def test_bad_arguments():
    with pytest.raises(ColoringError):
        search_nice_coloring([[1], [0]], 0)
    with pytest.raises(ColoringError):
        search_nice_coloring([[1], [0]], 2, mode="sometimes")


def test_proper_colorings_triangle():
    tri = [[1, 2], [0, 2], [0, 1]]
    assert len(list(proper_colorings(tri, 3))) == 6
    assert next(proper_colorings(tri, 2), None) is None
