import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import mixed_graphs

from mixed_moore.bounds import moore_bound
from mixed_moore.constructions import complete, cycle, hoffman_singleton, pentagonal_prism, petersen
from mixed_moore.exceptions import DigonViolationError, MooreInputError, MooreSizeLimitError, MooreValidationError
from mixed_moore.graphs import (
    converse,
    degree_report,
    distances,
    find_isomorphism,
    is_isomorphic,
    non_backtracking_walks,
    underlying_graph,
    underlying_matrix,
)
from mixed_moore.models import IntMatrix, MixedGraph, Permutation


def directed_cycle(n):
    return MixedGraph(n=n, arcs=[(i, (i + 1) % n) for i in range(n)])


# --- Permutations and matrices ---
def test_permutation_parse_and_print():
    """Test cycle notation in both directions and the cycle structure."""
    sigma = Permutation.parse("(01)(23)(4675)(89)", 10)
    assert sigma(4) == 6 and sigma(5) == 4
    assert str(sigma) == "(01)(23)(4675)(89)"
    assert sigma.cycle_structure[1] == 3
    assert sigma.cycle_structure[3] == 1
    assert not sigma.is_involution()
    assert str(Permutation.identity(4)) == "()"


def test_permutation_spaced_notation_for_large_n():
    """Test that labels above 9 use spaced cycle notation."""
    sigma = Permutation.parse("(0 11)(3 10)", 12)
    assert sigma(11) == 0
    assert str(sigma) == "(0 11)(3 10)"


def test_permutation_rejects_non_bijection():
    """Test that repeated images are rejected."""
    with pytest.raises(MooreValidationError):
        Permutation((0, 0, 1))


def test_permutation_matrix_convention():
    """Test P[i][j] = 1 exactly when sigma(i) = j."""
    sigma = Permutation.parse("(012)", 3)
    P = sigma.matrix()
    assert P.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert P.as_permutation() == sigma


def test_intmatrix_arithmetic_is_exact():
    """Test that large powers do not overflow."""
    J = IntMatrix.ones(3)
    assert (J ** 40)[0, 0] == 3 ** 39
    assert (J - IntMatrix.identity(3)).trace() == 0


# --- Graph validation ---
def test_graph_rejects_digons_and_loops():
    """Test the structural rules of mixed graphs."""
    with pytest.raises(DigonViolationError):
        MixedGraph(n=2, arcs=[(0, 1), (1, 0)])
    with pytest.raises(MooreInputError):
        MixedGraph(n=2, edges=[(0, 0)])
    with pytest.raises(MooreInputError):
        MixedGraph(n=2, edges=[(0, 2)])


def test_from_adjacency_collapses_symmetric_pairs():
    """Test the canonical decomposition of a non-negative matrix."""
    graph = MixedGraph.from_adjacency(IntMatrix([[0, 1, 1], [1, 0, 0], [0, 1, 0]]))
    assert graph.edges == frozenset({(0, 1)})
    assert graph.arcs == ((0, 2), (2, 1))
    parallel = MixedGraph.from_adjacency(IntMatrix([[0, 2], [1, 0]]), allow_parallel_arcs=True)
    assert parallel.edges == frozenset({(0, 1)})
    assert parallel.arcs == ((0, 1),)


# --- Degrees and distances ---
def test_degree_report_for_h1(h_graphs):
    """Test that H1 is totally regular with r = z = 1."""
    report = degree_report(h_graphs[1])
    assert report.totally_regular
    assert (report.r, report.z) == (1, 1)


def test_degree_report_detects_irregularity():
    """Test that a path is not totally regular."""
    report = degree_report(MixedGraph(n=3, edges=[(0, 1), (1, 2)]))
    assert not report.totally_regular
    assert report.r is None


def test_distances_cycle_and_directed_cycle():
    """Test BFS distances: edges both ways, arcs one way."""
    c5 = distances(cycle(5))
    assert c5.diameter == 2
    assert c5.average_distance == Fraction(6, 5)
    d3 = distances(directed_cycle(3))
    assert d3.dist[0, 2] == 2
    assert d3.diameter == 2


def test_distances_disconnected_is_infinite():
    """Test that unreachable pairs give an infinite diameter."""
    data = distances(MixedGraph(n=3, arcs=[(0, 1)]))
    assert not data.connected
    assert data.diameter == math.inf
    assert data.average_distance is None


def test_distance_layers_partition_j():
    """Test that the distance layers of the prism sum to J."""
    layers = distances(pentagonal_prism()).layers()
    total = IntMatrix.zeros(10)
    for layer in layers:
        total = total + layer
    assert total == IntMatrix.ones(10)
    assert len(layers) == 4


def test_layers_sum_to_within_when_disconnected():
    """Test that layers 0..k add up to the within-k indicator on two triangles."""
    data = distances(MixedGraph(n=6, edges=[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]))
    assert not data.connected
    assert data.layer(0) + data.layer(1) == data.within(1)
    assert data.within(5) == data.within(1)
    assert data.within(1)[0, 3] == 0
    assert data.within(1).row_sums() == (3,) * 6
    assert distances(cycle(5)).within(2) == IntMatrix.ones(5)


@pytest.mark.parametrize("graph", [petersen(), hoffman_singleton()], ids=["petersen", "hoffman_singleton"])
def test_moore_graphs_have_girth_five(graph):
    """Test no triangles, no 4-cycles and some 5-cycle via traces and A^2."""
    A = graph.adjacency
    square = A ** 2
    assert (A ** 3).trace() == 0
    assert all(square[i, j] <= 1 for i in range(graph.n) for j in range(graph.n) if i != j)
    assert (A ** 5).trace() > 0


# --- Walks ---
def test_non_backtracking_row_sums_equal_moore_bound(h_graphs, am212):
    """Test that every row of the walk matrix sums to M(r, z, k)."""
    assert set(non_backtracking_walks(h_graphs[1], 3).row_sums()) == {moore_bound(1, 1, 3)}
    assert set(non_backtracking_walks(am212, 2).row_sums()) == {moore_bound(2, 1, 2)}


def test_non_backtracking_walks_of_a_moore_graph_are_j():
    """Test that the Moore graph C5 has exactly one short walk to each vertex."""
    assert non_backtracking_walks(cycle(5), 2) == IntMatrix.ones(5)


# --- Converse and underlying graph ---
def test_converse_reverses_arcs_only(h_graphs):
    """Test that the converse keeps edges and reverses arcs."""
    h1 = h_graphs[1]
    back = converse(h1)
    assert back.edges == h1.edges
    assert back.adjacency == h1.undirected_part + h1.directed_part.T
    assert distances(back).diameter == distances(h1).diameter


@pytest.mark.parametrize("i", (1, 2, 3))
def test_converse_of_h_graphs_is_isomorphic(h_graphs, i):
    """Test that reversing the arcs of H1, H2 or H3 gives the same graph up to isomorphism."""
    assert is_isomorphic(converse(h_graphs[i]), h_graphs[i])


@settings(max_examples=50, deadline=None)
@given(mixed_graphs())
def test_converse_is_an_involution(graph):
    """Property: reversing the arcs twice gives the graph back."""
    assert converse(converse(graph)) == graph
    assert degree_report(converse(graph)).out_degree == degree_report(graph).in_degree


def test_underlying_graph_of_h1_is_prism(h_graphs):
    """Test that H1's underlying graph is the pentagonal prism."""
    assert underlying_matrix(h_graphs[1]) == pentagonal_prism().adjacency
    assert underlying_graph(h_graphs[1]) == pentagonal_prism()


# --- Isomorphism ---
def test_isomorphism_recovers_relabelling(h_graphs):
    """Test that a relabelled copy is found isomorphic with a valid map."""
    phi = Permutation.parse("(0 3 7)(2 9)(4 5 6)", 10)
    image = h_graphs[2].relabel(phi)
    found = find_isomorphism(h_graphs[2], image)
    assert found is not None
    assert h_graphs[2].relabel(found) == image
    assert image.relabel(found.inverse()) == h_graphs[2]
    assert found.inverse().inverse() == found


def test_h_graphs_are_pairwise_non_isomorphic(h_graphs):
    """Test that H1, H2, H3 are distinct classes."""
    assert not is_isomorphic(h_graphs[1], h_graphs[2])
    assert not is_isomorphic(h_graphs[1], h_graphs[3])
    assert not is_isomorphic(h_graphs[2], h_graphs[3])


def test_isomorphism_size_cap():
    """Test that large inputs need an explicit override."""
    hs = hoffman_singleton()
    with pytest.raises(MooreSizeLimitError):
        find_isomorphism(hs, hs)


def test_isomorphism_rejects_different_orders():
    """Test the cheap reject on orders."""
    assert find_isomorphism(complete(3), complete(4)) is None
