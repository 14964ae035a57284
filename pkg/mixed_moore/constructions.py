import logging
from functools import lru_cache
from itertools import combinations

from .exceptions import MoorePreconditionError, MooreValidationError
from .graphs import degree_report, distances, find_isomorphism, underlying_matrix
from .models import (
    VERDICT_ALMOST_MOORE,
    VERDICT_MOORE,
    VERDICT_NOT_ALMOST_MOORE,
    HFamily,
    IntMatrix,
    LineDigraphMap,
    MixedGraph,
    Permutation,
    ZooEntry,
)
from .spectra import char_poly
from .utils import validate_integer_params

logger = logging.getLogger(__name__)


# --- Classical families (all edges) ---
@validate_integer_params(n=3)
def cycle(n):
    return MixedGraph(n=n, edges=[(i, (i + 1) % n) for i in range(n)])


@validate_integer_params(n=2)
def complete(n):
    return MixedGraph(n=n, edges=list(combinations(range(n), 2)))


@validate_integer_params(m=1, n=1)
def complete_bipartite(m, n):
    return MixedGraph(n=m + n, edges=[(i, m + j) for i in range(m) for j in range(n)])


def petersen():
    """Kneser graph on the 2-subsets of {0..4}: disjoint pairs are adjacent."""
    pairs = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i, j in combinations(range(len(pairs)), 2)
        if not set(pairs[i]) & set(pairs[j])
    ]
    return MixedGraph(n=10, edges=edges)


def hoffman_singleton():
    """
    Five pentagons P_h (vertex 5h + i, i ~ i +- 1) and five pentagrams Q_j
    (vertex 25 + 5j + i, i ~ i +- 2); vertex i of P_h is joined to vertex
    h*j + i of Q_j, so each pentagon meets each pentagram in a perfect matching.
    """
    edges = set()
    for h in range(5):
        for i in range(5):
            edges.add((5 * h + i, 5 * h + (i + 1) % 5))
            edges.add((25 + 5 * h + i, 25 + 5 * h + (i + 2) % 5))
            for j in range(5):
                edges.add((5 * h + i, 25 + 5 * j + (h * j + i) % 5))
    return MixedGraph(n=50, edges={(min(e), max(e)) for e in edges})


def pentagonal_prism():
    """Outer cycle on even labels, inner cycle on odd labels, spokes 2i ~ 2i + 1."""
    edges = []
    for i in range(5):
        edges.append((2 * i, 2 * i + 1))
        edges.append((2 * i, (2 * i + 2) % 10))
        edges.append((2 * i + 1, (2 * i + 3) % 10))
    return MixedGraph(n=10, edges=edges)


# --- Mixed constructions ---
@validate_integer_params(m=3)
def cayley_dihedral(m):
    """
    Cayley mixed graph of D_m = <r, s | r^m = s^2 = (rs)^2 = 1>. Element
    r^a s^b has index a + m*b; the involution s gives edges and r gives
    arcs g -> g r.
    """

    def times_r(a, b):
        return ((a + (1 if b == 0 else -1)) % m, b)

    edges = [(a, a + m) for a in range(m)]
    arcs = []
    for b in range(2):
        for a in range(m):
            ta, tb = times_r(a, b)
            arcs.append((a + m * b, ta + m * tb))
    return MixedGraph(n=2 * m, edges=edges, arcs=arcs)


def cayley_d5():
    return cayley_dihedral(5)


def almost_moore_212():
    """
    The (2, 1, 2) almost Moore mixed graph on a_i = i and c_i = 5 + i:
    edges a_i a_{i+1} and c_i c_{i+2}, arcs a_i -> c_{i-1} and c_i -> a_{i-1}.
    """
    edges, arcs = [], []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((5 + i, 5 + (i + 2) % 5))
        arcs.append((i, 5 + (i - 1) % 5))
        arcs.append((5 + i, (i - 1) % 5))
    return MixedGraph(n=10, edges=edges, arcs=arcs)


# --- The H family ---
_H_DATA = {
    1: ("(01)(23)(45)(67)(89)", "(01)(23)(45)(67)(89)", "(02468)(19753)"),
    2: ("(01)(23)(4675)(89)", "(01)(23)(57)(46)(89)", "(0245319768)"),
    3: ("(23)(4675)(8019)", "(08)(23)(57)(46)(19)", "(024531)(6897)"),
}


@lru_cache(maxsize=None)
def h_family():
    """sigma, rho and omega for H1, H2, H3 on the vertex labels 0..9."""
    sigma, rho, omega = {}, {}, {}
    for i, (s, r, w) in _H_DATA.items():
        sigma[i] = Permutation.parse(s, 10)
        rho[i] = Permutation.parse(r, 10)
        omega[i] = Permutation.parse(w, 10)
        if not rho[i].is_involution() or rho[i].fixed_points:
            raise MooreValidationError(f"rho{i} must be a fixed-point-free involution.")
        if omega[i].fixed_points:
            raise MooreValidationError(f"omega{i} must be fixed-point free.")
    return HFamily(sigma=sigma, rho=rho, omega=omega)


def _graph_from_permutations(rho, omega):
    edges = [c for c in rho.cycles if len(c) == 2]
    arcs = [(u, omega(u)) for u in range(omega.n)]
    return MixedGraph(n=rho.n, edges=edges, arcs=arcs)


def h_matrix(i):
    """A(i) for i = 1..7; A(4)..A(7) combine matrices of different H graphs."""
    fam = h_family()
    if i in (1, 2, 3):
        return fam.R(i) + fam.Z(i)
    combos = {4: (fam.R(1), fam.Z(2)), 5: (fam.R(2), fam.Z(3)), 6: (fam.P(1), fam.Z(2)), 7: (fam.P(2), fam.Z(3))}
    if i not in combos:
        raise MooreValidationError(f"H graphs are numbered 1..7, got {i}.")
    first, second = combos[i]
    return first + second


@lru_cache(maxsize=None)
def h_graph(i):
    if i in (1, 2, 3):
        fam = h_family()
        return _graph_from_permutations(fam.rho[i], fam.omega[i])
    return MixedGraph.from_adjacency(h_matrix(i), allow_parallel_arcs=True)


# --- Line digraphs ---
def _darts(graph):
    darts = list(graph.arcs)
    for u, v in graph.edges:
        darts.extend([(u, v), (v, u)])
    return tuple(sorted(darts))


def line_digraph(graph):
    """
    Line digraph of G read as a digraph (every edge a digon): vertex uv is
    joined to vw for every dart v -> w. Opposite pairs uv -> vu, vu -> uv
    come back as edges.
    """
    darts = _darts(graph)
    out_degree = [0] * graph.n
    for u, _ in darts:
        out_degree[u] += 1
    if graph.n and min(out_degree) == 0:
        raise MoorePreconditionError(
            "Line digraph needs every vertex to have an outgoing edge or arc.",
            payload={"sinks": [v for v in range(graph.n) if out_degree[v] == 0]},
        )
    out_regular = len(set(out_degree)) <= 1
    if not out_regular:
        logger.warning("Line digraph of a graph that is not out-regular; result is not totally regular.")

    leaving = [[] for _ in range(graph.n)]
    for index, (u, _) in enumerate(darts):
        leaving[u].append(index)
    size = len(darts)
    matrix = [[0] * size for _ in range(size)]
    for index, (_, v) in enumerate(darts):
        for successor in leaving[v]:
            matrix[index][successor] += 1
    line = MixedGraph.from_adjacency(
        IntMatrix(matrix), allow_parallel_arcs=graph.has_parallel_arcs
    )
    return line, LineDigraphMap(darts=darts, out_regular=out_regular)


@validate_integer_params(d=1, k=1)
def kautz(d, k=2):
    """K(d, k) = L^(k-1)(K_{d+1}), the complete graph read as a symmetric digraph."""
    graph = complete(d + 1)
    for _ in range(k - 1):
        graph, _ = line_digraph(graph)
    return graph


@validate_integer_params(d=1, k=1)
def kautz_words(d, k=2):
    """Word labels of the vertices of kautz(d, k): dart (u, v) gets word(u) + last letter of word(v)."""
    graph = complete(d + 1)
    words = [str(v) for v in range(d + 1)]
    for _ in range(k - 1):
        graph, mapping = line_digraph(graph)
        words = [words[u] + words[v][-1] for u, v in mapping.darts]
    return words


def line_digraph_metrics(graph):
    """Order, diameter and average distance of G and LG, with n_L = dn, k_L = k + 1, avg_L < avg + 1."""
    degrees = degree_report(graph)
    out = {u + o for u, o in zip(degrees.undirected, degrees.out_degree)}
    inn = {u + i for u, i in zip(degrees.undirected, degrees.in_degree)}
    if len(out) != 1 or out != inn:
        raise MoorePreconditionError("Line digraph metrics need a regular digraph (after digon expansion).")
    delta = out.pop()
    if delta <= 1:
        raise MoorePreconditionError(f"Line digraph metrics need degree > 1, got {delta}.")

    line, _ = line_digraph(graph)
    dist, line_dist = distances(graph), distances(line)
    result = {
        "delta": delta,
        "n": graph.n,
        "k": dist.diameter,
        "avg": dist.average_distance,
        "n_L": line.n,
        "k_L": line_dist.diameter,
        "avg_L": line_dist.average_distance,
    }
    result["order_ok"] = result["n_L"] == delta * graph.n
    result["diameter_ok"] = result["k_L"] == result["k"] + 1
    result["average_ok"] = (
        result["avg"] is not None
        and result["avg_L"] is not None
        and result["avg_L"] < result["avg"] + 1
    )
    return result


# --- Identity suites ---
def lemma_rzp_suite():
    """Entrywise checks of the R/Z/P identities of the H family; name -> bool."""
    fam = h_family()
    A = {i: h_matrix(i) for i in range(1, 8)}
    I = IntMatrix.identity(10)
    checks = {}
    for i in (1, 2, 3):
        checks[f"R{i}_squared_is_I"] = fam.R(i) @ fam.R(i) == I
        checks[f"A1_is_P{i}_plus_Z{i}"] = A[1] == fam.P(i) + fam.Z(i)
        checks[f"A{i}_is_P{i}T_plus_Z1"] = A[i] == fam.P(i).T + fam.Z(1)
    for i, j in combinations((1, 2, 3), 2):
        checks[f"A{i}_A{j}_commute"] = A[i].commutes_with(A[j])

    # A1..A3 and A4..A7 form two cospectral classes with different spectra.
    first, mixed = char_poly(A[1]), char_poly(A[4])
    for i in (2, 3):
        checks[f"A{i}_cospectral_with_A1"] = char_poly(A[i]) == first
    for i in (5, 6, 7):
        checks[f"A{i}_cospectral_with_A4"] = char_poly(A[i]) == mixed
    checks["A4_not_cospectral_with_A1"] = mixed != first
    checks["H4_isomorphic_H6"] = find_isomorphism(h_graph(4), h_graph(6)) is not None
    checks["H4_isomorphic_H7"] = find_isomorphism(h_graph(4), h_graph(7)) is not None
    checks["H4_not_isomorphic_H5"] = find_isomorphism(h_graph(4), h_graph(5)) is None

    prism = pentagonal_prism().adjacency
    for i in (1, 2, 3):
        checks[f"underlying_H{i}_is_prism"] = underlying_matrix(h_graph(i)) == prism
    failed = [name for name, held in checks.items() if not held]
    if failed:
        logger.error(f"H family identities failed: {failed}")
    return checks


def algebra_membership():
    """P(i) = R1 + Z1 - Z(i) and R(i) = P(i)^T + Z1 - Z(i), plus (P1)^2 = I."""
    fam = h_family()
    checks = {}
    for i in (1, 2, 3):
        checks[f"P{i}_is_R1_plus_Z1_minus_Z{i}"] = fam.P(i) == fam.R(1) + fam.Z(1) - fam.Z(i)
        checks[f"R{i}_is_P{i}T_plus_Z1_minus_Z{i}"] = fam.R(i) == fam.P(i).T + fam.Z(1) - fam.Z(i)
    checks["P1_is_R1"] = fam.P(1) == fam.R(1)
    checks["P1_squared_is_I"] = fam.P(1) @ fam.P(1) == IntMatrix.identity(10)
    return checks


# --- Lookup by name ---
def _ints(name, params, count):
    if len(params) != count:
        raise MooreValidationError(
            f"Family '{name}' takes {count} integer parameter(s), got {len(params)}."
        )
    try:
        return [int(p) for p in params]
    except (TypeError, ValueError):
        raise MooreValidationError(f"Family '{name}' parameters must be integers, got {list(params)}.")


FAMILIES = {
    "cycle": (1, cycle),
    "complete": (1, complete),
    "complete_bipartite": (2, complete_bipartite),
    "petersen": (0, petersen),
    "hoffman_singleton": (0, hoffman_singleton),
    "pentagonal_prism": (0, pentagonal_prism),
    "cayley_d5": (0, cayley_d5),
    "cayley_dihedral": (1, cayley_dihedral),
    "almost_moore_212": (0, almost_moore_212),
    "H": (1, None),
    "kautz": (None, None),
    "line": (None, None),
}


def family(name, params=()):
    """Build a named graph; ``line <family> [params]`` applies the line digraph operator."""
    params = list(params)
    if name not in FAMILIES:
        raise MooreValidationError(
            f"Unknown family '{name}'. Known: {', '.join(sorted(FAMILIES))}.",
            payload={"families": sorted(FAMILIES)},
        )
    if name == "line":
        if not params:
            raise MooreValidationError("Family 'line' needs the name of the graph to transform.")
        graph, _ = line_digraph(family(params[0], params[1:]))
        return graph
    if name == "kautz":
        if len(params) not in (1, 2):
            raise MooreValidationError("Family 'kautz' takes d and an optional k.")
        return kautz(*_ints(name, params, len(params)))
    if name == "H":
        (i,) = _ints(name, params, 1)
        if not 1 <= i <= 7:
            raise MooreValidationError(f"H graphs are numbered 1..7, got {i}.")
        return h_graph(i)
    count, builder = FAMILIES[name]
    graph = builder(*_ints(name, params, count))
    logger.debug(f"Built {name} {' '.join(map(str, params))}: {graph!r}")
    return graph


# Constructions with the (r, z, k) they verify at and the expected verdict.
ZOO = (
    ZooEntry("cycle", (5,), 2, 0, 2, VERDICT_MOORE),
    ZooEntry("complete", (4,), 3, 0, 1, VERDICT_MOORE),
    ZooEntry("petersen", (), 3, 0, 2, VERDICT_MOORE),
    ZooEntry("hoffman_singleton", (), 7, 0, 2, VERDICT_MOORE),
    ZooEntry("pentagonal_prism", (), 3, 0, 3, VERDICT_NOT_ALMOST_MOORE),
    ZooEntry("H", (1,), 1, 1, 3, VERDICT_ALMOST_MOORE),
    ZooEntry("H", (2,), 1, 1, 3, VERDICT_ALMOST_MOORE),
    ZooEntry("H", (3,), 1, 1, 3, VERDICT_ALMOST_MOORE),
    ZooEntry("cayley_d5", (), 1, 1, 3, VERDICT_ALMOST_MOORE),
    ZooEntry("almost_moore_212", (), 2, 1, 2, VERDICT_ALMOST_MOORE),
    ZooEntry("kautz", (2, 2), 1, 1, 2, VERDICT_MOORE),
    ZooEntry("kautz", (3, 2), 1, 2, 2, VERDICT_MOORE),
    ZooEntry("kautz", (3, 2), 0, 3, 2, VERDICT_ALMOST_MOORE, as_digraph=True),
    ZooEntry("line", ("cycle", 5), 1, 1, 3, VERDICT_ALMOST_MOORE),
    ZooEntry("line", ("complete_bipartite", 3, 3), 1, 2, 3, VERDICT_NOT_ALMOST_MOORE),
    ZooEntry("line", ("petersen",), 1, 2, 3, VERDICT_NOT_ALMOST_MOORE),
)


def zoo_graph(entry):
    return family(entry.name, entry.params)
