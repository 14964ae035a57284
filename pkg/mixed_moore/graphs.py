import logging

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher, numerical_edge_match

from . import current_config
from .exceptions import MooreSizeLimitError, MooreValidationError
from .models import (
    UNREACHABLE,
    DegreeReport,
    DistanceData,
    IntMatrix,
    MixedGraph,
    Permutation,
)

logger = logging.getLogger(__name__)


# --- Matrices and degrees ---
def adjacency_split(graph):
    """Return (R, Z, A): edge part, arc part (with multiplicities) and A = R + Z."""
    return graph.undirected_part, graph.directed_part, graph.adjacency


def degree_report(graph):
    undirected = [0] * graph.n
    out_degree = [0] * graph.n
    in_degree = [0] * graph.n
    for u, v in graph.edges:
        undirected[u] += 1
        undirected[v] += 1
    for u, v in graph.arcs:
        out_degree[u] += 1
        in_degree[v] += 1
    return DegreeReport(tuple(undirected), tuple(out_degree), tuple(in_degree))


# --- Distances ---
def distances(graph):
    """
    Breadth-first distances: edges are traversed both ways, arcs one way.
    Unreachable pairs are marked UNREACHABLE and make the diameter infinite.
    """
    dist = np.full((graph.n, graph.n), UNREACHABLE, dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(graph.to_networkx()):
        for target, length in lengths.items():
            dist[source, target] = length
    dist.flags.writeable = False
    connected = bool(np.all(dist != UNREACHABLE))
    return DistanceData(dist=dist, connected=connected)


def non_backtracking_walks(graph, k):
    """
    Sum over i = 0..k of the matrices counting walks of length i that never
    use an edge and then immediately the same edge back. For a totally
    regular (r, z) mixed graph every row sums to M(r, z, k).
    """
    if k < 0:
        raise MooreValidationError("Walk length must be non-negative.")
    # darts: (tail, head, edge id or None)
    darts = [(u, v, None) for u, v in graph.arcs]
    for eid, (u, v) in enumerate(sorted(graph.edges)):
        darts.append((u, v, eid))
        darts.append((v, u, eid))

    n, d = graph.n, len(darts)
    start = np.zeros((n, d), dtype=object)
    head = np.zeros((d, n), dtype=object)
    step = np.zeros((d, d), dtype=object)
    leaving = [[] for _ in range(n)]
    for i, (u, v, _) in enumerate(darts):
        start[u, i] = 1
        head[i, v] = 1
        leaving[u].append(i)
    for i, (u, v, eid) in enumerate(darts):
        for j in leaving[v]:
            if eid is not None and darts[j][2] == eid:
                continue
            step[i, j] = 1

    total = np.identity(n, dtype=np.int64).astype(object)
    if d == 0 or k == 0:
        return IntMatrix(total)
    frontier = start
    for _ in range(k):
        total = total + frontier.dot(head)
        frontier = frontier.dot(step)
    return IntMatrix(total)


# --- Converse and underlying graph ---
def converse(graph):
    return MixedGraph(
        n=graph.n,
        edges=graph.edges,
        arcs=tuple((v, u) for u, v in graph.arcs),
        allow_parallel_arcs=graph.allow_parallel_arcs,
    )


def underlying_matrix(graph):
    """R + (Z + Z^T): adjacency of the underlying undirected multigraph."""
    R, Z, _ = adjacency_split(graph)
    return R + (Z + Z.T)


def underlying_graph(graph):
    """The underlying undirected graph; fails if it needs multiple edges."""
    matrix = underlying_matrix(graph)
    if not matrix.is_zero_one():
        raise MooreValidationError(
            "The underlying graph has multiple edges; use underlying_matrix() instead."
        )
    return MixedGraph.from_adjacency(matrix)


# --- Isomorphism ---
def vertex_invariants(graph, dist=None):
    """Per-vertex (undirected, out, in, out-distance multiset, in-distance multiset)."""
    degrees = degree_report(graph)
    if dist is None:
        dist = distances(graph).dist
    return [
        (
            degrees.undirected[v],
            degrees.out_degree[v],
            degrees.in_degree[v],
            tuple(sorted(int(x) for x in dist[v, :])),
            tuple(sorted(int(x) for x in dist[:, v])),
        )
        for v in range(graph.n)
    ]


def find_isomorphism(g, h, max_order=None, allow_large=False):
    """
    Return a Permutation phi with phi(G) = H (edges and arcs as multisets),
    or None. Backtracking (VF2) with vertex invariants as the pruning filter.
    """
    if max_order is None:
        max_order = current_config().ISOMORPHISM_MAX_ORDER
    if max(g.n, h.n) > max_order:
        if not allow_large:
            raise MooreSizeLimitError(
                f"Isomorphism testing is supported up to n={max_order}, got n={max(g.n, h.n)}.",
                payload={"max_order": max_order},
            )
        logger.warning(f"Running isomorphism test beyond n={max_order}; this may be slow.")

    if (g.n, len(g.edges), len(g.arcs)) != (h.n, len(h.edges), len(h.arcs)):
        return None

    inv_g = vertex_invariants(g)
    inv_h = vertex_invariants(h)
    if sorted(inv_g) != sorted(inv_h):
        return None

    ng = g.to_networkx()
    nh = h.to_networkx()
    nx.set_node_attributes(ng, dict(enumerate(inv_g)), "inv")
    nx.set_node_attributes(nh, dict(enumerate(inv_h)), "inv")

    matcher = DiGraphMatcher(
        ng,
        nh,
        node_match=lambda a, b: a["inv"] == b["inv"],
        edge_match=numerical_edge_match("weight", 1),
    )
    if not matcher.is_isomorphic():
        return None
    phi = Permutation(tuple(matcher.mapping[v] for v in range(g.n)))
    image = g.relabel(phi)
    if (image.edges, image.arcs) != (h.edges, h.arcs):
        raise MooreValidationError("Internal error: isomorphism failed re-verification.")
    return phi


def is_isomorphic(g, h, **options):
    return find_isomorphism(g, h, **options) is not None
