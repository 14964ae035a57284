import logging

import sympy as sp
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from . import current_config
from .exceptions import MooreSizeLimitError, MooreValidationError
from .models import CharPoly, IntMatrix, MixedGraph, SpectrumPattern

logger = logging.getLogger(__name__)

x = sp.Symbol("x")

# x^2 + x - 1 carries the conjugate pair (-1 +- sqrt 5) / 2.
GOLDEN_FACTOR = (1, 1, -1)


def _as_matrix(value):
    if isinstance(value, MixedGraph):
        return value.adjacency
    if isinstance(value, IntMatrix):
        return value
    return IntMatrix(value)


def char_poly(matrix, max_order=None):
    """
    det(xI - M) over the integers, computed division free (Berkowitz)
    on a sympy DomainMatrix over ZZ.
    """
    M = _as_matrix(matrix)
    if max_order is None:
        max_order = current_config().CHARPOLY_MAX_ORDER
    if M.order > max_order:
        raise MooreSizeLimitError(
            f"Characteristic polynomials are computed up to order {max_order}, got {M.order}; "
            "validate large graphs by their metric properties instead.",
            payload={"max_order": max_order},
        )
    if M.order == 0:
        return CharPoly((1,))
    rows = [[ZZ(int(v)) for v in row] for row in M.data]
    coeffs = DomainMatrix(rows, (M.order, M.order), ZZ).charpoly()
    return CharPoly(tuple(int(c) for c in coeffs))


def as_expr(poly):
    return sp.Poly(list(poly.coefficients), x).as_expr()


def factorize(poly):
    """Irreducible integer factors of a characteristic polynomial."""
    content, factors = sp.Poly(list(poly.coefficients), x, domain="ZZ").factor_list()
    if content != 1:
        raise MooreValidationError(f"Unexpected content {content} in a monic polynomial.")
    pairs = tuple(
        sorted(
            ((tuple(int(c) for c in f.all_coeffs()), int(m)) for f, m in factors),
            key=lambda item: (len(item[0]), item[0]),
        )
    )
    return SpectrumPattern(factors=pairs, expression=str(sp.factor(as_expr(poly))))


def cospectral(g, h):
    """Equal adjacency characteristic polynomials; graphs of different order are never cospectral."""
    a, b = _as_matrix(g), _as_matrix(h)
    if a.order != b.order:
        logger.debug(f"Orders differ ({a.order} vs {b.order}); not cospectral.")
        return False
    return char_poly(a) == char_poly(b)


def expected_pattern(z):
    """(x - (1 + z)) x^a (x^2 + x - 1)^(z + 1) for a (1, z, 3) graph of order (1+z)^3 + (1+z)^2 - (1+z)."""
    n = (1 + z) ** 3 + (1 + z) ** 2 - (1 + z)
    b = z + 1
    a = n - 1 - 2 * b
    expr = (x - (1 + z)) * x**a * (x**2 + x - 1) ** b
    return CharPoly(tuple(int(c) for c in sp.Poly(expr, x).all_coeffs()))


def matches_pattern(graph, z):
    n = (1 + z) ** 3 + (1 + z) ** 2 - (1 + z)
    M = _as_matrix(graph)
    if M.order != n:
        logger.debug(f"Order {M.order} does not match (1+z)^3+(1+z)^2-(1+z) = {n} for z={z}.")
        return False
    return char_poly(M) == expected_pattern(z)


def trace_identities(graph):
    """
    tr(A^0) = n, tr(A) = 0 for loopless graphs, and tr(A^2) counting the
    closed 2-walks: twice the number of edges, n when every vertex has one edge.
    """
    A = graph.adjacency
    A2 = A @ A
    report = {
        "n": graph.n,
        "trace_A0": IntMatrix.identity(graph.n).trace(),
        "trace_A": A.trace(),
        "trace_A2": A2.trace(),
        "twice_edges": 2 * len(graph.edges),
    }
    report["loopless"] = report["trace_A"] == 0
    report["trace_A2_is_n"] = report["trace_A2"] == graph.n
    report["trace_A2_is_twice_edges"] = report["trace_A2"] == report["twice_edges"]
    return report
