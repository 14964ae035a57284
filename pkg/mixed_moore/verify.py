import logging

from .bounds import moore_bound
from .exceptions import MoorePreconditionError, MooreValidationError, RepeatExtractionError
from .graphs import adjacency_split, degree_report, distances, non_backtracking_walks
from .models import (
    VERDICT_ALMOST_MOORE,
    VERDICT_MOORE,
    VERDICT_NOT_ALMOST_MOORE,
    AlmostMooreReport,
    DegreeReport,
    EquationCheck,
    IntMatrix,
)

logger = logging.getLogger(__name__)

STAGES = ("simple", "regularity", "order", "diameter", "equation", "permutation")


def _require_simple(graph):
    if graph.has_parallel_arcs:
        raise MoorePreconditionError(
            "This check is defined for simple mixed graphs; the input has parallel arcs.",
            payload={"stage": "simple"},
        )


def _digraph_degrees(degrees):
    """Degrees when every edge counts as a pair of opposite arcs."""
    out = tuple(u + o for u, o in zip(degrees.undirected, degrees.out_degree))
    inn = tuple(u + i for u, i in zip(degrees.undirected, degrees.in_degree))
    return DegreeReport(tuple(0 for _ in out), out, inn)


def walk_sum(A, k):
    """I + A + ... + A^k."""
    total = IntMatrix.identity(A.order)
    power = IntMatrix.identity(A.order)
    for _ in range(k):
        power = power @ A
        total = total + power
    return total


def repeat_surplus(graph, r, k, as_digraph=False):
    """
    Walk count minus J minus the walks every vertex is forced to have:
    the repeat matrix P for an almost Moore graph, zero for a Moore graph.

    Returns (equation name, surplus, extrapolated).
    """
    R, Z, A = adjacency_split(graph)
    n = graph.n
    I, J = IntMatrix.identity(n), IntMatrix.ones(n)
    if as_digraph or r == 0:
        return "walks", walk_sum(A, k) - J, False
    if k == 1:
        return "walks", I + A - J, False
    if k == 2:
        return "diameter2", I + A + A @ A - J - r * I, False
    if k == 3 and r == 1:
        A2 = A @ A
        return "diameter3", A2 + A2 @ A - J - Z, False
    return "nb_walks", non_backtracking_walks(graph, k) - J, True


def verify_almost_moore(graph, k, r=None, z=None, as_digraph=False):
    """
    Staged verification: simple -> regularity -> order -> diameter ->
    equation -> permutation. The first failing stage is recorded.
    """
    degrees = degree_report(graph)
    report = AlmostMooreReport(n=graph.n, k=k, degrees=degrees, as_digraph=as_digraph)

    def fail(stage, reason, row=None):
        report.failed_stage = stage
        report.failed_row = row
        report.reason = reason if row is None else f"{reason} (row {row})"
        report.verdict = VERDICT_NOT_ALMOST_MOORE
        logger.debug(f"Verification stopped at stage '{stage}': {report.reason}")
        return report

    if k < 1:
        raise MooreValidationError(f"Diameter must be at least 1, got k = {k}.")
    if graph.has_parallel_arcs:
        return fail("simple", "graph has parallel arcs")

    view = _digraph_degrees(degrees) if as_digraph else degrees
    if not view.totally_regular:
        return fail("regularity", "graph is not totally regular")
    report.r, report.z = view.r or 0, view.z or 0
    if report.r + report.z == 0:
        return fail("regularity", "graph has no edges or arcs")
    if (r is not None and r != report.r) or (z is not None and z != report.z):
        return fail(
            "regularity",
            f"degrees are (r, z) = ({report.r}, {report.z}), expected ({r}, {z})",
        )
    if report.r > 1 and k >= 3:
        report.notes.append(
            "r > 1 with k >= 3: order M(r,z,k) - 1 exceeds the bound M(r,z,k) - r"
        )

    report.moore_bound = moore_bound(report.r, report.z, k)
    if graph.n == report.moore_bound:
        target = VERDICT_MOORE
    elif graph.n == report.moore_bound - 1:
        target = VERDICT_ALMOST_MOORE
    else:
        return fail(
            "order",
            f"n = {graph.n} but M({report.r},{report.z},{k}) = {report.moore_bound}",
        )
    report.order_ok = target == VERDICT_ALMOST_MOORE

    dist = distances(graph)
    report.diameter = dist.diameter
    if dist.diameter != k:
        return fail("diameter", f"diameter is {dist.diameter}, expected {k}")

    name, surplus, extrapolated = repeat_surplus(graph, report.r, k, as_digraph)
    report.extrapolated = extrapolated
    if extrapolated:
        report.notes.append(
            "no closed matrix equation for these parameters; checked non-backtracking walk counts"
        )

    for row in range(graph.n):
        entries = surplus.data[row]
        if any(x < 0 for x in entries):
            report.equations_checked.append((name, False))
            return fail("equation", "some vertex is not reached by a walk of length <= k", row)
        total = sum(entries)
        expected = 0 if target == VERDICT_MOORE else 1
        if total != expected or any(x > 1 for x in entries):
            report.equations_checked.append((name, False))
            return fail(
                "equation",
                f"surplus walks in row sum to {total}, expected {expected}",
                row,
            )
    report.equations_checked.append((name, True))

    if target == VERDICT_MOORE:
        report.verdict = VERDICT_MOORE
        return report

    if not surplus.is_permutation_matrix():
        return fail("permutation", "some vertex is the repeat of two vertices")
    report.repeat = surplus.as_permutation()
    report.sigma_is_automorphism = is_automorphism(graph, report.repeat)
    report.verdict = VERDICT_ALMOST_MOORE

    if not as_digraph and k == 3 and report.r == 1:
        edge_check = check_repeat_is_edge_matrix(graph)
        report.equations_checked.append(("repeat_is_edge_matrix", edge_check.held))
        ident = distance_identities(graph, dist)
        report.equations_checked.append(("distance_identities", ident["exact_split"]))
        if report.repeat.is_identity():
            report.notes.append("every vertex is a selfrepeat: contradicts P != I for (1,z,3)")
    logger.info(
        f"Verified (r,z,k)=({report.r},{report.z},{k}) almost Moore graph, sigma = {report.repeat}."
    )
    return report


def extract_repeats(graph, k, as_digraph=False):
    """The repeat permutation sigma, or RepeatExtractionError naming the failing stage."""
    _require_simple(graph)
    report = verify_almost_moore(graph, k, as_digraph=as_digraph)
    if report.repeat is None:
        reason = report.reason or "graph is a Moore graph: no vertex has a repeat"
        raise RepeatExtractionError(
            reason,
            stage=report.failed_stage or "equation",
            row=report.failed_row,
            payload={"verdict": report.verdict},
        )
    return report.repeat


def _require_regular_with_diameter(graph, k, as_digraph=False):
    _require_simple(graph)
    degrees = degree_report(graph)
    view = _digraph_degrees(degrees) if as_digraph else degrees
    if not view.totally_regular:
        raise MoorePreconditionError("Graph is not totally regular.")
    dist = distances(graph)
    if dist.diameter != k:
        raise MoorePreconditionError(
            f"Graph has diameter {dist.diameter}, this check needs diameter {k}.",
            payload={"diameter": str(dist.diameter)},
        )
    return view, dist


def check_eq_diameter2(graph, as_digraph=False):
    """I + A + A^2 = J + rI + P with P a permutation matrix."""
    view, _ = _require_regular_with_diameter(graph, 2, as_digraph)
    r = 0 if as_digraph else (view.r or 0)
    A = graph.adjacency
    n = graph.n
    P = IntMatrix.identity(n) + A + A @ A - IntMatrix.ones(n) - r * IntMatrix.identity(n)
    return EquationCheck("diameter2", P.is_permutation_matrix(), P)


def distance_identities(graph, dist=None):
    """
    For r = 1: (A^2 - I) - A_2 and (A^3 - A - Z) - A_3 are non-negative and
    sum to P, i.e. the distance-matrix identities hold off the repeat entries.
    """
    if dist is None:
        dist = distances(graph)
    _, Z, A = adjacency_split(graph)
    n = graph.n
    I, J = IntMatrix.identity(n), IntMatrix.ones(n)
    A2 = A @ A
    A3 = A2 @ A
    P = A2 + A3 - J - Z
    extra2 = (A2 - I) - dist.layer(2)
    extra3 = (A3 - A - Z) - dist.layer(3)
    return {
        "A2_exact": extra2 == IntMatrix.zeros(n),
        "A3_exact": extra3 == IntMatrix.zeros(n),
        "exact_split": extra2.is_nonnegative()
        and extra3.is_nonnegative()
        and extra2 + extra3 == P,
    }


def check_eq_diameter3(graph):
    """A^2 + A^3 = J + Z + P, plus the distance-matrix identities."""
    view, dist = _require_regular_with_diameter(graph, 3)
    if view.r != 1:
        raise MoorePreconditionError(
            f"Diameter-3 almost Moore mixed graphs have r = 1, got r = {view.r}.",
            payload={"r": view.r},
        )
    _, Z, A = adjacency_split(graph)
    n = graph.n
    A2 = A @ A
    P = A2 + A2 @ A - IntMatrix.ones(n) - Z
    return EquationCheck(
        "diameter3", P.is_permutation_matrix(), P, details=distance_identities(graph, dist)
    )


def check_repeat_is_edge_matrix(graph):
    """-A + A^2 + A^3 = J (the repeat matrix equals the edge matrix)."""
    A = graph.adjacency
    A2 = A @ A
    held = A2 + A2 @ A - A == IntMatrix.ones(graph.n)
    return EquationCheck("repeat_is_edge_matrix", held, None)


def is_automorphism(graph, perm):
    if perm.n != graph.n:
        raise MooreValidationError(
            f"Permutation acts on {perm.n} points, graph has {graph.n} vertices."
        )
    return perm.matrix().commutes_with(graph.adjacency)


def selfrepeats(report):
    if report.repeat is None:
        raise MoorePreconditionError("No repeat permutation: verification did not succeed.")
    fixed = report.repeat.fixed_points
    if all_selfrepeat_violation(report):
        logger.warning("All vertices are selfrepeats in a (1,z,3) candidate; P = I is impossible.")
    return fixed


def all_selfrepeat_violation(report):
    """True when a (1, z, 3) report claims every vertex is its own repeat."""
    return (
        report.repeat is not None
        and report.r == 1
        and report.k == 3
        and not report.as_digraph
        and report.repeat.is_identity()
    )