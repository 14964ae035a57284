import logging
import math

from .exceptions import MoorePreconditionError
from .models import ClosedFormParams, MoorePlan
from .utils import require_degree, validate_integer_params

logger = logging.getLogger(__name__)


@validate_integer_params(r=0, z=0, k=1)
@require_degree
def moore_plan(r, z, k):
    """
    Count the Moore tree layer by layer. e_i / a_i are the vertices at depth i
    reached last by an edge / by an arc:

        e_1 = r,  a_1 = z
        e_{i+1} = (r - 1) e_i + r a_i
        a_{i+1} = z (e_i + a_i)
    """
    layers = [(r, z)]
    for _ in range(k - 1):
        e, a = layers[-1]
        layers.append(((r - 1) * e + r * a, z * (e + a)))
    bound = 1 + sum(e + a for e, a in layers)
    return MoorePlan(r=r, z=z, k=k, layers=tuple(layers), moore_bound=bound)


def moore_bound(r, z, k):
    """Exact Moore bound M(r, z, k)."""
    return moore_plan(r, z, k).moore_bound


@validate_integer_params(r=0, z=0)
@require_degree
def closed_form_params(r, z):
    v = (z + r) ** 2 + 2 * (z - r) + 1
    if v <= 0:
        raise MoorePreconditionError(
            f"Closed form is degenerate for (r, z) = ({r}, {z}): v = {v}.",
            payload={"v": v},
        )
    root = math.sqrt(v)
    return ClosedFormParams(
        A=(root - (z + r + 1)) / (2 * root),
        B=(root + (z + r + 1)) / (2 * root),
        v=float(v),
        u1=(z + r - 1 - root) / 2,
        u2=(z + r - 1 + root) / 2,
    )


@validate_integer_params(k=1)
def moore_bound_closed(r, z, k):
    """Floating evaluation of the closed form; the recurrence stays authoritative."""
    p = closed_form_params(r, z)
    for name, u in (("u1", p.u1), ("u2", p.u2)):
        if math.isclose(u, 1.0, rel_tol=0, abs_tol=1e-12):
            raise MoorePreconditionError(
                f"Closed form is degenerate for (r, z) = ({r}, {z}): {name} = 1.",
                payload={name: u},
            )
    return p.A * (p.u1 ** (k + 1) - 1) / (p.u1 - 1) + p.B * (
        p.u2 ** (k + 1) - 1
    ) / (p.u2 - 1)


@validate_integer_params(r=1, z=1, k=1)
def improved_bound(r, z, k):
    """N <= M(r, z, k) - r for (r, z)-regular mixed graphs of diameter k >= 3."""
    if k < 3:
        raise MoorePreconditionError(
            f"The improved bound needs diameter k >= 3, got k = {k}.",
            payload={"k": k},
        )
    return moore_bound(r, z, k) - r


@validate_integer_params(z=1)
def bipartite_bound_1z3(z):
    """Moore bound for bipartite (1, z, 3)-mixed graphs: 2 (z + 1)^2."""
    return 2 * (z + 1) ** 2
