import csv
import io
import logging
from math import isqrt

from .bounds import moore_bound
from .exceptions import MoorePreconditionError
from .models import FeasibilityWitness, MultiplicityCheck, Table1Row
from .utils import format_columns, validate_integer_params

logger = logging.getLogger(__name__)


def _odd_root(value):
    """The odd square root of ``value`` if it is an odd perfect square."""
    if value < 0:
        return None
    root = isqrt(value)
    if root * root == value and root % 2 == 1:
        return root
    return None


def witnesses(r):
    """(c1, c2): odd roots of 4r + 1 and 4r - 7 when they exist."""
    return _odd_root(4 * r + 1), _odd_root(4 * r - 7)


def _check_scope(r):
    if r % 2 or r <= 2:
        raise MoorePreconditionError(
            f"Out of theorem scope: the diameter-2 conditions need even r > 2, got r = {r}.",
            payload={"scope": "out_of_theorem_scope", "r": r},
        )


# --- Diameter 2 ---
@validate_integer_params(r=0, z=1)
def diameter2_feasible(r, z):
    """
    Screen an (r, z, 2) almost Moore mixed graph. Branch "a": c^2 = 4r + 1 and
    c | (4z + 1)(4z - 7); branch "b": c^2 = 4r - 7 and c | 16z^2 + 40z - 23.
    Divisibility is taken on absolute values.
    """
    _check_scope(r)
    c1, c2 = witnesses(r)
    if c1 is not None and abs((4 * z + 1) * (4 * z - 7)) % c1 == 0:
        return FeasibilityWitness(r=r, z=z, branch="a", c=c1, n=moore_bound(r, z, 2) - 1)
    if c2 is not None and abs(16 * z * z + 40 * z - 23) % c2 == 0:
        return FeasibilityWitness(r=r, z=z, branch="b", c=c2, n=moore_bound(r, z, 2) - 1)
    return FeasibilityWitness(r=r, z=z, branch=None, c=None, n=None)


@validate_integer_params(z_limit=1)
def table1(r_values, z_limit, max_entries=None):
    rows = []
    for r in r_values:
        _check_scope(r)
        c1, c2 = witnesses(r)
        z_values, n_values = [], []
        for z in range(1, z_limit + 1):
            witness = diameter2_feasible(r, z)
            if witness.admissible:
                z_values.append(z)
                n_values.append(witness.n)
                if max_entries and len(z_values) == max_entries:
                    break
        rows.append(
            Table1Row(r=r, c1=c1, c2=c2, z_values=tuple(z_values), n_values=tuple(n_values))
        )
    logger.debug(f"Computed {len(rows)} diameter-2 feasibility rows up to z={z_limit}.")
    return rows


def format_table1(rows):
    def dash(value):
        return "-" if value is None else str(value)

    def series(values):
        return ",".join(map(str, values)) + ",..." if values else "-"

    return format_columns(
        ["r", "c1", "c2", "z", "n", "Existence"],
        [
            [row.r, dash(row.c1), dash(row.c2), series(row.z_values), series(row.n_values), row.existence]
            for row in rows
        ],
    )


def table1_csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["r", "c1", "c2", "z", "n", "existence"])
    for row in rows:
        writer.writerow(
            [
                row.r,
                row.c1 if row.c1 is not None else "",
                row.c2 if row.c2 is not None else "",
                ";".join(map(str, row.z_values)),
                ";".join(map(str, row.n_values)),
                row.existence,
            ]
        )
    return buffer.getvalue()


# --- Diameter 3 ---
@validate_integer_params(z=1)
def multiplicity_feasible(z):
    """
    Eigenvalue multiplicities of a (1, z, 3) almost Moore mixed graph whose
    repeat matrix is its edge matrix: b = c = z + 1 from the trace of A, and
    the trace of A^2 then forces z (z + 1) (z + 2) / 3 = z + 1.
    """
    n = (1 + z) ** 3 + (1 + z) ** 2 - (1 + z)
    b = c = z + 1
    a = n - 1 - b - c
    feasible = z * (z + 1) * (z + 2) == 3 * (z + 1)
    return MultiplicityCheck(z=z, n=n, a=a, b=b, c=c, feasible=feasible)
