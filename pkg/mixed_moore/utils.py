import inspect
import logging
from functools import wraps

from .exceptions import MooreValidationError

logger = logging.getLogger(__name__)


#  Decorators


def validate_integer_params(**minimums):
    """
    Check that the named parameters are integers no smaller than the given
    minimum before the wrapped function runs, e.g.
    ``@validate_integer_params(r=0, z=0, k=1)``.
    """

    def decorator(f):
        signature = inspect.signature(f)

        @wraps(f)
        def decorated_function(*args, **kwargs):
            bound = signature.bind(*args, **kwargs)
            bound.apply_defaults()
            bad = {}
            for name, minimum in minimums.items():
                value = bound.arguments.get(name)
                if isinstance(value, bool) or not isinstance(value, int):
                    bad[name] = f"expected an integer, got {value!r}"
                elif value < minimum:
                    bad[name] = f"must be >= {minimum}, got {value}"
            if bad:
                logger.debug(f"Rejected call to {f.__name__}: {bad}")
                raise MooreValidationError(
                    f"Invalid parameters for {f.__name__}: "
                    + ", ".join(f"{k} {v}" for k, v in bad.items()),
                    payload={"invalid": bad},
                )
            return f(*args, **kwargs)

        return decorated_function

    return decorator


def require_degree(f):
    """Reject r = z = 0, which has no Moore tree beyond the root."""

    signature = inspect.signature(f)

    @wraps(f)
    def wrapper(*args, **kwargs):
        bound = signature.bind(*args, **kwargs)
        if bound.arguments.get("r", 0) + bound.arguments.get("z", 0) < 1:
            raise MooreValidationError("At least one of r, z must be positive.")
        return f(*args, **kwargs)

    return wrapper


#  Output helpers


def format_kv(data, prefix=""):
    """Flatten a (nested) dict into ``key = value`` lines, in insertion order."""
    lines = []
    for key in data:
        value = data[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(format_kv(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple, set, frozenset)):
            lines.append(f"{name} = {' '.join(str(v) for v in value)}")
        else:
            lines.append(f"{name} = {value}")
    return lines


def format_columns(header, rows):
    """Left-aligned plain-text table."""
    table = [list(map(str, header))] + [list(map(str, row)) for row in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    return [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in table
    ]
