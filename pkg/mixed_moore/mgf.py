"""
MGF: a line-oriented text format for mixed graphs.

    # comment
    n 10            (optionally: n 10 parallel)
    E 0 1           edge {0,1}
    A 0 2           arc 0 -> 2
"""
import logging
from pathlib import Path

from .exceptions import DigonViolationError, MGFParseError, MooreError, MooreInputError
from .models import MixedGraph

logger = logging.getLogger(__name__)


def _strip_comment(line):
    return line.split("#", 1)[0].strip()


def _vertex(token, n, lineno):
    try:
        v = int(token)
    except ValueError:
        raise MGFParseError(f"'{token}' is not a vertex index.", line=lineno)
    if not 0 <= v < n:
        raise MGFParseError(f"vertex {v} out of range 0..{n - 1}.", line=lineno)
    return v


def parse_mgf(text, promote_digons=False, allow_parallel_arcs=False):
    """
    Parse MGF text into a validated MixedGraph.

    Opposite arcs are rejected unless ``promote_digons`` is set, in which case
    each such pair becomes a single edge.
    """
    if hasattr(text, "read"):
        text = text.read()

    n = None
    edges, arcs = [], []
    edge_lines = {}
    header_line = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        tag = tokens[0]

        if n is None:
            if tag != "n" or len(tokens) not in (2, 3):
                raise MGFParseError("expected header 'n <N>' first.", line=lineno)
            try:
                n = int(tokens[1])
            except ValueError:
                raise MGFParseError(f"'{tokens[1]}' is not a vertex count.", line=lineno)
            if n < 0:
                raise MGFParseError("vertex count must be non-negative.", line=lineno)
            if len(tokens) == 3:
                if tokens[2] != "parallel":
                    raise MGFParseError(f"unknown header flag '{tokens[2]}'.", line=lineno)
                allow_parallel_arcs = True
            header_line = lineno
            continue

        if tag not in ("E", "A") or len(tokens) != 3:
            raise MGFParseError(f"malformed line '{raw.strip()}'.", line=lineno)
        u = _vertex(tokens[1], n, lineno)
        v = _vertex(tokens[2], n, lineno)
        if u == v:
            raise MGFParseError(f"self-loop at vertex {u}.", line=lineno)

        if tag == "E":
            key = (min(u, v), max(u, v))
            if key in edge_lines:
                raise MGFParseError(
                    f"duplicate edge {{{u},{v}}} (first on line {edge_lines[key]}).",
                    line=lineno,
                )
            edge_lines[key] = lineno
            edges.append((u, v))
        else:
            arcs.append((u, v))

    if n is None:
        raise MGFParseError("missing header 'n <N>'.", line=header_line or 1)

    try:
        graph = MixedGraph.build(
            n,
            edges=edges,
            arcs=arcs,
            allow_parallel_arcs=allow_parallel_arcs,
            promote_digons=promote_digons,
        )
    except DigonViolationError:
        raise
    except MooreInputError as e:
        raise MGFParseError(e.message, payload=e.payload)

    logger.debug(f"Parsed MGF graph {graph!r}.")
    return graph


def read_mgf(path, **options):
    """Read an MGF file ('-' is not handled here; the CLI passes stdin text)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MooreInputError(f"File not found: {path}", payload={"path": str(path)})
    except OSError as e:
        raise MooreInputError(f"Could not read {path}: {e}", payload={"path": str(path)})
    try:
        return parse_mgf(text, **options)
    except MooreError as e:
        e.payload = dict(e.payload or (), path=str(path))
        raise


def to_mgf(graph, comment=None):
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n {graph.n}" + (" parallel" if graph.allow_parallel_arcs else ""))
    lines.extend(f"E {u} {v}" for u, v in sorted(graph.edges))
    lines.extend(f"A {u} {v}" for u, v in graph.arcs)
    return "\n".join(lines) + "\n"


def to_dot(graph, name="mixed", labels=None):
    """DOT digraph: edges drawn without arrowheads, arcs as directed lines."""

    def node(v):
        return f'"{labels[v]}"' if labels else str(v)

    lines = [f"digraph {name} {{"]
    for v in range(graph.n):
        lines.append(f"  {node(v)};")
    for u, v in sorted(graph.edges):
        lines.append(f"  {node(u)} -> {node(v)} [dir=none];")
    for u, v in graph.arcs:
        lines.append(f"  {node(u)} -> {node(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
