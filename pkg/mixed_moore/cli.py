import json
import logging
from functools import wraps

import click

from . import create_app
from .bounds import moore_bound_closed, moore_plan
from .constructions import ZOO, algebra_membership, family, kautz_words, lemma_rzp_suite, line_digraph, zoo_graph
from .exceptions import MooreError, MooreValidationError
from .feasibility import format_table1, multiplicity_feasible, table1, table1_csv
from .graphs import degree_report
from .mgf import parse_mgf, read_mgf, to_dot, to_mgf
from .models import VERDICT_NOT_ALMOST_MOORE, SearchSpec
from .search import census as run_census
from .spectra import char_poly, factorize, matches_pattern, trace_identities
from .utils import format_kv
from .verify import verify_almost_moore

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_ALMOST_MOORE = 1

DEFAULT_R_LIST = "4,6,8,10,12,14,16,18,20,22"


def handle_errors(f):
    """Turn library errors into a message on stderr and the error's exit code."""

    @wraps(f)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return f(*args, **kwargs)
        except MooreError as error:
            logger.debug(f"{type(error).__name__}: {error.to_dict()}")
            if ctx.params.get("fmt") == "json":
                click.echo(json.dumps(error.to_dict(), sort_keys=True), err=True)
            else:
                click.echo(f"Error: {error.message}", err=True)
            ctx.exit(error.exit_code)

    return wrapper


def _load_graph(path, **options):
    if path == "-":
        return parse_mgf(click.get_text_stream("stdin").read(), **options)
    return read_mgf(path, **options)


def _int_list(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise MooreValidationError(f"Expected a comma-separated list of integers, got '{text}'.")


def _cycle_structure_text(structure):
    if structure is None:
        return None
    parts = [f"m{i + 1}={m}" for i, m in enumerate(structure) if m]
    return " ".join(parts) if parts else "-"


def _report_lines(report):
    summary = {
        "n": report.n,
        "r": report.r,
        "z": report.z,
        "k": report.k,
        "view": "digraph" if report.as_digraph else "mixed",
        "diameter": report.to_dict()["diameter"],
        "moore_bound": report.moore_bound,
        "verdict": report.verdict,
        "failed_stage": report.failed_stage,
        "reason": report.reason,
        "sigma": str(report.repeat) if report.repeat else None,
        "cycle_structure": _cycle_structure_text(report.cycle_structure),
        "selfrepeats": sorted(report.selfrepeats) if report.repeat else None,
        "sigma_is_automorphism": report.sigma_is_automorphism,
    }
    lines = format_kv({key: value for key, value in summary.items() if value is not None})
    lines.extend(f"equation {name} = {'holds' if held else 'fails'}" for name, held in report.equations_checked)
    lines.extend(f"note: {note}" for note in report.notes)
    return lines


@click.group()
@click.option(
    "--config",
    "config_name",
    envvar="MIXED_MOORE_CONFIG",
    default="default",
    show_default=True,
    help="Configuration name (development, testing, production, default).",
)
@click.pass_context
def cli(ctx, config_name):
    """Moore bounds, verification, constructions and censuses for mixed graphs."""
    ctx.obj = create_app(config_name)


@cli.command()
@click.option("-r", "r", type=int, required=True, help="Undirected degree.")
@click.option("-z", "z", type=int, required=True, help="Directed out/in-degree.")
@click.option("-k", "k", type=int, required=True, help="Diameter.")
@click.option("--closed-form", is_flag=True, help="Also evaluate the closed form in floating point.")
@click.option("--layers", is_flag=True, help="Show the Moore tree layer counts.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@handle_errors
def bound(r, z, k, closed_form, layers, fmt):
    """Print the Moore bound M(r, z, k)."""
    plan = moore_plan(r, z, k)
    if fmt == "json":
        data = plan.to_dict()
        if closed_form:
            data["closed_form"] = moore_bound_closed(r, z, k)
        click.echo(json.dumps(data, indent=2))
        return
    click.echo(str(plan.moore_bound))
    if layers:
        for depth, (edges, arcs) in enumerate(plan.layers, start=1):
            click.echo(f"layer {depth}: {edges} by edge, {arcs} by arc")
    if closed_form:
        click.echo(f"closed_form = {moore_bound_closed(r, z, k):.6f}")


@cli.command()
@click.option("--r-list", default=DEFAULT_R_LIST, show_default=True, help="Comma-separated even r > 2.")
@click.option("--z-max", type=int, default=20, show_default=True, help="Largest z to test.")
@click.option("--entries", type=int, default=4, show_default=True, help="Admissible z values shown per row (0: all).")
@click.option("--diameter", type=click.Choice(["2", "3"]), default="2", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True)
@handle_errors
def feasible(r_list, z_max, entries, diameter, fmt):
    """Feasibility screen for almost Moore mixed graphs of diameter 2 (or 3)."""
    if diameter == "3":
        checks = [multiplicity_feasible(z) for z in range(1, z_max + 1)]
        if fmt == "json":
            click.echo(json.dumps([check.to_dict() for check in checks], indent=2))
            return
        for check in checks:
            click.echo(
                f"z={check.z} n={check.n} a={check.a} b={check.b} c={check.c} "
                f"{'feasible' if check.feasible else 'infeasible'}"
            )
        return
    rows = table1(_int_list(r_list), z_max, max_entries=entries or None)
    if fmt == "csv":
        click.echo(table1_csv(rows), nl=False)
    elif fmt == "json":
        click.echo(json.dumps([row.to_dict() for row in rows], indent=2))
    else:
        for line in format_table1(rows):
            click.echo(line)


@cli.command()
@click.argument("path")
@click.option("-k", "k", type=int, required=True, help="Diameter to verify against.")
@click.option("--promote-digons", is_flag=True, help="Read opposite arc pairs as edges.")
@click.option("--as-digraph", is_flag=True, help="Treat every edge as a pair of opposite arcs.")
@click.option("--format", "fmt", type=click.Choice(["text", "kv", "json"]), default="text", show_default=True)
@click.pass_context
@handle_errors
def verify(ctx, path, k, promote_digons, as_digraph, fmt):
    """Verify that the graph in PATH ('-' for stdin) is an almost Moore mixed graph."""
    graph = _load_graph(path, promote_digons=promote_digons)
    report = verify_almost_moore(graph, k, as_digraph=as_digraph)
    if fmt == "json":
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    elif fmt == "kv":
        for line in format_kv(report.to_dict()):
            click.echo(line)
    else:
        for line in _report_lines(report):
            click.echo(line)
    ctx.exit(EXIT_NOT_ALMOST_MOORE if report.verdict == VERDICT_NOT_ALMOST_MOORE else EXIT_OK)


@cli.command()
@click.argument("name", required=False)
@click.argument("params", nargs=-1)
@click.option("--dot", is_flag=True, help="Emit DOT instead of MGF.")
@click.option("--list", "list_zoo", is_flag=True, help="List the documented constructions.")
@handle_errors
def construct(name, params, dot, list_zoo):
    """Write the named construction as MGF (or DOT)."""
    if list_zoo or name is None:
        for entry in ZOO:
            view = " digraph" if entry.as_digraph else ""
            click.echo(f"{entry.label}: (r,z,k)=({entry.r},{entry.z},{entry.k}){view} {entry.verdict}")
        return
    label = " ".join([name, *params])
    labels = None
    if name == "line" and params:
        graph, darts = line_digraph(family(params[0], params[1:]))
        labels = [darts.label(i) for i in range(graph.n)]
    else:
        graph = family(name, params)
    if dot:
        if name == "kautz":
            d, *rest = [int(p) for p in params]
            labels = kautz_words(d, *rest)
        click.echo(to_dot(graph, name=name, labels=labels), nl=False)
    else:
        click.echo(to_mgf(graph, comment=label), nl=False)


@cli.command()
@click.argument("path")
@click.option("--factor", is_flag=True, help="Always print the factored form.")
@handle_errors
def spectrum(path, factor):
    """Exact characteristic polynomial of the adjacency matrix of PATH."""
    graph = _load_graph(path)
    poly = char_poly(graph.adjacency)
    click.echo(f"charpoly = {poly}")
    degrees = degree_report(graph)
    pattern = degrees.totally_regular and degrees.r == 1 and bool(degrees.z) and matches_pattern(graph, degrees.z)
    if pattern:
        click.echo(f"pattern = (x-(1+z)) x^a (x^2+x-1)^(z+1) with z = {degrees.z}")
    if pattern or factor:
        click.echo(f"factored = {factorize(poly)}")
    for line in format_kv(trace_identities(graph)):
        click.echo(line)


@cli.command()
@click.option("-r", "r", type=int, required=True)
@click.option("-z", "z", type=int, required=True)
@click.option("-k", "k", type=int, required=True)
@click.option("-n", "n", type=int, default=None, help="Order (default: M(r,z,k) - 1).")
@click.option("--moore", is_flag=True, help="Search for Moore graphs of order M(r,z,k).")
@click.option("--workers", type=int, default=None, help="Parallel workers (default from config).")
@click.option("--no-symmetry", is_flag=True, help="Enumerate every undirected part, not one per type.")
@click.option("--no-prune", is_flag=True, help="Disable walk-count and eccentricity pruning.")
@click.option("--node-budget", type=int, default=None)
@click.option("--time-budget", type=float, default=None, help="Seconds.")
@click.option("--allow-large-r", is_flag=True, help="Search k >= 3 with r > 1 anyway.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@handle_errors
def census(r, z, k, n, moore, workers, no_symmetry, no_prune, node_budget, time_budget, allow_large_r, fmt):
    """Exhaustive search for (almost) Moore mixed graphs, up to isomorphism."""
    spec = SearchSpec(
        r=r,
        z=z,
        k=k,
        n=n,
        moore=moore,
        symmetry_reduction=not no_symmetry,
        prune=not no_prune,
        node_budget=node_budget,
        time_budget=time_budget,
        workers=workers,
        allow_large_r=allow_large_r,
    )
    result = run_census(spec)
    if fmt == "json":
        data = result.to_dict()
        data["representatives"] = [
            {"graph": graph.to_dict(), "report": report.to_dict()}
            for graph, report in zip(result.representatives, result.reports)
        ]
        click.echo(json.dumps(data, indent=2))
        return
    click.echo(f"count = {result.count}")
    click.echo(f"exhaustive = {str(result.exhaustive).lower()}")
    for line in format_kv(result.stats.to_dict(), prefix="stats."):
        click.echo(line)
    for note in result.notes:
        click.echo(f"note: {note}")
    for index, (graph, report) in enumerate(zip(result.representatives, result.reports), start=1):
        comment = f"representative {index}"
        if report.repeat is not None:
            comment += f": sigma = {report.repeat}"
        click.echo(to_mgf(graph, comment=comment), nl=False)


@cli.command()
@click.pass_context
@handle_errors
def identities(ctx):
    """Check the R/Z/P identities and algebra membership of the H family."""
    checks = {**lemma_rzp_suite(), **algebra_membership()}
    for name, held in checks.items():
        click.echo(f"{name} = {'holds' if held else 'fails'}")
    ctx.exit(EXIT_OK if all(checks.values()) else EXIT_NOT_ALMOST_MOORE)


@cli.command()
@click.pass_context
@handle_errors
def zoo(ctx):
    """Verify every documented construction at its (r, z, k)."""
    all_ok = True
    for entry in ZOO:
        report = verify_almost_moore(zoo_graph(entry), entry.k, as_digraph=entry.as_digraph)
        ok = report.verdict == entry.verdict and (report.r, report.z) == (entry.r, entry.z)
        all_ok &= ok
        click.echo(f"{entry.label}: {report.verdict} ({'ok' if ok else 'expected ' + entry.verdict})")
    ctx.exit(EXIT_OK if all_ok else EXIT_NOT_ALMOST_MOORE)


def run(argv=None):
    """Entry point returning the exit status instead of calling sys.exit."""
    try:
        status = cli.main(args=argv, prog_name="mixed-moore", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return status or EXIT_OK
