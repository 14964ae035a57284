import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import combinations

import numpy as np

from . import current_config
from .bounds import moore_bound
from .exceptions import MoorePreconditionError, MooreSizeLimitError, MooreValidationError
from .graphs import find_isomorphism, vertex_invariants
from .models import (
    VERDICT_ALMOST_MOORE,
    VERDICT_MOORE,
    CensusResult,
    MixedGraph,
    SearchStats,
)
from .verify import verify_almost_moore

logger = logging.getLogger(__name__)


# --- Undirected parts ---
def integer_partitions(n, smallest=3):
    """Partitions of n into parts >= smallest, parts in non-increasing order."""

    def parts(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), smallest - 1, -1):
            for rest in parts(remaining - part, part):
                yield (part,) + rest

    return list(parts(n, n))


def canonical_two_factor(partition):
    """Cycles of the given lengths on consecutive labels."""
    edges, start = [], 0
    for length in partition:
        for i in range(length):
            edges.append((start + i, start + (i + 1) % length))
        start += length
    return frozenset((min(e), max(e)) for e in edges)


def regular_edge_sets(n, r):
    """Every r-regular simple graph on labels 0..n-1, as edge sets."""
    results = []
    degree = [0] * n
    chosen = []

    def fill(v):
        while v < n and degree[v] == r:
            v += 1
        if v == n:
            results.append(frozenset(chosen))
            return
        need = r - degree[v]
        candidates = [w for w in range(v + 1, n) if degree[w] < r]
        for group in combinations(candidates, need):
            for w in group:
                degree[w] += 1
                chosen.append((v, w))
            degree[v] = r
            fill(v + 1)
            degree[v] -= need
            for w in group:
                degree[w] -= 1
                chosen.pop()

    if n * r % 2 == 0:
        fill(0)
    return results


def undirected_bases(n, r, symmetry_reduction=True):
    """
    Undirected parts to extend. With symmetry reduction only one edge set
    per isomorphism type is returned: the matching (01)(23)... for r = 1
    and one 2-factor per cycle-type partition for r = 2.
    """
    if r == 0:
        return [frozenset()]
    if n * r % 2:
        return []
    if symmetry_reduction and r == 1:
        return [frozenset((i, i + 1) for i in range(0, n, 2))]
    if symmetry_reduction and r == 2:
        return [canonical_two_factor(p) for p in integer_partitions(n)]
    return regular_edge_sets(n, r)


# --- Walk counts on partial graphs ---
def _walk_counts(n, edges, arcs, k):
    """
    Non-backtracking walk counts of length <= k-1 and <= k (int64). Walks
    only gain entries as arcs are added, so these bound the final counts.
    """
    darts = [(u, v, None) for u, v in arcs]
    for eid, (u, v) in enumerate(edges):
        darts.append((u, v, eid))
        darts.append((v, u, eid))
    d = len(darts)
    total = np.identity(n, dtype=np.int64)
    if d == 0:
        return total, total.copy()
    start = np.zeros((n, d), dtype=np.int64)
    head = np.zeros((d, n), dtype=np.int64)
    step = np.zeros((d, d), dtype=np.int64)
    leaving = [[] for _ in range(n)]
    for i, (u, v, _) in enumerate(darts):
        start[u, i] = 1
        head[i, v] = 1
        leaving[u].append(i)
    for i, (_, v, eid) in enumerate(darts):
        for j in leaving[v]:
            if eid is None or darts[j][2] != eid:
                step[i, j] = 1
    previous = total.copy()
    frontier = start
    for length in range(1, k + 1):
        if length == k:
            previous = total.copy()
        total = total + frontier @ head
        frontier = frontier @ step
    return previous, total


def _surplus_exceeded(counts, moore):
    if moore:
        return bool((counts > 1).any())
    if (counts > 2).any():
        return True
    twos = counts == 2
    return bool((twos.sum(axis=1) > 1).any() or (twos.sum(axis=0) > 1).any())


# --- Shared state ---
class _Collector:
    """Append-only list of survivors shared by the workers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items = []

    def add(self, graph, report):
        with self._lock:
            self._items.append((graph, report))

    @property
    def items(self):
        with self._lock:
            return list(self._items)


class _Budget:
    def __init__(self, nodes, seconds):
        self._lock = threading.Lock()
        self._remaining = nodes
        self.deadline = time.monotonic() + seconds if seconds is not None else None
        self.exhausted = False

    def spend(self):
        with self._lock:
            if self.exhausted:
                return False
            self._remaining -= 1
            if self._remaining < 0 or (
                self.deadline is not None and time.monotonic() > self.deadline
            ):
                self.exhausted = True
                return False
            return True


# --- Arc extension ---
class _ArcSearch:
    """Depth-first choice of z out-neighbours per vertex for one undirected part."""

    def __init__(self, spec, n, edges, budget, collector):
        self.spec = spec
        self.n = n
        self.edges = tuple(sorted(edges))
        self.edge_pairs = set(self.edges)
        self.budget = budget
        self.collector = collector
        self.stats = SearchStats()
        self.heads = [() for _ in range(n)]
        self.in_degree = [0] * n

    def candidates(self, v):
        z = self.spec.z
        return [
            w
            for w in range(self.n)
            if w != v
            and (min(v, w), max(v, w)) not in self.edge_pairs
            and self.in_degree[w] < z
            and v not in self.heads[w]
        ]

    def choices(self, v):
        options = list(combinations(self.candidates(v), self.spec.z))
        if not options:
            self.stats.prunes["degree"] += 1
        return options

    def _arcs(self):
        return [(u, w) for u in range(self.n) for w in self.heads[u]]

    def _assign(self, v, group):
        self.heads[v] = tuple(group)
        for w in group:
            self.in_degree[w] += 1

    def _unassign(self, v):
        for w in self.heads[v]:
            self.in_degree[w] -= 1
        self.heads[v] = ()

    def _dead_end(self, v):
        """Prune checks after vertices 0..v have their arcs."""
        spec = self.spec
        shorter, counts = _walk_counts(self.n, self.edges, self._arcs(), spec.k)
        if _surplus_exceeded(counts, spec.moore):
            self.stats.prunes["surplus"] += 1
            return True
        if v + 1 < self.n:
            open_reach = shorter[: v + 1, v + 1 :].sum(axis=1)
            missing = (counts[: v + 1] == 0).any(axis=1)
            if bool((missing & (open_reach == 0)).any()):
                self.stats.prunes["eccentricity"] += 1
                return True
        return False

    def run(self, first_group):
        self._assign(0, first_group)
        self._visit(0)
        self._unassign(0)
        return self.stats

    def _visit(self, v):
        if not self.budget.spend():
            return
        self.stats.nodes += 1
        if self.spec.prune and self._dead_end(v):
            return
        if v == self.n - 1:
            self._leaf()
            return
        for group in self.choices(v + 1):
            self._assign(v + 1, group)
            self._visit(v + 1)
            self._unassign(v + 1)
            if self.budget.exhausted:
                return

    def _leaf(self):
        spec = self.spec
        self.stats.leaves += 1
        graph = MixedGraph(n=self.n, edges=self.edges, arcs=self._arcs())
        report = verify_almost_moore(graph, spec.k, r=spec.r, z=spec.z)
        target = VERDICT_MOORE if spec.moore else VERDICT_ALMOST_MOORE
        if report.verdict != target:
            self.stats.prunes["verify"] += 1
            return
        self.stats.survivors += 1
        self.collector.add(graph, report)


# --- Census ---
def resolve_spec(spec):
    """Fill defaults from the configuration and check the supported envelope."""
    config = current_config()
    for name in ("r", "z", "k"):
        value = getattr(spec, name)
        if isinstance(value, bool) or not isinstance(value, int) or value < (1 if name == "k" else 0):
            raise MooreValidationError(f"Invalid census parameter {name} = {value!r}.")
    bound = moore_bound(spec.r, spec.z, spec.k)
    n = spec.n if spec.n is not None else (bound if spec.moore else bound - 1)
    if n < 1:
        raise MooreValidationError(f"Census order must be positive, got n = {n}.")
    if spec.k >= 3 and spec.r > 1 and not spec.allow_large_r:
        raise MoorePreconditionError(
            f"For k >= 3 the order is at most M(r,z,k) - r, so r = {spec.r} leaves no "
            "almost Moore graphs; pass allow_large_r to search anyway.",
            payload={"r": spec.r, "k": spec.k},
        )
    limits = {
        "n": (n, config.CENSUS_MAX_ORDER),
        "r": (spec.r, config.CENSUS_MAX_R),
        "z": (spec.z, config.CENSUS_MAX_Z),
    }
    over = {name: value for name, (value, cap) in limits.items() if value > cap}
    if over:
        raise MooreSizeLimitError(
            "Census is supported for n <= {}, r <= {}, z <= {}; got {}.".format(
                config.CENSUS_MAX_ORDER, config.CENSUS_MAX_R, config.CENSUS_MAX_Z, over
            ),
            payload={"over": over},
        )
    defaults = {
        "node_budget": config.SEARCH_NODE_BUDGET,
        "time_budget": config.SEARCH_TIME_BUDGET_SECONDS,
        "workers": config.SEARCH_WORKERS,
    }
    settings = {
        name: default if getattr(spec, name) is None else getattr(spec, name)
        for name, default in defaults.items()
    }
    if settings["node_budget"] < 0 or settings["time_budget"] < 0 or settings["workers"] < 1:
        raise MooreValidationError(
            "Budgets must be non-negative and workers at least 1.",
            payload=dict(settings),
        )
    return replace(spec, n=n, **settings)


def _class_key(graph, report):
    sigma = report.cycle_structure
    return (sigma, tuple(sorted(vertex_invariants(graph))))


def deduplicate(survivors, max_order=None):
    """
    Isomorphism classes of the survivors; each class is represented by its
    member with the smallest adjacency encoding, classes sorted by it.
    """
    buckets = {}
    for graph, report in survivors:
        classes = buckets.setdefault(_class_key(graph, report), [])
        for members in classes:
            if find_isomorphism(members[0][0], graph, max_order=max_order) is not None:
                members.append((graph, report))
                break
        else:
            classes.append([(graph, report)])
    chosen = [
        min(members, key=lambda item: item[0].encoding())
        for classes in buckets.values()
        for members in classes
    ]
    chosen.sort(key=lambda item: item[0].encoding())
    return chosen


def census(spec):
    """All (r, z, k) almost Moore (or Moore) mixed graphs of order n, up to isomorphism."""
    spec = resolve_spec(spec)
    n = spec.n
    started = time.monotonic()
    stats = SearchStats()
    notes = []
    if not (spec.k <= 2 or (spec.r == 1 and spec.z == 1)) and spec.r > 0:
        notes.append("total regularity is imposed by definition for these parameters")

    bases = undirected_bases(n, spec.r, spec.symmetry_reduction)
    stats.bases = len(bases)
    if not bases:
        notes.append(f"no {spec.r}-regular undirected part exists on {n} vertices")

    budget = _Budget(spec.node_budget, spec.time_budget)
    collector = _Collector()
    tasks = []
    for edges in bases:
        splitter = _ArcSearch(spec, n, edges, budget, collector)
        for group in splitter.choices(0):
            tasks.append((edges, group))
        stats.merge(splitter.stats)

    def run_task(task):
        edges, group = task
        return _ArcSearch(spec, n, edges, budget, collector).run(group)

    logger.info(
        f"Census (r,z,k)=({spec.r},{spec.z},{spec.k}) n={n}: {len(bases)} undirected part(s), "
        f"{len(tasks)} task(s), {spec.workers} worker(s)."
    )
    if spec.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as executor:
            for task_stats in executor.map(run_task, tasks):
                stats.merge(task_stats)
    else:
        for task in tasks:
            stats.merge(run_task(task))

    chosen = deduplicate(collector.items, max_order=max(n, current_config().ISOMORPHISM_MAX_ORDER))
    stats.elapsed = time.monotonic() - started
    exhaustive = not budget.exhausted
    if not exhaustive:
        logger.warning("Search budget exhausted; the census is partial.")
        notes.append("search budget exhausted: result is not exhaustive")
    result = CensusResult(
        spec=spec,
        n=n,
        representatives=[graph for graph, _ in chosen],
        reports=[report for _, report in chosen],
        stats=stats,
        exhaustive=exhaustive,
        notes=notes,
    )
    logger.info(f"Census finished: {result!r} in {stats.elapsed:.2f}s.")
    return result


def verify_census_against_known(result, knowns):
    """True iff the census and the known graphs agree up to isomorphism, both ways."""
    found = result.representatives if isinstance(result, CensusResult) else list(result)
    knowns = list(knowns)
    if len(found) != len(knowns):
        return False

    def covered(graphs, others):
        return all(
            any(g.n == h.n and find_isomorphism(g, h) is not None for h in others)
            for g in graphs
        )

    return covered(found, knowns) and covered(knowns, found)