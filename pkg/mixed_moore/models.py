import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import networkx as nx
import numpy as np

from .exceptions import DigonViolationError, MooreInputError, MooreValidationError


class IntMatrix:
    """Dense square matrix of arbitrary-precision integers (numpy object dtype)."""

    __slots__ = ("_data",)

    def __init__(self, rows):
        data = np.array(rows, dtype=object)
        if data.size == 0:
            data = np.empty((0, 0), dtype=object)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise MooreValidationError(
                f"IntMatrix must be square, got shape {data.shape}."
            )
        data = np.vectorize(int, otypes=[object])(data) if data.size else data
        data.flags.writeable = False
        self._data = data

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, n), dtype=object))

    @classmethod
    def identity(cls, n):
        return cls(np.identity(n, dtype=np.int64))

    @classmethod
    def ones(cls, n):
        return cls(np.ones((n, n), dtype=np.int64))

    @property
    def order(self):
        return self._data.shape[0]

    @property
    def data(self):
        return self._data

    @property
    def T(self):
        return IntMatrix(self._data.T)

    def __getitem__(self, key):
        return self._data[key]

    def __add__(self, other):
        return IntMatrix(self._data + _unwrap(other))

    def __sub__(self, other):
        return IntMatrix(self._data - _unwrap(other))

    def __neg__(self):
        return IntMatrix(-self._data)

    def __mul__(self, scalar):
        return IntMatrix(self._data * int(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.order != other.order:
            raise MooreValidationError(
                f"Cannot multiply matrices of orders {self.order} and {other.order}."
            )
        if self.order == 0:
            return IntMatrix.zeros(0)
        return IntMatrix(self._data.dot(other._data))

    def __pow__(self, exponent):
        result = IntMatrix.identity(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.order == other.order and bool(np.all(self._data == other._data))

    def __hash__(self):
        return hash((self.order, tuple(self._data.flatten())))

    def trace(self):
        return int(sum(self._data[i, i] for i in range(self.order)))

    def row_sums(self):
        return tuple(int(sum(row)) for row in self._data)

    def is_symmetric(self):
        return bool(np.all(self._data == self._data.T))

    def is_zero_one(self):
        return bool(np.all((self._data == 0) | (self._data == 1)))

    def is_nonnegative(self):
        return bool(np.all(self._data >= 0))

    def is_permutation_matrix(self):
        if not self.is_zero_one():
            return False
        ones = np.ones(self.order, dtype=object)
        return bool(
            np.all(self._data.sum(axis=0) == ones)
            and np.all(self._data.sum(axis=1) == ones)
        )

    def as_permutation(self):
        if not self.is_permutation_matrix():
            raise MooreValidationError("Matrix is not a permutation matrix.")
        return Permutation(
            tuple(int(np.flatnonzero(row)[0]) for row in self._data)
        )

    def commutes_with(self, other):
        return self @ other == other @ self

    def tolist(self):
        return [[int(x) for x in row] for row in self._data]

    def __repr__(self):
        return f"<IntMatrix order={self.order}>"


def _unwrap(value):
    return value._data if isinstance(value, IntMatrix) else value


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise MooreValidationError(
                f"Images {images} do not describe a bijection on {{0..{len(images) - 1}}}."
            )

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles, n):
        images = list(range(n))
        seen = set()
        for cycle in cycles:
            cycle = [int(v) for v in cycle]
            for i, v in enumerate(cycle):
                if v in seen or not 0 <= v < n:
                    raise MooreValidationError(f"Invalid cycle entry {v} for n={n}.")
                seen.add(v)
                images[v] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text, n):
        """Parse cycle notation such as ``(01)(23)(4675)`` or ``(0 1)(10 11)``."""
        cycles = []
        for body in _CYCLE_RE.findall(text):
            body = body.strip()
            if not body:
                continue
            if re.search(r"[\s,]", body):
                cycles.append([int(tok) for tok in re.split(r"[\s,]+", body) if tok])
            else:
                cycles.append([int(ch) for ch in body])
        return cls.from_cycles(cycles, n)

    @property
    def n(self):
        return len(self.images)

    def __call__(self, v):
        return self.images[v]

    @cached_property
    def cycles(self):
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            v = self.images[start]
            while v != start:
                cycle.append(v)
                seen.add(v)
                v = self.images[v]
            out.append(tuple(cycle))
        return tuple(out)

    @cached_property
    def cycle_structure(self):
        counts = Counter(len(c) for c in self.cycles)
        return tuple(counts.get(i, 0) for i in range(1, self.n + 1))

    @property
    def fixed_points(self):
        return frozenset(v for v in range(self.n) if self.images[v] == v)

    def is_identity(self):
        return all(v == img for v, img in enumerate(self.images))

    def is_involution(self):
        return all(self.images[self.images[v]] == v for v in range(self.n))

    def inverse(self):
        inv = [0] * self.n
        for v, img in enumerate(self.images):
            inv[img] = v
        return Permutation(tuple(inv))

    def matrix(self):
        data = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in enumerate(self.images):
            data[i, j] = 1
        return IntMatrix(data)

    def __str__(self):
        moving = [c for c in self.cycles if len(c) > 1]
        if not moving:
            return "()"
        sep = "" if self.n <= 10 else " "
        return "".join("(" + sep.join(str(v) for v in c) + ")" for c in moving)

    def to_dict(self):
        return {
            "images": list(self.images),
            "cycles": str(self),
            "cycle_structure": {
                i + 1: m for i, m in enumerate(self.cycle_structure) if m
            },
        }


@dataclass(frozen=True)
class MixedGraph:
    n: int
    edges: frozenset = frozenset()  # any iterable of pairs; normalised to (min, max)
    arcs: tuple = ()
    allow_parallel_arcs: bool = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise MooreValidationError(f"Vertex count must be a non-negative integer, got {self.n!r}.")

        edge_list = [tuple(int(x) for x in e) for e in self.edges]
        arc_list = [tuple(int(x) for x in a) for a in self.arcs]

        normalised_edges = set()
        for u, v in edge_list:
            self._check_pair(u, v, "Edge")
            key = (min(u, v), max(u, v))
            if key in normalised_edges:
                raise MooreInputError(f"Duplicate edge {{{u},{v}}}.")
            normalised_edges.add(key)

        arc_counts = Counter()
        for u, v in arc_list:
            self._check_pair(u, v, "Arc")
            arc_counts[(u, v)] += 1

        for (u, v), count in arc_counts.items():
            if (v, u) in arc_counts:
                raise DigonViolationError(
                    f"Arcs {u}->{v} and {v}->{u} form a digon; give it as edge {u} {v}.",
                    payload={"digon": [u, v]},
                )
            if self.allow_parallel_arcs:
                continue
            if count > 1:
                raise MooreInputError(
                    f"Parallel arcs {u}->{v} require allow_parallel_arcs."
                )
            if (min(u, v), max(u, v)) in normalised_edges:
                raise MooreInputError(
                    f"Edge {{{u},{v}}} and arc {u}->{v} on the same pair require allow_parallel_arcs."
                )

        object.__setattr__(self, "edges", frozenset(normalised_edges))
        object.__setattr__(self, "arcs", tuple(sorted(arc_list)))

    def _check_pair(self, u, v, kind):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise MooreInputError(
                f"{kind} ({u},{v}) has a vertex outside 0..{self.n - 1}."
            )
        if u == v:
            raise MooreInputError(f"{kind} ({u},{v}) is a self-loop.")

    @classmethod
    def build(cls, n, edges=(), arcs=(), allow_parallel_arcs=False, promote_digons=False):
        """Construct a graph, optionally turning opposite arc pairs into edges."""
        edges = list(edges)
        arcs = list(arcs)
        if promote_digons:
            remaining = Counter(tuple(a) for a in arcs)
            for (u, v) in list(remaining):
                while remaining[(u, v)] > 0 and remaining[(v, u)] > 0:
                    remaining[(u, v)] -= 1
                    remaining[(v, u)] -= 1
                    edges.append((u, v))
            arcs = [a for a, c in sorted(remaining.items()) for _ in range(c)]
        return cls(
            n=n,
            edges=tuple(edges),
            arcs=tuple(arcs),
            allow_parallel_arcs=allow_parallel_arcs,
        )

    @classmethod
    def from_adjacency(cls, matrix, allow_parallel_arcs=False):
        """
        Canonical decomposition of a non-negative integer matrix: each pair
        contributes min(a_uv, a_vu) edges and the remainder as arcs.
        """
        data = matrix.data if isinstance(matrix, IntMatrix) else np.asarray(matrix)
        n = data.shape[0]
        edges, arcs = [], []
        for u in range(n):
            if data[u, u]:
                raise MooreInputError(f"Diagonal entry at vertex {u} is a self-loop.")
            for v in range(n):
                if u == v:
                    continue
                both = min(int(data[u, v]), int(data[v, u]))
                if both > 1:
                    raise MooreInputError(
                        f"Pair {{{u},{v}}} would need {both} parallel edges."
                    )
                if both and u < v:
                    edges.append((u, v))
                arcs.extend([(u, v)] * (int(data[u, v]) - both))
        return cls(n=n, edges=edges, arcs=tuple(arcs), allow_parallel_arcs=allow_parallel_arcs)

    @cached_property
    def _edge_neighbors(self):
        nbrs = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def _arc_heads(self):
        heads = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            heads[u].append(v)
        return tuple(tuple(x) for x in heads)

    def edge_neighbors(self, u):
        return self._edge_neighbors[u]

    def arc_heads(self, u):
        return self._arc_heads[u]

    def successors(self, u):
        return self._edge_neighbors[u] + self._arc_heads[u]

    @property
    def has_parallel_arcs(self):
        if len(set(self.arcs)) != len(self.arcs):
            return True
        return any((min(u, v), max(u, v)) in self.edges for u, v in self.arcs)

    @cached_property
    def undirected_part(self):
        data = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            data[u, v] = data[v, u] = 1
        return IntMatrix(data)

    @cached_property
    def directed_part(self):
        data = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.arcs:
            data[u, v] += 1
        return IntMatrix(data)

    @cached_property
    def adjacency(self):
        return self.undirected_part + self.directed_part

    def relabel(self, perm):
        """Image of the graph under the vertex map ``v -> perm(v)``."""
        return MixedGraph(
            n=self.n,
            edges=frozenset((perm(u), perm(v)) for u, v in self.edges),
            arcs=tuple((perm(u), perm(v)) for u, v in self.arcs),
            allow_parallel_arcs=self.allow_parallel_arcs,
        )

    def to_networkx(self):
        """Weighted digraph on the support of A; weight = multiplicity a_uv."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        data = self.adjacency.data
        for u in range(self.n):
            for v in range(self.n):
                if data[u, v]:
                    g.add_edge(u, v, weight=int(data[u, v]))
        return g

    def encoding(self):
        """Row-major adjacency tuple; used for deterministic ordering."""
        return tuple(int(x) for x in self.adjacency.data.flatten())

    def to_dict(self):
        return {
            "n": self.n,
            "edges": [list(e) for e in sorted(self.edges)],
            "arcs": [list(a) for a in self.arcs],
            "allow_parallel_arcs": self.allow_parallel_arcs,
        }

    def __repr__(self):
        return (
            f"<MixedGraph n={self.n} edges={len(self.edges)} arcs={len(self.arcs)}"
            f"{' parallel' if self.allow_parallel_arcs else ''}>"
        )


@dataclass(frozen=True)
class DegreeReport:
    undirected: tuple
    out_degree: tuple
    in_degree: tuple

    @property
    def totally_regular(self):
        return (
            len(set(self.undirected)) <= 1
            and len(set(self.out_degree)) <= 1
            and set(self.out_degree) == set(self.in_degree)
        )

    @property
    def r(self):
        return self.undirected[0] if self.totally_regular and self.undirected else None

    @property
    def z(self):
        return self.out_degree[0] if self.totally_regular and self.out_degree else None

    def to_dict(self):
        return {
            "totally_regular": self.totally_regular,
            "r": self.r,
            "z": self.z,
            "undirected": list(self.undirected),
            "out_degree": list(self.out_degree),
            "in_degree": list(self.in_degree),
        }


UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class DistanceData:
    dist: np.ndarray  # int64, UNREACHABLE marks infinite distance
    connected: bool

    @property
    def n(self):
        return self.dist.shape[0]

    @property
    def diameter(self):
        if not self.connected:
            return math.inf
        return int(self.dist.max()) if self.n else 0

    @property
    def average_distance(self):
        """Exact (1/n^2) * sum of all distances, or None when disconnected."""
        if not self.connected or not self.n:
            return None
        return Fraction(int(self.dist.sum()), self.n * self.n)

    def layer(self, i):
        """The i-distance matrix A_i."""
        return IntMatrix((self.dist == i).astype(np.int64))

    def layers(self):
        if not self.connected:
            raise MooreValidationError("Distance layers need a finite diameter.")
        return tuple(self.layer(i) for i in range(self.diameter + 1))

    def within(self, k):
        return IntMatrix(((self.dist >= 0) & (self.dist <= k)).astype(np.int64))


@dataclass(frozen=True)
class MoorePlan:
    r: int
    z: int
    k: int
    layers: tuple
    moore_bound: int

    @property
    def almost_moore_order(self):
        return self.moore_bound - 1

    def to_dict(self):
        return {
            "r": self.r,
            "z": self.z,
            "k": self.k,
            "layers": [list(layer) for layer in self.layers],
            "moore_bound": self.moore_bound,
        }


@dataclass(frozen=True)
class ClosedFormParams:
    A: float
    B: float
    v: float
    u1: float
    u2: float


@dataclass(frozen=True)
class FeasibilityWitness:
    r: int
    z: int
    branch: Optional[str]
    c: Optional[int]
    n: Optional[int]

    @property
    def admissible(self):
        return self.branch is not None


@dataclass(frozen=True)
class Table1Row:
    r: int
    c1: Optional[int]
    c2: Optional[int]
    z_values: tuple
    n_values: tuple

    @property
    def existence(self):
        return "Unknown" if self.z_values else "Non-existent"

    def to_dict(self):
        return {
            "r": self.r,
            "c1": self.c1,
            "c2": self.c2,
            "z": list(self.z_values),
            "n": list(self.n_values),
            "existence": self.existence,
        }


@dataclass(frozen=True)
class MultiplicityCheck:
    z: int
    n: int
    a: int
    b: int
    c: int
    feasible: bool

    def to_dict(self):
        return {
            "z": self.z,
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "feasible": self.feasible,
        }


@dataclass(frozen=True, eq=False)
class EquationCheck:
    name: str
    held: bool
    P: Optional[IntMatrix]
    details: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.held
        yield self.P


VERDICT_MOORE = "moore"
VERDICT_ALMOST_MOORE = "almost_moore"
VERDICT_NOT_ALMOST_MOORE = "not_almost_moore"


@dataclass
class AlmostMooreReport:
    n: int
    k: int
    degrees: DegreeReport
    r: Optional[int] = None
    z: Optional[int] = None
    diameter: float = math.inf
    moore_bound: Optional[int] = None
    order_ok: bool = False
    verdict: str = VERDICT_NOT_ALMOST_MOORE
    failed_stage: Optional[str] = None
    failed_row: Optional[int] = None
    reason: Optional[str] = None
    repeat: Optional[Permutation] = None
    sigma_is_automorphism: Optional[bool] = None
    equations_checked: list = field(default_factory=list)
    extrapolated: bool = False
    as_digraph: bool = False
    notes: list = field(default_factory=list)

    @property
    def cycle_structure(self):
        return self.repeat.cycle_structure if self.repeat else None

    @property
    def selfrepeats(self):
        return self.repeat.fixed_points if self.repeat else frozenset()

    @property
    def is_almost_moore(self):
        return self.verdict == VERDICT_ALMOST_MOORE

    def to_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "z": self.z,
            "as_digraph": self.as_digraph,
            "degrees": self.degrees.to_dict(),
            "diameter": self.diameter if self.diameter != math.inf else "inf",
            "moore_bound": self.moore_bound,
            "order_ok": self.order_ok,
            "verdict": self.verdict,
            "failed_stage": self.failed_stage,
            "failed_row": self.failed_row,
            "reason": self.reason,
            "sigma": str(self.repeat) if self.repeat else None,
            "repeat": self.repeat.to_dict() if self.repeat else None,
            "selfrepeats": sorted(self.selfrepeats),
            "sigma_is_automorphism": self.sigma_is_automorphism,
            "equations": {name: held for name, held in self.equations_checked},
            "extrapolated": self.extrapolated,
            "notes": list(self.notes),
        }

    def __repr__(self):
        return (
            f"<AlmostMooreReport n={self.n} (r,z,k)=({self.r},{self.z},{self.k}) "
            f"verdict='{self.verdict}'>"
        )


@dataclass(frozen=True)
class CharPoly:
    coefficients: tuple  # highest degree first

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs or coeffs[0] != 1:
            raise MooreValidationError("Characteristic polynomials are monic.")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def evaluate(self, x):
        value = 0
        for c in self.coefficients:
            value = value * x + c
        return value

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coefficients) + "]"


@dataclass(frozen=True)
class SpectrumPattern:
    """Integer factorisation of a characteristic polynomial: (factor coefficients, multiplicity)."""

    factors: tuple
    expression: str

    @property
    def degree(self):
        return sum((len(coeffs) - 1) * mult for coeffs, mult in self.factors)

    def multiplicity(self, coefficients):
        for coeffs, mult in self.factors:
            if coeffs == tuple(coefficients):
                return mult
        return 0

    def __str__(self):
        return self.expression


@dataclass(frozen=True)
class LineDigraphMap:
    darts: tuple  # vertex i of LG <-> dart darts[i] = (u, v) of the source
    out_regular: bool

    def __len__(self):
        return len(self.darts)

    def label(self, i, names=None):
        """Vertex i of the line digraph as the word uv; u-v once the source has two-digit vertices."""
        u, v = self.darts[i]
        if names is not None:
            return f"{names[u]}{names[v]}"
        sep = "" if max(max(dart) for dart in self.darts) < 10 else "-"
        return f"{u}{sep}{v}"


@dataclass(frozen=True)
class HFamily:
    sigma: dict
    rho: dict
    omega: dict

    def P(self, i):
        return self.sigma[i].matrix()

    def R(self, i):
        return self.rho[i].matrix()

    def Z(self, i):
        return self.omega[i].matrix()


@dataclass(frozen=True)
class ZooEntry:
    """A named construction with the parameters it is documented to verify at."""

    name: str
    params: tuple
    r: int
    z: int
    k: int
    verdict: str
    as_digraph: bool = False

    @property
    def label(self):
        return " ".join([self.name, *map(str, self.params)])


@dataclass(frozen=True)
class SearchSpec:
    r: int
    z: int
    k: int
    n: Optional[int] = None
    moore: bool = False
    symmetry_reduction: bool = True
    prune: bool = True
    node_budget: Optional[int] = None
    time_budget: Optional[float] = None
    workers: Optional[int] = None
    allow_large_r: bool = False

    def to_dict(self):
        return {
            "r": self.r,
            "z": self.z,
            "k": self.k,
            "n": self.n,
            "target": "moore" if self.moore else "almost_moore",
            "symmetry_reduction": self.symmetry_reduction,
            "prune": self.prune,
        }


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    survivors: int = 0
    bases: int = 0
    prunes: Counter = field(default_factory=Counter)
    elapsed: float = 0.0

    def merge(self, other):
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.survivors += other.survivors
        self.prunes.update(other.prunes)

    def to_dict(self):
        return {
            "bases": self.bases,
            "nodes": self.nodes,
            "leaves": self.leaves,
            "survivors": self.survivors,
            "prunes": dict(sorted(self.prunes.items())),
            "elapsed_seconds": round(self.elapsed, 3),
        }


@dataclass
class CensusResult:
    spec: SearchSpec
    n: int
    representatives: list
    reports: list
    stats: SearchStats
    exhaustive: bool = True
    notes: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.representatives)

    def to_dict(self):
        return {
            "spec": self.spec.to_dict(),
            "n": self.n,
            "count": self.count,
            "exhaustive": self.exhaustive,
            "stats": self.stats.to_dict(),
            "notes": list(self.notes),
        }

    def __repr__(self):
        return (
            f"<CensusResult (r,z,k)=({self.spec.r},{self.spec.z},{self.spec.k}) "
            f"n={self.n} count={self.count} exhaustive={self.exhaustive}>"
        )
