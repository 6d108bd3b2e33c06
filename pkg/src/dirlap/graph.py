"""Directed weighted graphs with vertex measures.

The central object is :class:`DirectedGraph`: a finite, weakly connected
graph carrying a strictly positive weight ``b(x, y)`` on every directed edge
and a strictly positive measure ``m(x)`` on every vertex.  Finite graphs here
usually stand for truncations of infinite ones, so every structural checker
takes an explicit set of *interior* vertices over which suprema are taken;
vertices polluted by the truncation boundary are simply left out by the
caller.

Checkers implemented in this module:

* Kirchhoff balance: total incoming weight equals total outgoing weight,
* the (quadratic) asymmetry constant  ``sup_x (1/m(x)) sum_y |b(x,y)-b(y,x)|^2 / b'(x,y)``,
* the total (L1) asymmetry constant   ``sup_x (1/m(x)) sum_y |b(x,y)-b(y,x)|``,
* combinatorial distances, balls and spheres of the undirected skeleton,
* tent-shaped cutoff sequences with their exact per-vertex energy constant,
* the sphere-growth divergence criterion certifying that cutoffs exist.

All graph values are immutable after construction and safe to share across
concurrent readers; every checker is a pure function.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "UnknownVertexError",
    "TruncationError",
    "NumericError",
    "VertexId",
    "DirectedGraph",
    "Ball",
    "KirchhoffReport",
    "CutoffSequence",
    "DivergenceReport",
    "AssumptionReport",
    "out_strength",
    "in_strength",
    "check_kirchhoff",
    "symmetrize",
    "check_asymmetry",
    "asymmetry_at",
    "check_total_asymmetry",
    "total_asymmetry_at",
    "combinatorial_distance",
    "spheres",
    "ball",
    "full_ball",
    "build_cutoffs",
    "divergence_criterion",
    "assumption_report",
    "load_graph",
    "save_graph",
    "graph_from_dict",
    "graph_to_dict",
]

# Vertices are interned to dense integer ids; external names are kept as labels.
VertexId = int


class GraphError(ValueError):
    """Invalid graph data or a violated precondition."""


class UnknownVertexError(GraphError):
    """A vertex id or label that does not belong to the graph."""


class TruncationError(GraphError):
    """The host graph is too small for the requested computation."""


class NumericError(RuntimeError):
    """An eigenvalue or factorization routine failed."""


class DirectedGraph:
    """Finite directed graph with positive edge weights and vertex measures.

    Parameters
    ----------
    vertices
        Iterable of ``(label, measure)`` pairs.  Labels must be unique
        strings, measures strictly positive reals.
    edges
        Iterable of ``(from_label, to_label, weight)`` triples with strictly
        positive weights.  Loops and duplicate edges are rejected.
    exact_weights
        Set by generators whose weights are exactly representable, so that
        balance checks may use tolerance zero.

    Construction validates: no loops, strictly positive weights and measures,
    at least one incident undirected edge per vertex, and weak connectivity
    of the undirected skeleton.  A vertex with no outgoing edge is accepted
    (it arises at truncation boundaries) but fails the Kirchhoff check, so it
    never hides inside an interior set.
    """

    __slots__ = (
        "_labels",
        "_index",
        "_m",
        "_out",
        "_in",
        "_nbrs",
        "_max_degree",
        "_edge_count",
        "exact_weights",
    )

    def __init__(
        self,
        vertices: Iterable[tuple[str, float]],
        edges: Iterable[tuple[str, str, float]],
        *,
        exact_weights: bool = False,
    ):
        labels: list[str] = []
        measures: list[float] = []
        index: dict[str, int] = {}
        for label, m in vertices:
            label = str(label)
            if label in index:
                raise GraphError(f"duplicate vertex {label!r}")
            m = float(m)
            if not math.isfinite(m) or m <= 0.0:
                raise GraphError(f"vertex {label!r}: measure must be finite and > 0, got {m}")
            index[label] = len(labels)
            labels.append(label)
            measures.append(m)
        if not labels:
            raise GraphError("graph needs at least one vertex")

        n = len(labels)
        out: list[dict[int, float]] = [dict() for _ in range(n)]
        inc: list[dict[int, float]] = [dict() for _ in range(n)]
        for pos, (src, dst, w) in enumerate(edges):
            try:
                u = index[str(src)]
                v = index[str(dst)]
            except KeyError as exc:
                raise GraphError(f"edge {pos} ({src!r} -> {dst!r}): unknown vertex {exc.args[0]!r}") from None
            if u == v:
                raise GraphError(f"edge {pos} ({src!r} -> {dst!r}): loops are not allowed")
            w = float(w)
            if not math.isfinite(w) or w <= 0.0:
                raise GraphError(f"edge {pos} ({src!r} -> {dst!r}): weight must be finite and > 0, got {w}")
            if v in out[u]:
                raise GraphError(f"edge {pos} ({src!r} -> {dst!r}): duplicate edge")
            out[u][v] = w
            inc[v][u] = w

        nbrs = [sorted(set(out[x]) | set(inc[x])) for x in range(n)]
        for x in range(n):
            if not nbrs[x]:
                raise GraphError(f"vertex {labels[x]!r} has no incident edge")

        # Weak connectivity of the undirected skeleton.
        seen = [False] * n
        queue: deque[int] = deque([0])
        seen[0] = True
        reached = 1
        while queue:
            x = queue.popleft()
            for y in nbrs[x]:
                if not seen[y]:
                    seen[y] = True
                    reached += 1
                    queue.append(y)
        if reached != n:
            missing = labels[seen.index(False)]
            raise GraphError(f"graph is not weakly connected: vertex {missing!r} unreachable from {labels[0]!r}")

        m_arr = np.asarray(measures, dtype=float)
        m_arr.setflags(write=False)
        self._labels = tuple(labels)
        self._index = index
        self._m = m_arr
        self._out = tuple(MappingProxyType(d) for d in out)
        self._in = tuple(MappingProxyType(d) for d in inc)
        self._nbrs = tuple(tuple(ns) for ns in nbrs)
        self._max_degree = max(len(ns) for ns in self._nbrs)
        self._edge_count = sum(len(d) for d in out)
        self.exact_weights = bool(exact_weights)

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return len(self._labels)

    def __repr__(self) -> str:
        return f"DirectedGraph({len(self)} vertices, {self._edge_count} directed edges)"

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def measures(self) -> np.ndarray:
        """Vertex measures as a read-only array indexed by vertex id."""
        return self._m

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def vertex_ids(self) -> range:
        return range(len(self._labels))

    def require_vertex(self, x: VertexId) -> None:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < len(self._labels)):
            raise UnknownVertexError(f"unknown vertex id {x!r}")

    def index(self, label: str) -> VertexId:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex label {label!r}") from None

    def label(self, x: VertexId) -> str:
        self.require_vertex(x)
        return self._labels[x]

    def measure(self, x: VertexId) -> float:
        self.require_vertex(x)
        return float(self._m[x])

    def weight(self, x: VertexId, y: VertexId) -> float:
        """Edge weight b(x, y), or 0.0 when the directed edge is absent."""
        self.require_vertex(x)
        self.require_vertex(y)
        return self._out[x].get(y, 0.0)

    def out_edges(self, x: VertexId) -> Mapping[int, float]:
        self.require_vertex(x)
        return self._out[x]

    def in_edges(self, x: VertexId) -> Mapping[int, float]:
        self.require_vertex(x)
        return self._in[x]

    def neighbors(self, x: VertexId) -> tuple[int, ...]:
        """Undirected neighbors, i.e. the ends of all incident edges."""
        self.require_vertex(x)
        return self._nbrs[x]

    def degree(self, x: VertexId) -> int:
        return len(self.neighbors(x))

    def iter_edges(self) -> Iterable[tuple[int, int, float]]:
        """All directed edges as (source id, target id, weight)."""
        for x in self.vertex_ids():
            for y, w in self._out[x].items():
                yield x, y, w

    def is_symmetric(self) -> bool:
        return all(self._in[x].get(y, 0.0) == w for x in self.vertex_ids() for y, w in self._out[x].items())


# -- strengths and the Kirchhoff balance ------------------------------------


def out_strength(g: DirectedGraph, x: VertexId) -> float:
    """Total outgoing weight at ``x``."""
    g.require_vertex(x)
    return float(sum(g.out_edges(x).values()))


def in_strength(g: DirectedGraph, x: VertexId) -> float:
    """Total incoming weight at ``x``."""
    g.require_vertex(x)
    return float(sum(g.in_edges(x).values()))


class KirchhoffReport(NamedTuple):
    ok: bool
    max_imbalance: float
    worst_vertex: int | None


def check_kirchhoff(
    g: DirectedGraph,
    interior: Iterable[VertexId],
    tol: float | None = None,
) -> KirchhoffReport:
    """Check in-strength == out-strength on a set of interior vertices.

    With ``tol=None`` the tolerance is 0 for graphs built by the generators
    (``exact_weights``) and ``1e-12 * max(out, in)`` per vertex otherwise,
    since user-supplied floating weights carry rounding.
    """
    worst = None
    worst_imbalance = 0.0
    ok = True
    for x in interior:
        g.require_vertex(x)
        s_out = out_strength(g, x)
        s_in = in_strength(g, x)
        imbalance = abs(s_out - s_in)
        if imbalance > worst_imbalance:
            worst_imbalance = imbalance
            worst = int(x)
        if tol is None:
            allowed = 0.0 if g.exact_weights else 1e-12 * max(s_out, s_in)
        else:
            allowed = tol
        if imbalance > allowed:
            ok = False
    return KirchhoffReport(ok, worst_imbalance, worst)


def symmetrize(g: DirectedGraph) -> DirectedGraph:
    """Graph with the same vertices and the averaged weight (b(x,y)+b(y,x))/2.

    The output is symmetric; idempotent on already-symmetric graphs.
    """
    edges: list[tuple[str, str, float]] = []
    for x in g.vertex_ids():
        for y in g.neighbors(x):
            if y < x:
                continue
            w = (g.weight(x, y) + g.weight(y, x)) / 2.0
            edges.append((g.label(x), g.label(y), w))
            edges.append((g.label(y), g.label(x), w))
    vertices = [(g.label(x), g.measure(x)) for x in g.vertex_ids()]
    return DirectedGraph(vertices, edges, exact_weights=g.exact_weights)


# -- asymmetry constants -----------------------------------------------------


def asymmetry_at(g: DirectedGraph, x: VertexId) -> float:
    """(1/m(x)) sum over neighbors of |b(x,y)-b(y,x)|^2 / b'(x,y)."""
    g.require_vertex(x)
    total = 0.0
    for y in g.neighbors(x):
        d = g.weight(x, y) - g.weight(y, x)
        if d != 0.0:
            total += d * d / ((g.weight(x, y) + g.weight(y, x)) / 2.0)
    return total / g.measure(x)


def check_asymmetry(g: DirectedGraph, interior: Iterable[VertexId]) -> float:
    """Maximum of :func:`asymmetry_at` over the probed vertices (0.0 if empty)."""
    return max((asymmetry_at(g, x) for x in interior), default=0.0)


def total_asymmetry_at(g: DirectedGraph, x: VertexId) -> float:
    """(1/m(x)) sum over neighbors of |b(x,y)-b(y,x)|."""
    g.require_vertex(x)
    total = 0.0
    for y in g.neighbors(x):
        total += abs(g.weight(x, y) - g.weight(y, x))
    return total / g.measure(x)


def check_total_asymmetry(g: DirectedGraph, interior: Iterable[VertexId]) -> float | None:
    """Maximum of :func:`total_asymmetry_at` over the probed vertices.

    Returns None for an empty probe set.  Callers compare values across
    truncation radii to detect growth; a single finite value never proves
    boundedness on the infinite graph.
    """
    values = [total_asymmetry_at(g, x) for x in interior]
    return max(values) if values else None


# -- distances, balls, cutoffs ----------------------------------------------


def combinatorial_distance(g: DirectedGraph, x0: VertexId) -> np.ndarray:
    """Breadth-first distances over undirected edges, indexed by vertex id."""
    g.require_vertex(x0)
    dist = np.full(len(g), -1, dtype=np.int64)
    dist[x0] = 0
    queue: deque[int] = deque([x0])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def spheres(g: DirectedGraph, x0: VertexId, n_max: int | None = None) -> list[tuple[int, ...]]:
    """Vertex spheres S_n = {x : d(x0, x) = n} up to ``n_max`` (or the eccentricity)."""
    dist = combinatorial_distance(g, x0)
    radius = int(dist.max()) if n_max is None else int(n_max)
    out = [tuple(np.nonzero(dist == r)[0]) for r in range(radius + 1)]
    return out


class Ball(NamedTuple):
    root: int
    radius: int
    vertices: tuple[int, ...]
    interior: frozenset[int]


def ball(g: DirectedGraph, x0: VertexId, radius: int) -> Ball:
    """Closed distance ball of the given radius around ``x0``.

    ``interior`` holds the vertices at distance <= radius-1; by local
    finiteness all their neighbors lie inside the ball, so checks restricted
    to the interior see no truncation artifacts.
    """
    if radius < 0:
        raise GraphError("radius must be >= 0")
    dist = combinatorial_distance(g, x0)
    vertices = tuple(int(v) for v in np.nonzero((0 <= dist) & (dist <= radius))[0])
    interior = frozenset(int(v) for v in np.nonzero((0 <= dist) & (dist <= radius - 1))[0])
    return Ball(int(x0), int(radius), vertices, interior)


def full_ball(g: DirectedGraph, x0: VertexId = 0) -> Ball:
    """Ball covering the whole graph with every vertex interior."""
    radius = int(combinatorial_distance(g, x0).max()) + 1
    return ball(g, x0, radius)


@dataclass(frozen=True)
class CutoffSequence:
    """Tent-shaped cutoff functions equal to 1 on nested balls.

    ``functions[i]`` is defined on every host vertex, equals 1 on the ball of
    radius ``radii[i]`` and vanishes outside the ball of radius
    ``2 * radii[i]``.  ``constant`` is the exact maximum over the sequence and
    over all host vertices of the per-vertex weighted gradient energy

        (1/m(x)) * sum_y b'(x,y) * |chi(x) - chi(y)|^2,

    a probed bound, not a proof of the infinite-graph property.
    """

    root: int
    radii: tuple[int, ...]
    sets: tuple[frozenset[int], ...]
    functions: tuple[np.ndarray, ...]
    constant: float
    per_radius: tuple[float, ...]


def build_cutoffs(g: DirectedGraph, x0: VertexId, radii: Sequence[int]) -> CutoffSequence:
    """Build cutoffs chi_r(x) = clamp(2 - d(x0,x)/r, 0, 1) for each radius."""
    radii = [int(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise GraphError("radii must be strictly increasing positive integers")
    dist = combinatorial_distance(g, x0).astype(float)
    sets = []
    functions = []
    per_radius = []
    for r in radii:
        chi = np.clip(2.0 - dist / r, 0.0, 1.0)
        chi.setflags(write=False)
        best = 0.0
        for x in g.vertex_ids():
            if chi[x] == 0.0 and all(chi[y] == 0.0 for y in g.neighbors(x)):
                continue
            energy = 0.0
            for y in g.neighbors(x):
                diff = chi[x] - chi[y]
                if diff != 0.0:
                    energy += (g.weight(x, y) + g.weight(y, x)) / 2.0 * diff * diff
            best = max(best, energy / g.measure(x))
        sets.append(frozenset(int(v) for v in np.nonzero(dist <= r)[0]))
        functions.append(chi)
        per_radius.append(best)
    return CutoffSequence(
        root=int(x0),
        radii=tuple(radii),
        sets=tuple(sets),
        functions=tuple(functions),
        constant=max(per_radius),
        per_radius=tuple(per_radius),
    )


class DivergenceReport(NamedTuple):
    a_plus: dict[int, float]
    a_minus: dict[int, float]
    partial_sum: float


def divergence_criterion(g: DirectedGraph, x0: VertexId, n_max: int) -> DivergenceReport:
    """Per-sphere symmetrized strengths and the cutoff-existence partial sum.

    ``a_plus[n]`` is the maximum over the sphere S_n of the measure-normalized
    symmetrized weight toward S_{n+1}; ``a_minus[n]`` is the analogue toward
    S_{n-1}.  The partial sum

        sum_{n=0}^{n_max-1} 1 / sqrt(a_plus[n] + a_minus[n+1])

    diverges (as n_max grows) on graphs admitting cutoff sequences of the
    kind built by :func:`build_cutoffs`.
    """
    if n_max < 1:
        raise GraphError("n_max must be >= 1")
    dist = combinatorial_distance(g, x0)
    if int(dist.max()) < n_max:
        raise TruncationError(
            f"sphere {int(dist.max()) + 1} is empty; use a host graph of radius >= {n_max}"
        )
    a_plus: dict[int, float] = {}
    a_minus: dict[int, float] = {}
    for n in range(0, n_max + 1):
        sphere = np.nonzero(dist == n)[0]
        for x in sphere:
            up = 0.0
            down = 0.0
            for y in g.neighbors(int(x)):
                w_sym = (g.weight(int(x), y) + g.weight(y, int(x))) / 2.0
                if dist[y] == n + 1:
                    up += w_sym
                elif dist[y] == n - 1:
                    down += w_sym
            if n <= n_max - 1:
                a_plus[n] = max(a_plus.get(n, 0.0), up / g.measure(int(x)))
            if n >= 1:
                a_minus[n] = max(a_minus.get(n, 0.0), down / g.measure(int(x)))
    partial = sum(1.0 / math.sqrt(a_plus[n] + a_minus[n + 1]) for n in range(0, n_max))
    return DivergenceReport(a_plus, a_minus, partial)


# -- aggregated assumption report ---------------------------------------------


@dataclass(frozen=True)
class AssumptionReport:
    """Constants extracted from a graph over a probed set of vertices."""

    kirchhoff_max_imbalance: float
    total_asymmetry_constant: float | None
    asymmetry_constant: float
    max_degree: int
    probed_vertices: tuple[int, ...]

    def to_dict(self, labels: Sequence[str] | None = None) -> dict:
        probed: list = sorted(self.probed_vertices)
        if labels is not None:
            probed = [labels[v] for v in probed]
        return {
            "kirchhoff_max_imbalance": self.kirchhoff_max_imbalance,
            "total_asymmetry_constant": self.total_asymmetry_constant,
            "asymmetry_constant": self.asymmetry_constant,
            "max_degree": self.max_degree,
            "probed_size": len(probed),
            "probed_vertices": probed,
        }


def assumption_report(g: DirectedGraph, interior: Iterable[VertexId]) -> AssumptionReport:
    """Evaluate all per-vertex assumption constants over ``interior``."""
    probed = tuple(sorted(int(x) for x in interior))
    balance = check_kirchhoff(g, probed)
    return AssumptionReport(
        kirchhoff_max_imbalance=balance.max_imbalance,
        total_asymmetry_constant=check_total_asymmetry(g, probed),
        asymmetry_constant=check_asymmetry(g, probed),
        max_degree=g.max_degree,
        probed_vertices=probed,
    )


# -- JSON interchange ----------------------------------------------------------


def graph_to_dict(g: DirectedGraph) -> dict:
    """Serialize to the interchange schema ``{"vertices": [...], "edges": [...]}``."""
    return {
        "vertices": [{"id": g.label(x), "m": g.measure(x)} for x in g.vertex_ids()],
        "edges": [
            {"from": g.label(x), "to": g.label(y), "b": w} for x, y, w in g.iter_edges()
        ],
    }


def graph_from_dict(data: dict) -> DirectedGraph:
    """Build a graph from the interchange schema, naming offenders on failure."""
    if not isinstance(data, dict):
        raise GraphError("graph document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in data or not isinstance(data[key], list):
            raise GraphError(f"graph document needs a {key!r} list")
    vertices = []
    for i, entry in enumerate(data["vertices"]):
        if not isinstance(entry, dict) or "id" not in entry or "m" not in entry:
            raise GraphError(f"vertices[{i}]: expected an object with 'id' and 'm'")
        vertices.append((entry["id"], entry["m"]))
    edges = []
    for i, entry in enumerate(data["edges"]):
        if not isinstance(entry, dict) or any(k not in entry for k in ("from", "to", "b")):
            raise GraphError(f"edges[{i}]: expected an object with 'from', 'to' and 'b'")
        edges.append((entry["from"], entry["to"], entry["b"]))
    return DirectedGraph(vertices, edges)


def save_graph(g: DirectedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(g), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_graph(path) -> DirectedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    return graph_from_dict(data)
