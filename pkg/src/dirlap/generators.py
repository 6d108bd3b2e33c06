"""Generators for the worked example families and random balanced graphs.

Two deterministic families with exactly prescribed weights:

* :func:`make_ladder` builds the two-rail graph with almost constant degree,
  quadratically growing rail weights and a fixed cross-rail drift.  Every
  interior vertex is Kirchhoff balanced exactly, the quadratic asymmetry
  constant stays bounded, while the total (L1) asymmetry constant grows with
  the sphere index when the sqrt measure is used.
* :func:`make_tree` builds a rooted tree with increasing branching, unit
  weights and unit measures, where every non-leaf vertex has exactly one
  strictly outgoing and one strictly incoming incident edge and all other
  incident edges are bidirectional.

:func:`make_random_balanced` superposes directed cycles with dyadic weights,
so the Kirchhoff balance holds bitwise at every vertex for any seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import DirectedGraph, GraphError

__all__ = ["LadderSpec", "TreeSpec", "make_ladder", "make_tree", "make_random_balanced"]


def _is_dyadic(x: float, grid: int = 16) -> bool:
    return x * grid == round(x * grid)


@dataclass(frozen=True)
class LadderSpec:
    """Parameters of the two-rail family.

    ``depth`` is the index of the last sphere (>= 2).  ``k`` shifts the four
    weights around the origin; with ``k = 0`` the two zero-weight edges are
    omitted and the graph stays weakly connected.  ``measure_mode`` selects
    m(x_n) = m(y_n) = sqrt(n) (``"sqrt_n"``) or m = 1 (``"unit"``); the origin
    always has measure 1.
    """

    depth: int
    k: float = 1.0
    measure_mode: str = "sqrt_n"

    def __post_init__(self):
        if self.depth < 2:
            raise GraphError("ladder depth must be >= 2")
        if self.k < 0:
            raise GraphError("ladder drift k must be >= 0")
        if self.measure_mode not in ("sqrt_n", "unit"):
            raise GraphError("measure_mode must be 'sqrt_n' or 'unit'")


def make_ladder(spec: LadderSpec) -> DirectedGraph:
    """Build the two-rail graph x_0; x_n, y_n (1 <= n <= depth).

    Weights, with k = spec.k:

    * b(x_0, x_1) = b(y_1, x_0) = k + 2 and b(x_0, y_1) = b(x_1, x_0) = k,
    * b(x_n, x_{n+1}) = (n+1)^2 + (n+1) and b(x_{n+1}, x_n) = (n+1)^2 - (n+1),
    * b(y_n, y_{n+1}) = (n+1)^2 - (n+1) and b(y_{n+1}, y_n) = (n+1)^2 + (n+1),
    * b(x_n, y_n) = n - 1 and b(y_n, x_n) = n + 1.

    Zero-valued entries (the rung x_1 -> y_1, and x_0 -> y_1, x_1 -> x_0 when
    k = 0) are absent edges.
    """
    n_max, k = spec.depth, float(spec.k)
    vertices: list[tuple[str, float]] = [("x0", 1.0)]
    for n in range(1, n_max + 1):
        m = float(np.sqrt(float(n))) if spec.measure_mode == "sqrt_n" else 1.0
        vertices.append((f"x{n}", m))
        vertices.append((f"y{n}", m))

    edges: list[tuple[str, str, float]] = [("x0", "x1", k + 2.0), ("y1", "x0", k + 2.0)]
    if k > 0.0:
        edges.append(("x0", "y1", k))
        edges.append(("x1", "x0", k))
    for n in range(1, n_max):
        up = float((n + 1) ** 2 + (n + 1))
        down = float((n + 1) ** 2 - (n + 1))
        edges.append((f"x{n}", f"x{n + 1}", up))
        edges.append((f"x{n + 1}", f"x{n}", down))
        edges.append((f"y{n}", f"y{n + 1}", down))
        edges.append((f"y{n + 1}", f"y{n}", up))
    for n in range(1, n_max + 1):
        if n > 1:
            edges.append((f"x{n}", f"y{n}", float(n - 1)))
        edges.append((f"y{n}", f"x{n}", float(n + 1)))

    return DirectedGraph(vertices, edges, exact_weights=_is_dyadic(k))


@dataclass(frozen=True)
class TreeSpec:
    """Parameters of the increasing-branching tree.

    ``branching[d]`` is the number of children of every vertex at depth d;
    it must be >= 3 and non-decreasing so that every vertex can host one
    strictly outgoing, one strictly incoming and at least one bidirectional
    child edge.  Defaults to d + 3.
    """

    depth: int
    branching: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise GraphError("tree depth must be >= 1")
        if self.branching is not None:
            object.__setattr__(self, "branching", tuple(int(c) for c in self.branching))

    def resolved_branching(self) -> tuple[int, ...]:
        branching = self.branching if self.branching is not None else tuple(d + 3 for d in range(self.depth))
        if len(branching) != self.depth:
            raise GraphError(f"branching needs one entry per level, expected {self.depth}")
        if any(c < 3 for c in branching):
            raise GraphError("branching must be >= 3 at every level")
        if any(b < a for a, b in zip(branching, branching[1:])):
            raise GraphError("branching must be non-decreasing")
        return branching


# Child-edge orientation depends on how the vertex is attached to its parent,
# so that every non-leaf vertex ends up with exactly one strictly outgoing and
# one strictly incoming incident edge:
#   root / parent edge bidirectional: first child out-only, second in-only;
#   parent edge incoming at the vertex: first child out-only;
#   parent edge outgoing at the vertex: first child in-only.
_FLIP = {"out": "in", "in": "out", "both": "both"}


def make_tree(spec: TreeSpec) -> DirectedGraph:
    """Build the increasing-branching tree with unit weights and measures."""
    branching = spec.resolved_branching()
    vertices: list[tuple[str, float]] = [("r", 1.0)]
    edges: list[tuple[str, str, float]] = []
    frontier: list[tuple[str, str]] = [("r", "both")]  # (label, parent edge seen from the vertex)
    for depth in range(spec.depth):
        next_frontier: list[tuple[str, str]] = []
        for label, parent_view in frontier:
            kinds = ["both"] * branching[depth]
            if parent_view == "both":
                kinds[0] = "out"
                kinds[1] = "in"
            elif parent_view == "in":
                kinds[0] = "out"
            else:
                kinds[0] = "in"
            for i, kind in enumerate(kinds):
                child = f"{label}.{i}"
                vertices.append((child, 1.0))
                if kind in ("out", "both"):
                    edges.append((label, child, 1.0))
                if kind in ("in", "both"):
                    edges.append((child, label, 1.0))
                next_frontier.append((child, _FLIP[kind]))
        frontier = next_frontier
    return DirectedGraph(vertices, edges, exact_weights=True)


def make_random_balanced(n: int, seed: int, density: float = 0.5) -> DirectedGraph:
    """Random weakly connected graph with exact Kirchhoff balance.

    The graph is a superposition of directed cycles with one dyadic weight
    per cycle: each cycle contributes its weight to both the in- and the
    out-strength of every visited vertex, so the balance holds bitwise.  A
    cycle through a random permutation of all vertices guarantees weak
    connectivity; ``density`` controls how many extra short cycles are added.
    """
    if n < 3:
        raise GraphError("need at least 3 vertices")
    if density < 0:
        raise GraphError("density must be >= 0")
    rng = np.random.default_rng(seed)

    weights: dict[tuple[int, int], float] = {}

    def add_cycle(order: Sequence[int]) -> None:
        w = int(rng.integers(4, 33)) / 16.0
        for a, b in zip(order, list(order[1:]) + [order[0]]):
            key = (int(a), int(b))
            weights[key] = weights.get(key, 0.0) + w

    add_cycle(list(rng.permutation(n)))
    for _ in range(int(round(density * n))):
        length = int(rng.integers(2, min(6, n) + 1))
        add_cycle(list(rng.choice(n, size=length, replace=False)))

    measures = rng.integers(4, 33, size=n) / 16.0
    vertices = [(f"v{i}", float(measures[i])) for i in range(n)]
    edges = [(f"v{a}", f"v{b}", w) for (a, b), w in sorted(weights.items())]
    return DirectedGraph(vertices, edges, exact_weights=True)
