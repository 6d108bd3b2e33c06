import numpy as np
import pytest

import dirlap as dl


@pytest.fixture(scope="session")
def ladder_sqrt():
    return dl.make_ladder(dl.LadderSpec(depth=12))


@pytest.fixture(scope="session")
def ladder_unit():
    return dl.make_ladder(dl.LadderSpec(depth=12, measure_mode="unit"))


@pytest.fixture(scope="session")
def tree4():
    return dl.make_tree(dl.TreeSpec(depth=4))


@pytest.fixture(scope="session")
def random_graphs():
    return [dl.make_random_balanced(12, seed=100 + s, density=0.6) for s in range(6)]


@pytest.fixture(scope="session")
def single_edge():
    return dl.DirectedGraph([("u", 1.0), ("v", 1.0)], [("u", "v", 3.0)])


@pytest.fixture(scope="session")
def two_vertex_symmetric():
    return dl.DirectedGraph([("u", 1.0), ("v", 1.0)], [("u", "v", 1.0), ("v", "u", 1.0)])


def unit_measure_copy(g):
    """Same vertices and edges with every measure set to 1."""
    vertices = [(g.label(x), 1.0) for x in g.vertex_ids()]
    edges = [(g.label(x), g.label(y), w) for x, y, w in g.iter_edges()]
    return dl.DirectedGraph(vertices, edges, exact_weights=g.exact_weights)


def interior_random_vectors(op, count, rng, complex_values=True):
    """Random vectors supported on the interior rows of a truncation."""
    rows = op.interior_rows
    out = np.zeros((op.n, count), dtype=complex if complex_values else float)
    block = rng.standard_normal((len(rows), count))
    if complex_values:
        block = block + 1j * rng.standard_normal((len(rows), count))
    out[rows] = block
    return out
