import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dirlap as dl
from dirlap import GraphError, TruncationError, UnknownVertexError


# -- construction invariants --------------------------------------------------


def test_rejects_loops():
    with pytest.raises(GraphError, match="loop"):
        dl.DirectedGraph([("a", 1.0), ("b", 1.0)], [("a", "a", 1.0), ("a", "b", 1.0)])


def test_rejects_nonpositive_weight_and_measure():
    with pytest.raises(GraphError, match="weight"):
        dl.DirectedGraph([("a", 1.0), ("b", 1.0)], [("a", "b", 0.0), ("b", "a", 1.0)])
    with pytest.raises(GraphError, match="measure"):
        dl.DirectedGraph([("a", -1.0), ("b", 1.0)], [("a", "b", 1.0)])


def test_rejects_isolated_vertex_and_disconnected():
    with pytest.raises(GraphError, match="incident"):
        dl.DirectedGraph([("a", 1.0), ("b", 1.0), ("c", 1.0)], [("a", "b", 1.0)])
    with pytest.raises(GraphError, match="connected"):
        dl.DirectedGraph(
            [("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)],
            [("a", "b", 1.0), ("c", "d", 1.0)],
        )


def test_rejects_single_vertex():
    with pytest.raises(GraphError):
        dl.DirectedGraph([("a", 1.0)], [])


def test_rejects_duplicates_and_unknown_endpoints():
    with pytest.raises(GraphError, match="duplicate vertex"):
        dl.DirectedGraph([("a", 1.0), ("a", 2.0)], [])
    with pytest.raises(GraphError, match="duplicate edge"):
        dl.DirectedGraph([("a", 1.0), ("b", 1.0)], [("a", "b", 1.0), ("a", "b", 2.0)])
    with pytest.raises(GraphError, match="unknown vertex"):
        dl.DirectedGraph([("a", 1.0), ("b", 1.0)], [("a", "zz", 1.0)])


def test_accessors(single_edge):
    g = single_edge
    assert len(g) == 2
    assert g.labels == ("u", "v")
    assert g.weight(0, 1) == 3.0 and g.weight(1, 0) == 0.0
    assert g.degree(0) == 1 and g.max_degree == 1
    with pytest.raises(UnknownVertexError):
        g.index("w")
    with pytest.raises(UnknownVertexError):
        g.label(5)


# -- strengths and Kirchhoff balance ------------------------------------------


def test_strengths_on_ladder(ladder_sqrt):
    g = ladder_sqrt
    assert dl.out_strength(g, g.index("x0")) == 4.0
    for n in range(2, 11):
        x = g.index(f"x{n}")
        expected = 2 * n * n + 3 * n + 1
        assert dl.out_strength(g, x) == expected
        assert dl.in_strength(g, x) == expected


def test_strengths_single_edge(single_edge):
    assert dl.out_strength(single_edge, 0) == 3.0
    assert dl.in_strength(single_edge, 1) == 3.0
    assert dl.in_strength(single_edge, 0) == 0.0


def test_strengths_symmetric_graph(two_vertex_symmetric):
    for x in two_vertex_symmetric.vertex_ids():
        assert dl.out_strength(two_vertex_symmetric, x) == dl.in_strength(two_vertex_symmetric, x)


def test_kirchhoff_ladder_interior_exact(ladder_sqrt):
    g = ladder_sqrt
    interior = dl.ball(g, g.index("x0"), 12).interior
    ok, imbalance, worst = dl.check_kirchhoff(g, interior)
    assert ok and imbalance == 0.0 and worst is None


def test_kirchhoff_tree_interior_exact(tree4):
    interior = dl.ball(tree4, tree4.index("r"), 4).interior
    ok, imbalance, _ = dl.check_kirchhoff(tree4, interior)
    assert ok and imbalance == 0.0


def test_kirchhoff_single_edge_fails(single_edge):
    ok, imbalance, worst = dl.check_kirchhoff(single_edge, [0])
    assert not ok and imbalance == 3.0 and worst == 0


def test_kirchhoff_float_tolerance():
    g = dl.DirectedGraph(
        [("a", 1.0), ("b", 1.0), ("c", 1.0)],
        [("a", "b", 0.1), ("b", "c", 0.1), ("c", "a", 0.1)],
    )
    assert dl.check_kirchhoff(g, g.vertex_ids()).ok


# -- symmetrize ----------------------------------------------------------------


def test_symmetrize_ladder_rail(ladder_sqrt):
    g_sym = dl.symmetrize(ladder_sqrt)
    for n in range(1, 12):
        u, v = g_sym.index(f"x{n}"), g_sym.index(f"x{n + 1}")
        assert g_sym.weight(u, v) == (n + 1) ** 2
        assert g_sym.weight(v, u) == (n + 1) ** 2


def test_symmetrize_fixed_point(two_vertex_symmetric):
    g_sym = dl.symmetrize(two_vertex_symmetric)
    assert g_sym.weight(0, 1) == 1.0 and g_sym.weight(1, 0) == 1.0


def test_symmetrize_single_edge(single_edge):
    g_sym = dl.symmetrize(single_edge)
    assert g_sym.weight(0, 1) == 1.5 and g_sym.weight(1, 0) == 1.5


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10**6))
def test_symmetrize_idempotent(seed):
    g = dl.make_random_balanced(8, seed=seed)
    once = dl.symmetrize(g)
    twice = dl.symmetrize(once)
    for x, y, w in once.iter_edges():
        assert twice.weight(x, y) == w


def test_symmetrize_commutes_with_relabeling(random_graphs):
    g = random_graphs[0]
    perm = np.random.default_rng(5).permutation(len(g))
    vertices = [(g.label(int(x)), g.measure(int(x))) for x in perm]
    edges = [(g.label(x), g.label(y), w) for x, y, w in g.iter_edges()]
    shuffled = dl.DirectedGraph(vertices, edges)
    a, b = dl.symmetrize(g), dl.symmetrize(shuffled)
    for x, y, w in a.iter_edges():
        assert b.weight(b.index(a.label(x)), b.index(a.label(y))) == w


# -- asymmetry constants ---------------------------------------------------------


def test_asymmetry_ladder_per_vertex(ladder_sqrt):
    g = ladder_sqrt
    for n in range(2, 11):
        value = dl.asymmetry_at(g, g.index(f"x{n}"))
        expected = (8.0 + 4.0 / n) / np.sqrt(n)
        assert value == pytest.approx(expected, rel=1e-12)
    assert dl.check_asymmetry(g, dl.ball(g, 0, 12).interior) <= 12.0


def test_asymmetry_tree_counts_one_way_edges(tree4):
    # Every non-leaf vertex has exactly two strictly oriented unit edges,
    # each contributing |1|^2 / (1/2) = 2, hence the constant 4.
    interior = dl.ball(tree4, 0, 4).interior
    assert dl.check_asymmetry(tree4, interior) == 4.0
    for x in sorted(interior)[:10]:
        assert dl.asymmetry_at(tree4, x) == 4.0


def test_asymmetry_symmetric_graph_zero(two_vertex_symmetric):
    assert dl.check_asymmetry(two_vertex_symmetric, [0, 1]) == 0.0


def test_total_asymmetry_ladder(ladder_sqrt):
    g = ladder_sqrt
    for n in range(1, 11):
        value = dl.total_asymmetry_at(g, g.index(f"x{n}"))
        assert value == pytest.approx((4.0 * n + 4.0) / np.sqrt(n), rel=1e-12)


def test_total_asymmetry_tree_and_symmetric(tree4, two_vertex_symmetric):
    interior = dl.ball(tree4, 0, 4).interior
    assert dl.check_total_asymmetry(tree4, interior) == 2.0
    assert dl.check_total_asymmetry(two_vertex_symmetric, [0, 1]) == 0.0
    assert dl.check_total_asymmetry(two_vertex_symmetric, []) is None


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10**6))
def test_asymmetry_at_most_twice_total(seed):
    # |b - b~|^2 / b' <= 2 |b - b~| summand by summand.
    g = dl.make_random_balanced(10, seed=seed)
    interior = list(g.vertex_ids())
    assert dl.check_asymmetry(g, interior) <= 2.0 * dl.check_total_asymmetry(g, interior) + 1e-12


# -- distances, balls, cutoffs ---------------------------------------------------


def test_distances_ladder_spheres(ladder_sqrt):
    g = ladder_sqrt
    dist = dl.combinatorial_distance(g, g.index("x0"))
    assert dist[g.index("x0")] == 0
    for n in range(1, 13):
        assert dist[g.index(f"x{n}")] == n
        assert dist[g.index(f"y{n}")] == n
    sph = dl.spheres(g, g.index("x0"), 3)
    assert set(sph[2]) == {g.index("x2"), g.index("y2")}


def test_distance_path():
    g = dl.DirectedGraph(
        [("u", 1.0), ("v", 1.0), ("w", 1.0)],
        [("u", "v", 1.0), ("v", "u", 1.0), ("v", "w", 1.0), ("w", "v", 1.0)],
    )
    assert dl.combinatorial_distance(g, 0)[2] == 2


def test_ball_structure(ladder_sqrt):
    g = ladder_sqrt
    b = dl.ball(g, g.index("x0"), 3)
    expected = {g.index(s) for s in ("x0", "x1", "y1", "x2", "y2", "x3", "y3")}
    assert set(b.vertices) == expected
    assert b.interior == {g.index(s) for s in ("x0", "x1", "y1", "x2", "y2")}
    b0 = dl.ball(g, g.index("x0"), 0)
    assert b0.vertices == (g.index("x0"),) and b0.interior == frozenset()
    with pytest.raises(GraphError):
        dl.ball(g, 0, -1)


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 5), st.integers(0, 5))
def test_ball_monotonicity(r1, r2):
    g = dl.make_ladder(dl.LadderSpec(depth=8))
    lo, hi = sorted((r1, r2))
    assert set(dl.ball(g, 0, lo).vertices) <= set(dl.ball(g, 0, hi).vertices)


def test_checker_monotonic_in_probed_set(ladder_sqrt):
    g = ladder_sqrt
    small = dl.ball(g, 0, 4).interior
    large = dl.ball(g, 0, 10).interior
    assert dl.check_asymmetry(g, small) <= dl.check_asymmetry(g, large)
    assert dl.check_total_asymmetry(g, small) <= dl.check_total_asymmetry(g, large)


def test_cutoffs_shape_and_constant(ladder_sqrt):
    g = ladder_sqrt
    cut = dl.build_cutoffs(g, 0, [2, 4])
    dist = dl.combinatorial_distance(g, 0)
    for r, chi, members in zip(cut.radii, cut.functions, cut.sets):
        assert np.all((0.0 <= chi) & (chi <= 1.0))
        assert np.all(chi[dist <= r] == 1.0)
        assert np.all(chi[dist >= 2 * r] == 0.0)
        assert members == frozenset(int(v) for v in np.nonzero(dist <= r)[0])
    assert cut.constant == max(cut.per_radius)


def test_cutoffs_constant_matches_naive(ladder_sqrt):
    g = ladder_sqrt
    cut = dl.build_cutoffs(g, 0, [3])
    chi = cut.functions[0]
    naive = 0.0
    for x in g.vertex_ids():
        energy = sum(
            (g.weight(x, y) + g.weight(y, x)) / 2.0 * (chi[x] - chi[y]) ** 2
            for y in g.neighbors(x)
        )
        naive = max(naive, energy / g.measure(x))
    assert cut.per_radius[0] == pytest.approx(naive, rel=1e-15)


def test_cutoffs_ladder_constants_stay_bounded():
    g = dl.make_ladder(dl.LadderSpec(depth=40))
    cut = dl.build_cutoffs(g, 0, [2, 4, 8, 16])
    assert all(b <= a + 1e-12 for a, b in zip(cut.per_radius, cut.per_radius[1:]))
    assert cut.constant == cut.per_radius[0]


def test_cutoffs_bad_radii(ladder_sqrt):
    with pytest.raises(GraphError):
        dl.build_cutoffs(ladder_sqrt, 0, [3, 3])
    with pytest.raises(GraphError):
        dl.build_cutoffs(ladder_sqrt, 0, [0, 2])


# -- divergence criterion ----------------------------------------------------------


def test_divergence_criterion_ladder_values(ladder_sqrt):
    rep = dl.divergence_criterion(ladder_sqrt, 0, 10)
    for n in range(2, 10):
        assert rep.a_plus[n] == (n + 1) ** 2 / np.sqrt(n)
        assert rep.a_minus[n] == n**2 / np.sqrt(n)
        assert rep.a_minus[n] == pytest.approx(n**1.5, rel=1e-15)
    assert rep.partial_sum > 0


def test_divergence_partial_sum_grows(ladder_sqrt):
    partials = [dl.divergence_criterion(ladder_sqrt, 0, n).partial_sum for n in (4, 8, 11)]
    assert partials[0] < partials[1] < partials[2]


def test_divergence_requires_large_host(ladder_sqrt):
    with pytest.raises(TruncationError):
        dl.divergence_criterion(ladder_sqrt, 0, 13)


# -- assumption report ----------------------------------------------------------------


def test_assumption_report_fields(ladder_sqrt):
    g = ladder_sqrt
    interior = sorted(dl.ball(g, 0, 10).interior)
    rep = dl.assumption_report(g, interior)
    assert rep.kirchhoff_max_imbalance == 0.0
    assert rep.asymmetry_constant <= 2.0 * rep.total_asymmetry_constant + 1e-12
    assert rep.max_degree == 3
    assert rep.probed_vertices == tuple(interior)
    payload = rep.to_dict(labels=g.labels)
    assert payload["probed_size"] == len(interior)
    assert "x0" in payload["probed_vertices"]


# -- JSON round trip ---------------------------------------------------------------------


def test_json_round_trip(tmp_path, ladder_sqrt):
    path = tmp_path / "g.json"
    dl.save_graph(ladder_sqrt, path)
    loaded = dl.load_graph(path)
    assert loaded.labels == ladder_sqrt.labels
    assert np.array_equal(loaded.measures, ladder_sqrt.measures)
    assert sorted(loaded.iter_edges()) == sorted(ladder_sqrt.iter_edges())


def test_json_validation_messages(tmp_path):
    with pytest.raises(GraphError, match="vertices"):
        dl.graph_from_dict({"edges": []})
    with pytest.raises(GraphError, match=r"edges\[0\]"):
        dl.graph_from_dict({"vertices": [{"id": "a", "m": 1}], "edges": [{"from": "a"}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(GraphError, match="line"):
        dl.load_graph(bad)
