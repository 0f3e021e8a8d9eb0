"""Graph construction, validation, normalization, spectra, perturbation."""

import numpy as np
import pytest

from acdd.errors import (
    DuplicateEdge,
    GenerationFailed,
    IsolatedNode,
    NotEnoughNonEdges,
    SelfLoop,
)
from acdd.graphs import (
    apply_delta,
    generate_er,
    make_graph,
    perturb_edges,
    read_graph_file,
    reverse_delta,
    row_normalized,
    spectrum_extremes,
    validate,
    write_graph_file,
)


def test_er_p1_is_complete():
    g = generate_er(4, 1.0, False, 123)
    assert g.edge_count == 6
    assert all(len(g.in_neighbors(v)) == 3 for v in range(4))


def test_er_p0_fails_generation():
    with pytest.raises(GenerationFailed):
        generate_er(4, 0.0, False, 123)


def test_er_mean_degree_matches_binomial_expectation():
    g = generate_er(2000, 0.005, False, 1)
    degrees = [len(g.in_neighbors(v)) for v in range(2000)]
    assert 9.0 <= np.mean(degrees) <= 11.0


def test_er_same_seed_identical_edges():
    a = generate_er(200, 0.05, False, 42)
    b = generate_er(200, 0.05, False, 42)
    assert a.edges == b.edges


def test_validate_k3_ok(k3):
    validate(k3)


def test_single_directed_edge_leaves_source_isolated():
    with pytest.raises(IsolatedNode):
        make_graph(2, True, [(0, 1)])


def test_self_loop_rejected():
    with pytest.raises(SelfLoop):
        make_graph(3, False, [(0, 1), (1, 2), (0, 2), (1, 1)])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        make_graph(3, False, [(0, 1), (1, 0), (1, 2), (0, 2)])


def test_row_normalized_k2(k2):
    c = row_normalized(k2).toarray()
    np.testing.assert_allclose(c, [[0.0, 1.0], [1.0, 0.0]])


def test_row_normalized_k3(k3):
    c = row_normalized(k3).toarray()
    expected = np.full((3, 3), 0.5)
    np.fill_diagonal(expected, 0.0)
    np.testing.assert_allclose(c, expected)


def test_row_normalized_directed_cycle_is_permutation():
    g = make_graph(3, True, [(0, 1), (1, 2), (2, 0)])
    c = row_normalized(g).toarray()
    # each node has exactly one in-neighbor, so each row is a unit vector
    np.testing.assert_allclose(c, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])


def test_spectrum_extremes_k2(k2):
    mu_max, mu_min = spectrum_extremes(row_normalized(k2))
    assert abs(mu_max - 1.0) <= 1e-12
    assert abs(mu_min + 1.0) <= 1e-12


def test_spectrum_extremes_c4(c4):
    mu_max, mu_min = spectrum_extremes(row_normalized(c4))
    assert abs(mu_max - 1.0) <= 1e-10
    assert abs(mu_min + 1.0) <= 1e-10


def test_row_sums_and_perron_on_random_instances():
    for seed in range(5):
        g = generate_er(120, 0.08, seed % 2 == 0, seed)
        c = row_normalized(g)
        sums = c.toarray().sum(axis=1)
        np.testing.assert_allclose(sums, 1.0, atol=1e-12)
        mu_max, mu_min = spectrum_extremes(c)
        assert abs(mu_max.real - 1.0) <= 1e-8
        assert -1.0 - 1e-9 <= mu_min.real <= 1.0 + 1e-9


def test_iterative_spectrum_agrees_with_dense():
    # force the iterative branch with a graph above the dense cutoff
    from acdd import graphs as gmod

    g = generate_er(300, 0.05, False, 9)
    c = row_normalized(g)
    dense_max, dense_min = spectrum_extremes(c)
    old = gmod.DENSE_EIG_LIMIT
    gmod.DENSE_EIG_LIMIT = 10
    try:
        it_max, it_min = spectrum_extremes(c)
    finally:
        gmod.DENSE_EIG_LIMIT = old
    assert abs(it_max.real - dense_max.real) <= 1e-8
    assert abs(it_min.real - dense_min.real) <= 1e-6


def test_perturb_delete_one_from_k3(k3):
    g2, delta = perturb_edges(k3, 1, 0, 5)
    assert g2.edge_count == 2
    assert len(delta.removed) == 1
    assert len(delta.added) == 0


def test_perturb_add_to_complete_graph_fails():
    k4 = generate_er(4, 1.0, False, 0)
    with pytest.raises(NotEnoughNonEdges):
        perturb_edges(k4, 0, 1, 5)


def test_perturb_counts_and_determinism():
    g = generate_er(2000, 0.005, False, 3)
    count = g.edge_count // 100
    a, da = perturb_edges(g, count, 0, 17)
    b, db = perturb_edges(g, count, 0, 17)
    assert a.edge_count == g.edge_count - count
    assert a.edges == b.edges and da == db


def test_delta_round_trip():
    g = generate_er(60, 0.2, False, 2)
    g2, delta = perturb_edges(g, 10, 10, 11)
    assert apply_delta(g, delta).edges == g2.edges
    assert reverse_delta(g2, delta).edges == g.edges


def test_graph_file_round_trip(tmp_path, k3):
    for g in (k3, generate_er(30, 0.3, True, 8)):
        path = tmp_path / "g.txt"
        write_graph_file(g, path)
        back = read_graph_file(path)
        assert back.node_count == g.node_count
        assert back.directed == g.directed
        assert back.edges == g.edges
