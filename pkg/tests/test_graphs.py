import numpy as np
import pytest

from alignlab.graphs import SparseGraph, intersect, relabel, sym_diff, union
from alignlab.permutations import Permutation, random_permutation


def random_graph(n, m, rng):
    keys = rng.choice(n * (n - 1) // 2, size=m, replace=False)
    u, v = np.triu_indices(n, k=1)
    return SparseGraph(n, np.stack([u[keys], v[keys]], axis=1))


def test_construction_canonicalizes():
    g = SparseGraph(4, [(2, 1), (0, 3)])
    assert g.edge_set() == {(1, 2), (0, 3)}
    assert g.has_edge(1, 2) and g.has_edge(2, 1)
    assert not g.has_edge(0, 1)


def test_construction_rejects_bad_edges():
    with pytest.raises(ValueError):
        SparseGraph(3, [(0, 0)])
    with pytest.raises(ValueError):
        SparseGraph(3, [(0, 3)])
    with pytest.raises(ValueError):
        SparseGraph(3, [(0, 1), (1, 0)])


def test_relabel_identity_and_inverse(rng):
    g = random_graph(30, 60, rng)
    assert relabel(g, Permutation.identity(30)) == g
    sigma = random_permutation(30, rng)
    assert relabel(relabel(g, sigma), sigma.inv()) == g


def test_relabel_triangle_under_three_cycle():
    g = SparseGraph(3, [(0, 1), (1, 2), (0, 2)])
    sigma = Permutation.from_cycles(3, [(0, 1, 2)])
    assert relabel(g, sigma) == g


def test_relabel_preserves_degree_multiset(rng):
    g = random_graph(25, 40, rng)
    sigma = random_permutation(25, rng)
    assert sorted(g.degrees()) == sorted(relabel(g, sigma).degrees())


def test_relabel_is_group_action(rng):
    g = random_graph(20, 30, rng)
    for _ in range(10):
        sigma = random_permutation(20, rng)
        tau = random_permutation(20, rng)
        assert relabel(g, sigma.compose(tau)) == relabel(relabel(g, tau), sigma)


def test_relabel_size_mismatch():
    with pytest.raises(ValueError):
        relabel(SparseGraph(3, [(0, 1)]), Permutation.identity(4))


def test_set_operations_identities():
    g = SparseGraph(5, [(0, 1), (2, 3)])
    assert intersect(g, g) == g
    assert sym_diff(g, g) == SparseGraph.empty(5)
    h = SparseGraph(5, [(1, 2)])
    assert intersect(g, h) == SparseGraph.empty(5)
    assert union(g, h).num_edges == 3


def test_edge_count_identity_on_random_pairs(rng):
    for _ in range(10):
        g = random_graph(100, 220, rng)
        h = random_graph(100, 180, rng)
        e_union = union(g, h).num_edges
        e_inter = intersect(g, h).num_edges
        assert e_union == g.num_edges + h.num_edges - e_inter
        assert sym_diff(g, h).num_edges == e_union - e_inter


def test_set_operations_size_mismatch():
    with pytest.raises(ValueError):
        intersect(SparseGraph.empty(3), SparseGraph.empty(4))
