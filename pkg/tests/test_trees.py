import pytest

from conftest import brute_force_isomorphic, random_tree_edges

from alignlab.trees import (
    all_labeled_trees,
    canonical_tree_code,
    tree_automorphism_count,
)


def test_enumeration_counts_match_cayley():
    for k, expected in ((1, 1), (2, 1), (3, 3), (4, 16), (5, 125)):
        assert sum(1 for _ in all_labeled_trees(k)) == expected


def test_distinct_code_counts_small_sizes():
    # unlabeled tree counts for k = 1..7
    expected = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11}
    for k, want in expected.items():
        codes = {canonical_tree_code(range(k), edges)[0] for edges in all_labeled_trees(k)}
        assert len(codes) == want, k


def test_code_equality_matches_brute_force_for_k_up_to_5():
    # direct check over every pair of enumerated labeled trees
    for k in (1, 2, 3, 4, 5):
        coded = [
            (canonical_tree_code(range(k), edges)[0], edges)
            for edges in all_labeled_trees(k)
        ]
        for i in range(len(coded)):
            for j in range(i + 1, len(coded)):
                same_code = coded[i][0] == coded[j][0]
                iso = brute_force_isomorphic(coded[i][1], coded[j][1], k)
                assert same_code == iso, (k, coded[i][1], coded[j][1])


def test_rejects_non_trees():
    with pytest.raises(ValueError):
        canonical_tree_code([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        canonical_tree_code([0, 1, 2, 3], [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        canonical_tree_code([0, 1], [(0, 2)])


def test_order_is_consistent_labeling(rng):
    # composing one member's labeling with another's inverse maps edges
    # onto edges, for random trees with scrambled vertex names
    for k in (2, 3, 4, 5, 6, 7):
        base = random_tree_edges(k, rng)
        code0, order0, _ = canonical_tree_code(range(k), base)
        for _ in range(8):
            names = rng.permutation(1000)[:k]
            edges = [(names[u], names[v]) for u, v in base]
            code, order, _ = canonical_tree_code(names, edges)
            assert code == code0
            # position -> vertex maps must be edge-preserving between members
            position = {int(v): p for p, v in enumerate(order)}
            mapped = {
                frozenset((int(order0[position[int(names[u])]]),
                           int(order0[position[int(names[v])]])))
                for u, v in base
            }
            assert mapped == {frozenset((u, v)) for u, v in base}


def test_order_is_minimal_vertex_sequence():
    # equal-code siblings are emitted smallest vertex first
    code, order, aut = canonical_tree_code([5, 9, 2], [(5, 9), (5, 2)])
    assert order.tolist() == [5, 2, 9]
    # bicentral 2-path roots at the smaller endpoint
    _, order2, _ = canonical_tree_code([7, 3], [(3, 7)])
    assert order2.tolist() == [3, 7]


def test_automorphism_counts_known_shapes():
    assert tree_automorphism_count([0], []) == 1
    assert tree_automorphism_count([0, 1], [(0, 1)]) == 2
    # paths have exactly two automorphisms
    for k in (3, 4, 5, 6):
        edges = [(i, i + 1) for i in range(k - 1)]
        assert tree_automorphism_count(range(k), edges) == 2
    # stars have (k-1)! automorphisms
    assert tree_automorphism_count(range(4), [(0, j) for j in (1, 2, 3)]) == 6
    assert tree_automorphism_count(range(5), [(0, j) for j in (1, 2, 3, 4)]) == 24


def brute_force_automorphisms(edges, k):
    from itertools import permutations

    eset = {frozenset(e) for e in edges}
    count = 0
    for perm in permutations(range(k)):
        if {frozenset((perm[u], perm[v])) for u, v in edges} == eset or not edges:
            count += 1
    return count


def test_automorphism_counts_against_brute_force(rng):
    for k in (2, 3, 4, 5, 6):
        for _ in range(6):
            edges = random_tree_edges(k, rng)
            assert tree_automorphism_count(range(k), edges) == brute_force_automorphisms(edges, k)


def test_codes_are_balanced_parentheses():
    for k in (1, 3, 5):
        for edges in all_labeled_trees(k):
            code, _, _ = canonical_tree_code(range(k), edges)
            depth = 0
            for ch in code:
                assert ch in "()"
                depth += 1 if ch == "(" else -1
                assert depth >= 0
            assert depth == 0
            break
