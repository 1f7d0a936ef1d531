"""Shared test helpers, including an independent brute-force tree
isomorphism oracle used to validate the canonical codes."""

from __future__ import annotations

import numpy as np
import pytest


def brute_force_isomorphic(edges_a, edges_b, k: int) -> bool:
    """Exhaustive isomorphism test between two trees on k labeled vertices
    0..k-1, by backtracking over all degree-compatible bijections.

    Deliberately independent of the canonical-code machinery: it only uses
    adjacency sets and tries every consistent assignment.
    """
    ea = {frozenset(e) for e in edges_a}
    eb = {frozenset(e) for e in edges_b}
    if len(ea) != len(eb):
        return False
    adj_a = {v: set() for v in range(k)}
    adj_b = {v: set() for v in range(k)}
    for u, v in ea:
        adj_a[u].add(v)
        adj_a[v].add(u)
    for u, v in eb:
        adj_b[u].add(v)
        adj_b[v].add(u)
    deg_a = sorted(len(adj_a[v]) for v in range(k))
    deg_b = sorted(len(adj_b[v]) for v in range(k))
    if deg_a != deg_b:
        return False

    # assign vertices of a in order, backtracking over images in b
    order = sorted(range(k), key=lambda v: -len(adj_a[v]))
    image = {}
    used = set()

    def extend(i: int) -> bool:
        if i == k:
            return True
        v = order[i]
        for w in range(k):
            if w in used or len(adj_b[w]) != len(adj_a[v]):
                continue
            ok = True
            for nb in adj_a[v]:
                if nb in image and image[nb] not in adj_b[w]:
                    ok = False
                    break
            if ok:
                # also reject if w is adjacent to an image of a non-neighbor
                for placed, placed_img in image.items():
                    if placed_img in adj_b[w] and placed not in adj_a[v]:
                        ok = False
                        break
            if ok:
                image[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del image[v]
                used.discard(w)
        return False

    return extend(0)


def random_tree_edges(k: int, rng: np.random.Generator):
    """Uniform labeled tree on 0..k-1 via a random decoded vertex sequence."""
    if k == 1:
        return []
    if k == 2:
        return [(0, 1)]
    import heapq

    seq = rng.integers(0, k, size=k - 2)
    degree = [1] * k
    for i in seq:
        degree[i] += 1
    leaves = [i for i in range(k) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for i in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(i)))
        degree[i] -= 1
        if degree[i] == 1:
            heapq.heappush(leaves, int(i))
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)
