"""Canonical codes for small trees and the per-shape component census.

Trees are encoded bottom-up with balanced-parenthesis strings, rooted at
the tree's center (or at the lexicographically smaller of the two rooted
codes for bicentral trees). Two trees get equal codes exactly when they
are isomorphic. Alongside the code, each tree gets a canonical labeling:
an ordering of its vertices by canonical position such that composing one
member's labeling with the inverse of another's is a graph isomorphism
between any two members of the same class.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import product

import numpy as np

from .components import ComponentPartition
from .graphs import SparseGraph

__all__ = [
    "canonical_tree_code",
    "tree_automorphism_count",
    "all_labeled_trees",
    "TreeClass",
    "TreeCensus",
    "build_census",
]


def _build_adjacency(vertices, edges) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {int(v): [] for v in vertices}
    for u, v in edges:
        u, v = int(u), int(v)
        if u not in adj or v not in adj:
            raise ValueError("edge endpoint outside the component")
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _check_is_tree(adj: dict[int, list[int]], edge_count: int):
    k = len(adj)
    if edge_count != k - 1:
        raise ValueError("component is not a tree: edge count differs from size - 1")
    # k-1 edges + connected <=> tree
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != k:
        raise ValueError("component is not a tree: not connected")


def _centers(adj: dict[int, list[int]]) -> list[int]:
    """One or two tree centers found by iterative leaf peeling."""
    k = len(adj)
    if k <= 2:
        return sorted(adj)
    degree = {v: len(nb) for v, nb in adj.items()}
    layer = [v for v, d in degree.items() if d == 1]
    remaining = k
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            degree[leaf] = 0
            for w in adj[leaf]:
                if degree[w] > 1:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(adj, root: int, parent: int | None) -> tuple[str, int]:
    """Code and automorphism count of the subtree at root, away from parent.

    The automorphism count of a rooted tree is the product over nodes of
    the factorials of the multiplicities of identical child codes, times
    the child automorphism counts.
    """
    child_data = [
        _rooted_code(adj, w, root) for w in adj[root] if w != parent
    ]
    child_data.sort(key=lambda t: t[0])
    aut = 1
    run = 0
    prev = None
    for code, sub_aut in child_data:
        aut *= sub_aut
        if code == prev:
            run += 1
        else:
            run = 1
            prev = code
        aut *= run
    return "(" + "".join(code for code, _ in child_data) + ")", aut


def _arrange(adj, root: int, parent: int | None, out: list[int]):
    """Append the canonical-position order of the subtree at root.

    Children are grouped by code (groups in code order); inside a group
    the subtree rooted at the smaller vertex id comes first, which makes
    the emitted vertex sequence the lexicographically smallest one among
    all labelings consistent with the canonical code.
    """
    out.append(root)
    children = [w for w in adj[root] if w != parent]
    keyed = sorted(((_rooted_code(adj, w, root)[0], w) for w in children))
    for _, w in keyed:
        _arrange(adj, w, root, out)


def canonical_tree_code(vertices, edges) -> tuple[str, np.ndarray, int]:
    """Canonical code, canonical vertex order, and automorphism count of a tree.

    Returns ``(code, order, aut)`` where ``order[p]`` is the vertex placed
    at canonical position p. Raises ValueError when the input component is
    not a tree.
    """
    vertices = [int(v) for v in np.asarray(vertices).ravel()]
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    adj = _build_adjacency(vertices, edges)
    _check_is_tree(adj, edges.shape[0])

    centers = _centers(adj)
    if len(centers) == 1:
        root = centers[0]
        code, _ = _rooted_code(adj, root, None)
        order: list[int] = []
        _arrange(adj, root, None, order)
    else:
        c1, c2 = centers
        code1, _ = _rooted_code(adj, c1, None)
        code2, _ = _rooted_code(adj, c2, None)
        if code1 < code2:
            roots = [c1]
            code = code1
        elif code2 < code1:
            roots = [c2]
            code = code2
        else:
            roots = [c1, c2]
            code = code1
        best: list[int] | None = None
        for root in roots:
            cand: list[int] = []
            _arrange(adj, root, None, cand)
            if best is None or cand < best:
                best = cand
        order = best

    aut = _unrooted_automorphisms(adj, centers)
    return code, np.array(order, dtype=np.int64), aut


def _unrooted_automorphisms(adj, centers: list[int]) -> int:
    if len(centers) == 1:
        return _rooted_code(adj, centers[0], None)[1]
    c1, c2 = centers
    code1, aut1 = _rooted_code(adj, c1, c2)
    code2, aut2 = _rooted_code(adj, c2, c1)
    swap = 2 if code1 == code2 else 1
    return aut1 * aut2 * swap


def tree_automorphism_count(vertices, edges) -> int:
    """Automorphism count of a tree component."""
    return canonical_tree_code(vertices, edges)[2]


def all_labeled_trees(k: int):
    """Yield the edge list of every labeled tree on vertices 0..k-1.

    Enumeration runs over decoded length-(k-2) vertex sequences, so exactly
    k^(k-2) trees are produced (one for k in {1, 2}).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        yield []
        return
    if k == 2:
        yield [(0, 1)]
        return
    for seq in product(range(k), repeat=k - 2):
        degree = [1] * k
        for i in seq:
            degree[i] += 1
        leaves = [i for i in range(k) if degree[i] == 1]
        heapq.heapify(leaves)
        edges = []
        for i in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, i))
            degree[i] -= 1
            if degree[i] == 1:
                heapq.heappush(leaves, i)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((u, v))
        yield edges


@dataclass(frozen=True)
class TreeClass:
    """All components of one tree shape, with their canonical labelings.

    ``members[i]`` lists member i's vertices by canonical position, so
    member i's vertex at position p corresponds to member j's vertex
    ``members[j][p]``. Rows are sorted by their smallest vertex id.
    """

    code: str
    k: int
    members: np.ndarray
    automorphisms: int

    def __post_init__(self):
        self.members.setflags(write=False)

    @property
    def count(self) -> int:
        return self.members.shape[0]


@dataclass(frozen=True)
class TreeCensus:
    """Small-tree components of one graph grouped by canonical code.

    ``classes`` maps code -> TreeClass, ordered by (size, code).
    """

    n: int
    cutoff: int
    classes: dict[str, TreeClass]

    @property
    def total_small_vertices(self) -> int:
        return sum(cls.k * cls.count for cls in self.classes.values())

    def counts_by_code(self) -> dict[str, int]:
        return {code: cls.count for code, cls in self.classes.items()}


def build_census(partition: ComponentPartition, g: SparseGraph) -> TreeCensus:
    """Group every small tree component of g by canonical code.

    ``partition`` must come from decomposing ``g``. Classes are keyed by
    code; members within a class are ordered by smallest vertex id, so the
    census is deterministic regardless of construction order.
    """
    order, starts = partition.grouped_vertices
    small = np.flatnonzero(partition.small_tree_components)

    rows_by_code: dict[str, tuple[int, int, list[np.ndarray]]] = {}

    def push(code: str, k: int, aut: int, row: np.ndarray):
        if code not in rows_by_code:
            rows_by_code[code] = (k, aut, [])
        rows_by_code[code][2].append(row)

    sizes = partition.sizes
    # singletons and 2-vertex trees have one canonical form, handled in bulk
    ones = small[sizes[small] == 1]
    if ones.size:
        verts = np.sort(order[starts[ones]])
        rows_by_code["()"] = (1, 1, [verts.reshape(-1, 1)])
    twos = small[sizes[small] == 2]
    if twos.size:
        a = order[starts[twos]]
        b = order[starts[twos] + 1]
        rows = np.stack([a, b], axis=1)  # ascending inside each component
        rows = rows[np.argsort(rows[:, 0], kind="stable")]
        rows_by_code["(())"] = (2, 2, [rows])

    bigger = small[sizes[small] >= 3]
    if bigger.size:
        edges = g.edges
        ecomp = partition.labels[edges[:, 0]]
        eorder = np.argsort(ecomp, kind="stable")
        estarts = np.zeros(partition.num_components + 1, dtype=np.int64)
        np.cumsum(partition.edge_counts, out=estarts[1:])

        threes = bigger[sizes[bigger] == 3]
        if threes.size:
            # every 3-vertex tree is a path: root at the degree-2 vertex,
            # leaves ascending, no per-component recursion needed
            e1 = edges[eorder[estarts[threes]]]
            e2 = edges[eorder[estarts[threes] + 1]]
            a, b = e1[:, 0], e1[:, 1]
            center = np.where((a == e2[:, 0]) | (a == e2[:, 1]), a, b)
            x = order[starts[threes]]
            y = order[starts[threes] + 1]
            z = order[starts[threes] + 2]
            leaf_lo = np.where(center == x, y, x)
            leaf_hi = np.where(center == z, y, z)
            rows = np.stack([center, leaf_lo, leaf_hi], axis=1)
            rows = rows[np.argsort(rows.min(axis=1), kind="stable")]
            rows_by_code["(()())"] = (3, 2, [rows])

        for comp in bigger[sizes[bigger] >= 4]:
            vs = order[starts[comp] : starts[comp + 1]]
            es = edges[eorder[estarts[comp] : estarts[comp + 1]]]
            code, vertex_order, aut = canonical_tree_code(vs, es)
            push(code, vs.size, aut, vertex_order)

    classes: dict[str, TreeClass] = {}
    for code in sorted(rows_by_code, key=lambda c: (rows_by_code[c][0], c)):
        k, aut, rows = rows_by_code[code]
        members = rows[0] if len(rows) == 1 and rows[0].ndim == 2 else np.vstack(rows)
        members = members[np.argsort(members.min(axis=1), kind="stable")]
        classes[code] = TreeClass(code=code, k=k, members=members, automorphisms=aut)

    return TreeCensus(n=partition.n, cutoff=partition.cutoff, classes=classes)
