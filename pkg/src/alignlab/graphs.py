"""Simple undirected graphs on {0, ..., n-1} stored as sorted edge arrays.

Edges are unordered pairs held as an (m, 2) int64 array with u < v in each
row, rows sorted lexicographically. The canonical row order makes every
iteration deterministic and lets set operations run on encoded int64 keys.
"""

from __future__ import annotations

import numpy as np

from .permutations import Permutation

__all__ = ["SparseGraph", "relabel", "intersect", "union", "sym_diff"]


def _canonical_rows(edges: np.ndarray) -> np.ndarray:
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    return np.stack([lo, hi], axis=1)


class SparseGraph:
    """Immutable sparse graph: vertex count plus a canonical edge array."""

    __slots__ = ("n", "edges", "_keys")

    def __init__(self, n: int, edges=None, *, validate: bool = True, _keys=None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if edges is None:
            arr = np.empty((0, 2), dtype=np.int64)
        else:
            arr = np.array(edges, dtype=np.int64, copy=True).reshape(-1, 2)
        if validate and arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("edge endpoint outside [0, n)")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValueError("self-loops are not allowed")
            arr = _canonical_rows(arr)
            keys = arr[:, 0] * n + arr[:, 1]
            order = np.argsort(keys, kind="stable")
            keys = keys[order]
            arr = arr[order]
            if np.any(np.diff(keys) == 0):
                raise ValueError("duplicate edges are not allowed")
        elif _keys is not None:
            keys = np.asarray(_keys, dtype=np.int64)
        else:
            keys = arr[:, 0] * n + arr[:, 1] if arr.size else np.empty(0, dtype=np.int64)
        arr.setflags(write=False)
        keys.setflags(write=False)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", arr)
        object.__setattr__(self, "_keys", keys)

    def __setattr__(self, name, value):
        raise AttributeError("SparseGraph is immutable")

    @classmethod
    def _from_sorted(cls, n: int, edges: np.ndarray, keys: np.ndarray) -> "SparseGraph":
        # trusted path: rows already canonical and key-sorted
        return cls(n, edges, validate=False, _keys=keys)

    @classmethod
    def from_keys(cls, n: int, keys: np.ndarray) -> "SparseGraph":
        keys = np.asarray(keys, dtype=np.int64)
        edges = np.stack([keys // n, keys % n], axis=1) if keys.size else np.empty((0, 2), np.int64)
        return cls._from_sorted(n, edges, keys)

    @classmethod
    def empty(cls, n: int) -> "SparseGraph":
        return cls(n)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def edge_keys(self) -> np.ndarray:
        """Sorted int64 keys u * n + v, one per edge."""
        return self._keys

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        lo, hi = (u, v) if u < v else (v, u)
        key = lo * self.n + hi
        i = np.searchsorted(self._keys, key)
        return i < self._keys.size and self._keys[i] == key

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.num_edges:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def adjacency(self) -> list[np.ndarray]:
        """Neighbor arrays, ascending within each list."""
        nbr: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbr[u].append(v)
            nbr[v].append(u)
        return [np.array(sorted(a), dtype=np.int64) for a in nbr]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def __eq__(self, other):
        if not isinstance(other, SparseGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._keys, other._keys)

    def __repr__(self):
        return f"SparseGraph(n={self.n}, m={self.num_edges})"


def relabel(g: SparseGraph, sigma: Permutation) -> SparseGraph:
    """Graph with every edge (u, v) replaced by (sigma(u), sigma(v))."""
    if sigma.n != g.n:
        raise ValueError("permutation size does not match vertex count")
    if g.num_edges == 0:
        return SparseGraph.empty(g.n)
    mapped = _canonical_rows(sigma.forward[g.edges])
    keys = mapped[:, 0] * g.n + mapped[:, 1]
    order = np.argsort(keys, kind="stable")
    return SparseGraph._from_sorted(g.n, mapped[order], keys[order])


def _check_same_n(g: SparseGraph, h: SparseGraph):
    if g.n != h.n:
        raise ValueError("graphs must share the vertex count")


def intersect(g: SparseGraph, h: SparseGraph) -> SparseGraph:
    _check_same_n(g, h)
    return SparseGraph.from_keys(g.n, np.intersect1d(g.edge_keys, h.edge_keys, assume_unique=True))


def union(g: SparseGraph, h: SparseGraph) -> SparseGraph:
    _check_same_n(g, h)
    return SparseGraph.from_keys(g.n, np.union1d(g.edge_keys, h.edge_keys))


def sym_diff(g: SparseGraph, h: SparseGraph) -> SparseGraph:
    _check_same_n(g, h)
    return SparseGraph.from_keys(g.n, np.setxor1d(g.edge_keys, h.edge_keys, assume_unique=True))
