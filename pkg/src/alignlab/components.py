"""Connected-component decomposition of sparse graphs.

The decomposition classifies every component as the giant (largest
component, flagged only when it contains a cycle), a small tree (tree on
at most ``cutoff`` vertices), or leftover "oversize" structure (trees
above the cutoff and non-giant cyclic components). Block relabelings act
only on the small trees; the giant and oversize vertices stay fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .graphs import SparseGraph

__all__ = ["small_tree_cutoff", "ComponentPartition", "decompose"]


def small_tree_cutoff(n: int) -> int:
    """Size cutoff floor(sqrt(ln n)) below which tree components are
    considered small, clamped to at least 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return max(1, int(math.sqrt(math.log(n))))


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components of a graph with giant / small-tree / oversize split.

    ``labels`` maps vertex -> component id; ``sizes`` and ``edge_counts``
    are per-component. ``giant_index`` is the id of the largest component
    when that component is cyclic (ties broken towards the component
    containing the smallest vertex id), else None.
    """

    n: int
    cutoff: int
    labels: np.ndarray
    sizes: np.ndarray
    edge_counts: np.ndarray
    giant_index: int | None

    def __post_init__(self):
        for arr in (self.labels, self.sizes, self.edge_counts):
            arr.setflags(write=False)

    @property
    def num_components(self) -> int:
        return self.sizes.shape[0]

    @cached_property
    def is_tree(self) -> np.ndarray:
        """Per component: induced edge count equals size - 1."""
        return self.edge_counts == self.sizes - 1

    @cached_property
    def small_tree_components(self) -> np.ndarray:
        """Boolean per component: tree of size at most the cutoff, not the giant."""
        mask = self.is_tree & (self.sizes <= self.cutoff)
        if self.giant_index is not None:
            mask = mask.copy()
            mask[self.giant_index] = False
        return mask

    @cached_property
    def grouped_vertices(self) -> tuple[np.ndarray, np.ndarray]:
        """(order, starts): vertices grouped by component id, ascending inside
        each group; component c owns order[starts[c]:starts[c+1]]."""
        order = np.argsort(self.labels, kind="stable")
        starts = np.zeros(self.num_components + 1, dtype=np.int64)
        np.cumsum(self.sizes, out=starts[1:])
        return order, starts

    def component_vertices(self, comp: int) -> np.ndarray:
        order, starts = self.grouped_vertices
        return order[starts[comp] : starts[comp + 1]]

    @cached_property
    def giant_vertices(self) -> np.ndarray:
        if self.giant_index is None:
            return np.empty(0, dtype=np.int64)
        return self.component_vertices(self.giant_index)

    @cached_property
    def oversize_vertices(self) -> np.ndarray:
        """Vertices outside the giant that are not on small trees."""
        keep = ~self.small_tree_components
        if self.giant_index is not None:
            keep = keep.copy()
            keep[self.giant_index] = False
        return np.flatnonzero(keep[self.labels]).astype(np.int64)

    @cached_property
    def fixed_mask(self) -> np.ndarray:
        """Boolean per vertex: on the giant or on an oversize component.

        These are exactly the vertices every block relabeling fixes.
        """
        mask = ~self.small_tree_components[self.labels]
        mask.setflags(write=False)
        return mask

    @cached_property
    def small_tree_vertex_count(self) -> int:
        return self.n - int(np.count_nonzero(self.fixed_mask))


def decompose(g: SparseGraph, cutoff: int | None = None) -> ComponentPartition:
    """Label connected components and classify them against the size cutoff.

    The largest component is flagged as the giant only when it contains a
    cycle; a lone large tree is oversize, not giant. Ties for the largest
    size go to the component containing the smallest vertex id.
    """
    n = g.n
    if cutoff is None:
        cutoff = small_tree_cutoff(n)
    if g.num_edges:
        u = g.edges[:, 0]
        v = g.edges[:, 1]
        data = np.ones(len(u), dtype=np.int8)
        adj = coo_matrix((data, (u, v)), shape=(n, n))
        ncomp, labels = _cc(adj, directed=False)
        labels = labels.astype(np.int64)
    else:
        ncomp = n
        labels = np.arange(n, dtype=np.int64)

    sizes = np.bincount(labels, minlength=ncomp)
    edge_counts = (
        np.bincount(labels[g.edges[:, 0]], minlength=ncomp)
        if g.num_edges
        else np.zeros(ncomp, dtype=np.int64)
    )

    giant_index: int | None = None
    if ncomp > 0:
        max_size = int(sizes.max())
        candidates = np.flatnonzero(sizes == max_size)
        if candidates.size == 1:
            best = int(candidates[0])
        else:
            # smallest contained vertex id wins the tie
            first_vertex = np.full(ncomp, n, dtype=np.int64)
            np.minimum.at(first_vertex, labels, np.arange(n, dtype=np.int64))
            best = int(candidates[np.argmin(first_vertex[candidates])])
        if edge_counts[best] >= sizes[best]:
            giant_index = best

    return ComponentPartition(
        n=n,
        cutoff=int(cutoff),
        labels=labels,
        sizes=sizes.astype(np.int64),
        edge_counts=edge_counts.astype(np.int64),
        giant_index=giant_index,
    )
