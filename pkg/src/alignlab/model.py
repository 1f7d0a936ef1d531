"""Correlated random graph pairs with a planted relabeling.

Each unordered vertex pair independently receives one of four categories:

* two-colored (edge in both graphs)  with probability lam * s / n,
* blue-only  (edge in the first)     with probability lam * (1-s) / n,
* red-only   (edge in the second)    with probability lam * (1-s) / n,
* non-edge                           with probability 1 - lam * (2-s) / n.

The second graph is then relabeled with an independent uniform planted
permutation to form the observed pair. Sampling is a pure function of
(params, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graphs import SparseGraph, intersect, relabel
from .permutations import Permutation, random_permutation
from .rng import derived_rng

__all__ = [
    "TWO_COLORED",
    "BLUE_ONLY",
    "RED_ONLY",
    "CATEGORY_CHARS",
    "ModelParams",
    "CorrelatedInstance",
    "sample_instance",
    "log_joint_weight",
    "log_joint_full",
]

TWO_COLORED = 0
BLUE_ONLY = 1
RED_ONLY = 2
CATEGORY_CHARS = "TBR"


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: vertex count n, mean degree lam, correlation s."""

    n: int
    lam: float
    s: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError("lam must be finite and non-negative")
        if not 0.0 <= self.s <= 1.0:
            raise ValueError("s must lie in [0, 1]")
        if self.lam * (2.0 - self.s) > self.n:
            raise ValueError("lam * (2 - s) / n exceeds 1: category probabilities invalid")

    @property
    def mu(self) -> float:
        """Mean degree of the intersection graph, lam * s."""
        return self.lam * self.s

    def category_probabilities(self) -> tuple[float, float, float, float]:
        """(two-colored, blue-only, red-only, non-edge) per-pair probabilities."""
        p_two = self.lam * self.s / self.n
        p_mono = self.lam * (1.0 - self.s) / self.n
        return p_two, p_mono, p_mono, 1.0 - self.lam * (2.0 - self.s) / self.n


@dataclass(frozen=True)
class CorrelatedInstance:
    """A sampled correlated pair plus the planted relabeling.

    ``pairs`` holds the non-null sampled pairs as an (m, 2) int64 array with
    u < v, rows sorted; ``categories`` holds the matching category codes.
    Graph views are derived lazily and cached.
    """

    params: ModelParams
    pairs: np.ndarray
    categories: np.ndarray
    planted: Permutation
    seed: int | None = None

    def __post_init__(self):
        self.pairs.setflags(write=False)
        self.categories.setflags(write=False)

    @property
    def n(self) -> int:
        return self.params.n

    def _graph(self, mask: np.ndarray) -> SparseGraph:
        n = self.params.n
        edges = self.pairs[mask]
        keys = edges[:, 0] * n + edges[:, 1]
        return SparseGraph._from_sorted(n, edges, keys)

    @cached_property
    def blue_graph(self) -> SparseGraph:
        """First graph: two-colored plus blue-only pairs."""
        return self._graph(self.categories != RED_ONLY)

    @cached_property
    def red_graph(self) -> SparseGraph:
        """Second graph before relabeling: two-colored plus red-only pairs."""
        return self._graph(self.categories != BLUE_ONLY)

    @cached_property
    def intersection(self) -> SparseGraph:
        """Shared structure: exactly the two-colored pairs."""
        return self._graph(self.categories == TWO_COLORED)

    @cached_property
    def observed(self) -> SparseGraph:
        """Second graph as observed, relabeled with the planted permutation."""
        return relabel(self.red_graph, self.planted)

    @cached_property
    def blue_only_edges(self) -> np.ndarray:
        return self.pairs[self.categories == BLUE_ONLY]

    @cached_property
    def red_only_edges(self) -> np.ndarray:
        return self.pairs[self.categories == RED_ONLY]

    def category_counts(self) -> tuple[int, int, int]:
        c = np.bincount(self.categories, minlength=3)
        return int(c[TWO_COLORED]), int(c[BLUE_ONLY]), int(c[RED_ONLY])


def _decode_pair_keys(keys: np.ndarray, n: int) -> np.ndarray:
    """Map linear upper-triangle indices to (u, v) rows with u < v.

    Pairs are indexed row-wise: pair (u, v) has index
    u*n - u*(u+1)/2 + (v - u - 1). The float solve for the row can be off
    by one, so it is corrected exactly in integer arithmetic.
    """
    twon1 = 2 * n - 1
    u = np.floor((twon1 - np.sqrt(twon1 * twon1 - 8.0 * keys)) / 2.0).astype(np.int64)
    u = np.clip(u, 0, n - 2)

    def row_offset(r):
        return (r * twon1 - r * r) >> 1  # r*(2n-1-r)/2, exact in int64

    for _ in range(3):
        too_high = row_offset(u) > keys
        u[too_high] -= 1
        too_low = row_offset(u + 1) <= keys
        u[too_low] += 1
        if not (too_high.any() or too_low.any()):
            break
    v = keys - row_offset(u) + u + 1
    return np.stack([u, v], axis=1)


def _uniform_pair_subset(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random m-subset of the C(n, 2) vertex pairs, sorted rows.

    Draws linear indices with replacement and keeps topping up until at
    least m distinct values exist, then subsamples down to exactly m. Both
    steps are exchangeable over pair indices, so the resulting subset is
    uniform among m-subsets.
    """
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError("cannot sample more pairs than exist")
    if m == 0:
        return np.empty((0, 2), dtype=np.int64)
    pool = np.empty(0, dtype=np.int64)
    need = m
    while True:
        draw = rng.integers(0, total, size=need + 16, dtype=np.int64)
        pool = np.unique(np.concatenate([pool, draw]))
        if pool.size >= m:
            break
        need = m - pool.size
    if pool.size > m:
        sel = rng.choice(pool.size, size=m, replace=False)
        pool = np.sort(pool[sel])
    return _decode_pair_keys(pool, n)


def sample_instance(params: ModelParams, seed: int) -> CorrelatedInstance:
    """Draw a correlated pair and an independent uniform planted permutation.

    The number of non-null pairs is binomial over all C(n, 2) pairs; a
    uniform subset of that size is drawn and each selected pair receives a
    category from the conditional distribution. This is distributionally
    identical to assigning all C(n, 2) pairs independently, but runs in
    time proportional to the number of sampled pairs.
    """
    n = params.n
    p_any = params.lam * (2.0 - params.s) / n
    total = n * (n - 1) // 2

    rng_pairs = derived_rng(seed, "pairs")
    m = int(rng_pairs.binomial(total, p_any)) if total > 0 and p_any > 0 else 0
    pairs = _uniform_pair_subset(n, m, rng_pairs)

    rng_cats = derived_rng(seed, "categories")
    denom = 2.0 - params.s
    cond = np.array([params.s / denom, (1.0 - params.s) / denom, (1.0 - params.s) / denom])
    categories = rng_cats.choice(3, size=m, p=cond).astype(np.int8)

    rng_perm = derived_rng(seed, "planted")
    planted = random_permutation(n, rng_perm)

    return CorrelatedInstance(
        params=params, pairs=pairs, categories=categories, planted=planted, seed=seed
    )


def _check_weight_domain(params: ModelParams):
    if not 0.0 < params.s < 1.0:
        raise ValueError("edge weight requires s strictly inside (0, 1)")
    if params.n <= params.lam * (2.0 - params.s):
        raise ValueError("edge weight requires n > lam * (2 - s)")


def log_joint_weight(g: SparseGraph, h: SparseGraph, params: ModelParams) -> float:
    """Part of the joint log-likelihood that depends on the pair (g, h)
    only through their number of shared edges.

    Equals e(g ^ h) * log(s (n - lam (2-s)) / (lam (1-s)^2)). Two pairs
    with equal edge counts and equal shared-edge counts get equal full
    log-likelihoods, so preserving the shared-edge count preserves the
    posterior weight.
    """
    _check_weight_domain(params)
    shared = intersect(g, h).num_edges
    base = params.s * (params.n - params.lam * (2.0 - params.s)) / (
        params.lam * (1.0 - params.s) ** 2
    )
    return shared * math.log(base)


def log_joint_full(g: SparseGraph, h: SparseGraph, params: ModelParams) -> float:
    """Full joint log-likelihood of observing the colored pair (g, h)."""
    _check_weight_domain(params)
    if params.lam <= 0:
        raise ValueError("full likelihood requires lam > 0")
    n = params.n
    shared = intersect(g, h).num_edges
    e_union = g.num_edges + h.num_edges - shared
    e_sym = e_union - shared
    p_two = params.lam * params.s / n
    p_mono = params.lam * (1.0 - params.s) / n
    p_none = 1.0 - params.lam * (2.0 - params.s) / n
    return (
        shared * math.log(p_two)
        + e_sym * math.log(p_mono)
        + (n * (n - 1) // 2 - e_union) * math.log(p_none)
    )
