"""Block automorphisms of the intersection graph and their edge statistics.

A block permutation shuffles the members of each small-tree class with an
independent uniform permutation and maps vertices through the canonical
labelings, fixing every vertex on the giant or on oversize components.
The result is always an automorphism of the intersection graph.

Relabeling the blue graph with such an automorphism can still create extra
double edges: a blue-only pair whose image lands on a red-only pair. The
family generator rejects draws until it collects permutations that create
none, which preserves the shared-edge count exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .components import ComponentPartition, decompose, small_tree_cutoff
from .graphs import intersect, relabel
from .model import CorrelatedInstance
from .permutations import Permutation, fix_count
from .rng import derived_rng, derived_seed
from .theory import giant_fraction
from .trees import TreeCensus, build_census

__all__ = [
    "BlockPermutation",
    "assemble_block_permutation",
    "build_automorphism",
    "EdgePartition",
    "extra_double_edges",
    "common_fixed_edges",
    "common_fixed_edges_zone",
    "generate_family",
    "FamilyExhaustedError",
    "verify_family",
    "FamilyReport",
    "blockwise_fix_count",
]


@dataclass(frozen=True)
class BlockPermutation:
    """A tree-blockwise automorphism with its per-class member shuffles."""

    sigma: Permutation
    tree_perms: dict[str, np.ndarray]
    seed: int | None = None


def assemble_block_permutation(
    census: TreeCensus, tree_perms: dict[str, np.ndarray], seed: int | None = None
) -> BlockPermutation:
    """Node permutation induced by explicit per-class member shuffles.

    For each class, member i is mapped onto member tree_perms[code][i] by
    sending the vertex at canonical position p to the target member's
    vertex at position p. Vertices outside small trees stay fixed.
    """
    forward = np.arange(census.n, dtype=np.int64)
    frozen: dict[str, np.ndarray] = {}
    for code, cls in census.classes.items():
        shuffle = np.asarray(tree_perms[code], dtype=np.int64)
        if shuffle.shape != (cls.count,):
            raise ValueError(f"shuffle for class {code!r} must have length {cls.count}")
        src = cls.members
        dst = cls.members[shuffle]
        forward[src.ravel()] = dst.ravel()
        keep = shuffle.copy()
        keep.setflags(write=False)
        frozen[code] = keep
    return BlockPermutation(sigma=Permutation(forward), tree_perms=frozen, seed=seed)


def build_automorphism(census: TreeCensus, seed: int) -> BlockPermutation:
    """Draw one random block automorphism of the censused graph.

    Every class gets an independent uniform shuffle of its members, sampled
    on its own (seed, class code) stream, so the result does not depend on
    class processing order.
    """
    draws: dict[str, np.ndarray] = {}
    for code, cls in census.classes.items():
        rng = derived_rng(seed, "class", code)
        draws[code] = rng.permutation(cls.count).astype(np.int64)
    return assemble_block_permutation(census, draws, seed=seed)


class EdgePartition:
    """Vertex pairs that block permutations can move, split by boundary.

    ``inner`` pairs have both endpoints outside the fixed core (giant plus
    oversize components); ``boundary`` pairs have exactly one endpoint
    inside it. Pair sets are huge, so they are kept implicit behind the
    vertex mask; counts are exact and small instances can materialize the
    pairs for cross-checks.
    """

    __slots__ = ("n", "fixed_mask", "n_fixed", "n_outside")

    def __init__(self, fixed_mask: np.ndarray):
        mask = np.array(fixed_mask, dtype=bool, copy=True)
        mask.setflags(write=False)
        object.__setattr__(self, "fixed_mask", mask)
        object.__setattr__(self, "n", mask.shape[0])
        object.__setattr__(self, "n_fixed", int(np.count_nonzero(mask)))
        object.__setattr__(self, "n_outside", mask.shape[0] - int(np.count_nonzero(mask)))

    def __setattr__(self, name, value):
        raise AttributeError("EdgePartition is immutable")

    @classmethod
    def from_partition(cls, partition: ComponentPartition) -> "EdgePartition":
        return cls(partition.fixed_mask)

    @property
    def inner_count(self) -> int:
        return self.n_outside * (self.n_outside - 1) // 2

    @property
    def boundary_count(self) -> int:
        return self.n_outside * self.n_fixed

    @property
    def total_count(self) -> int:
        return self.inner_count + self.boundary_count

    def side(self, u: int, v: int) -> str | None:
        """'inner', 'boundary', or None for pairs with both endpoints fixed."""
        a = bool(self.fixed_mask[u])
        b = bool(self.fixed_mask[v])
        if a and b:
            return None
        return "boundary" if (a or b) else "inner"

    def contains_pairs(self, pairs: np.ndarray) -> np.ndarray:
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        return ~(self.fixed_mask[pairs[:, 0]] & self.fixed_mask[pairs[:, 1]])

    def materialize(self, limit: int = 2000) -> np.ndarray:
        """All pairs of the zone as an array, for small-n cross-checks."""
        if self.n > limit:
            raise ValueError("refusing to materialize a huge pair set")
        u, v = np.triu_indices(self.n, k=1)
        keep = ~(self.fixed_mask[u] & self.fixed_mask[v])
        return np.stack([u[keep], v[keep]], axis=1)


def extra_double_edges(
    block: BlockPermutation, inst: CorrelatedInstance, zone: EdgePartition
) -> int:
    """Number of blue-only pairs in the zone whose image is a red-only pair.

    Because the permutation is an automorphism of the intersection graph
    and fixes the core pointwise, this equals the total growth of the
    shared-edge count caused by relabeling the blue graph.
    """
    blue = inst.blue_only_edges
    if blue.size == 0:
        return 0
    inside = zone.contains_pairs(blue)
    if not inside.any():
        return 0
    img = block.sigma.forward[blue[inside]]
    lo = np.minimum(img[:, 0], img[:, 1])
    hi = np.maximum(img[:, 0], img[:, 1])
    keys = lo * inst.n + hi
    red = inst.red_only_edges
    if red.size == 0:
        return 0
    red_keys = red[:, 0] * inst.n + red[:, 1]
    idx = np.searchsorted(red_keys, keys)
    valid = idx < red_keys.size
    idx = np.minimum(idx, red_keys.size - 1)
    return int(np.count_nonzero(valid & (red_keys[idx] == keys)))


def common_fixed_edges(pairs: np.ndarray, perms: list[Permutation]) -> int:
    """Pairs in the explicit set whose unordered image agrees across all
    permutations. A single permutation fixes every pair vacuously."""
    if not perms:
        raise ValueError("at least one permutation is required")
    n = perms[0].n
    for p in perms:
        if p.n != n:
            raise ValueError("size mismatch")
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(perms) == 1 or pairs.size == 0:
        return pairs.shape[0]
    ref = None
    agree = np.ones(pairs.shape[0], dtype=bool)
    for p in perms:
        img = p.forward[pairs]
        lo = np.minimum(img[:, 0], img[:, 1])
        hi = np.maximum(img[:, 0], img[:, 1])
        key = lo * n + hi
        if ref is None:
            ref = key
        else:
            agree &= key == ref
    return int(np.count_nonzero(agree))


def common_fixed_edges_zone(zone: EdgePartition, perms: list[Permutation]) -> int:
    """Common fixed pairs over the implicit zone, without enumerating it.

    All permutations must fix the zone's core pointwise (block permutations
    do). A pair can only be commonly fixed when either both endpoints map
    identically under every permutation, or the pair is flipped by each
    permutation that does not fix it; candidates for the flipped case are
    2-cycles of the relative permutations, which keeps the work near-linear.
    """
    if not perms:
        raise ValueError("at least one permutation is required")
    n = zone.n
    for p in perms:
        if p.n != n:
            raise ValueError("size mismatch")
    outside = ~zone.fixed_mask
    if len(perms) == 1:
        return zone.total_count

    f1 = perms[0].forward
    aligned = outside.copy()
    rel = []
    for p in perms[1:]:
        phi = p.inverse[f1]
        rel.append(phi)
        aligned &= phi == np.arange(n, dtype=np.int64)
    n_aligned = int(np.count_nonzero(aligned))
    total = n_aligned * zone.n_fixed + n_aligned * (n_aligned - 1) // 2

    # flipped candidates: 2-cycles of any relative permutation, outside the core
    idx = np.arange(n, dtype=np.int64)
    cand: set[tuple[int, int]] = set()
    for phi in rel:
        two = (phi[phi] == idx) & (phi != idx) & outside
        for u in np.flatnonzero(two):
            v = phi[u]
            if u < v:
                cand.add((int(u), int(v)))
    for u, v in cand:
        ok = True
        for p in perms[1:]:
            if p.forward[u] == f1[u] and p.forward[v] == f1[v]:
                continue
            if p.forward[u] == f1[v] and p.forward[v] == f1[u]:
                continue
            ok = False
            break
        if ok:
            total += 1
    return total


class FamilyExhaustedError(RuntimeError):
    """Rejection sampling ran out of attempts before collecting the family."""

    def __init__(self, requested: int, accepted: int, attempts: int):
        rate = accepted / attempts if attempts else 0.0
        super().__init__(
            f"collected {accepted}/{requested} permutations in {attempts} attempts "
            f"(acceptance rate {rate:.4f})"
        )
        self.requested = requested
        self.accepted = accepted
        self.attempts = attempts
        self.acceptance_rate = rate


def default_max_attempts(p: int, lam: float, s: float) -> int:
    """Attempt budget sized to roughly ten times the expected need."""
    return math.ceil(10 * p * math.exp(lam * lam * (1 - s) * (1 - s) / 2.0))


def generate_family(
    inst: CorrelatedInstance,
    p: int,
    seed: int,
    max_attempts: int | None = None,
    *,
    census: TreeCensus | None = None,
    partition: ComponentPartition | None = None,
) -> list[BlockPermutation]:
    """Collect p independent block automorphisms that create no extra double edge.

    Draws are made on per-attempt sub-seeds and kept when they leave the
    shared-edge count exactly unchanged. Raises FamilyExhaustedError with
    acceptance-rate diagnostics when the attempt budget runs out.
    """
    if p < 1:
        raise ValueError("family size must be at least 1")
    if max_attempts is None:
        max_attempts = default_max_attempts(p, inst.params.lam, inst.params.s)
    if partition is None:
        partition = decompose(inst.intersection, small_tree_cutoff(inst.n))
    if census is None:
        census = build_census(partition, inst.intersection)
    zone = EdgePartition.from_partition(partition)

    family: list[BlockPermutation] = []
    attempts = 0
    while len(family) < p and attempts < max_attempts:
        block = build_automorphism(census, derived_seed(seed, "attempt", attempts))
        attempts += 1
        if extra_double_edges(block, inst, zone) == 0:
            family.append(block)
    if len(family) < p:
        raise FamilyExhaustedError(p, len(family), attempts)
    return family


@dataclass(frozen=True)
class FamilyReport:
    """Verification record for a generated family."""

    intersection_edges: int
    member_edge_counts: list[int]
    edges_preserved: list[bool]
    pair_margins: list[tuple[int, int, float]]
    fix_bound: float
    pairs_ok: bool

    @property
    def all_ok(self) -> bool:
        return all(self.edges_preserved) and self.pairs_ok


def verify_family(
    family: list[BlockPermutation], inst: CorrelatedInstance, slack: float
) -> FamilyReport:
    """Check exact shared-edge preservation and pairwise closeness bounds.

    Each member must satisfy e(relabeled blue ^ red) == e(blue ^ red)
    exactly; each pair of members must agree on at most
    (giant_fraction(mu) + slack) * n vertices.
    """
    base = inst.intersection.num_edges
    counts = []
    preserved = []
    for block in family:
        e = intersect(relabel(inst.blue_graph, block.sigma), inst.red_graph).num_edges
        counts.append(e)
        preserved.append(e == base)

    bound = giant_fraction(inst.params.mu) + slack
    margins = []
    pairs_ok = True
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            frac = fix_count(family[i].sigma, family[j].sigma) / inst.n
            margins.append((i, j, frac))
            if frac > bound:
                pairs_ok = False
    return FamilyReport(
        intersection_edges=base,
        member_edge_counts=counts,
        edges_preserved=preserved,
        pair_margins=margins,
        fix_bound=bound,
        pairs_ok=pairs_ok,
    )


def blockwise_fix_count(
    a: BlockPermutation,
    b: BlockPermutation,
    census: TreeCensus,
    partition: ComponentPartition,
) -> int:
    """Agreement count computed blockwise: fixed core plus, per class, the
    size times the agreement of the two member shuffles. Must equal the
    direct count; used as a structural cross-check."""
    total = int(np.count_nonzero(partition.fixed_mask))
    for code, cls in census.classes.items():
        total += cls.k * int(np.count_nonzero(a.tree_perms[code] == b.tree_perms[code]))
    return total
