"""Permutations of {0, ..., n-1} with O(1) forward and inverse lookup."""

from __future__ import annotations

import numpy as np

__all__ = [
    "Permutation",
    "random_permutation",
    "fix_count",
    "overlap_equivariant",
]


class Permutation:
    """Bijection of {0, ..., n-1}, stored together with its inverse.

    Instances are immutable: both arrays are marked read-only after
    construction and are safe to share across threads.
    """

    __slots__ = ("forward", "inverse")

    def __init__(self, forward, *, _inverse=None):
        fwd = np.array(forward, dtype=np.int64, copy=True)
        if fwd.ndim != 1:
            raise ValueError("forward map must be one-dimensional")
        n = fwd.shape[0]
        if _inverse is None:
            if n > 0 and (fwd.min() < 0 or fwd.max() >= n):
                raise ValueError("forward map has entries outside [0, n)")
            inv = np.empty(n, dtype=np.int64)
            counts = np.zeros(n, dtype=np.int64)
            np.add.at(counts, fwd, 1)
            if np.any(counts != 1):
                raise ValueError("forward map is not a bijection")
            inv[fwd] = np.arange(n, dtype=np.int64)
        else:
            inv = np.array(_inverse, dtype=np.int64, copy=True)
        fwd.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", inv)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def n(self) -> int:
        return self.forward.shape[0]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        idx = np.arange(n, dtype=np.int64)
        return cls(idx, _inverse=idx)

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        """Build from a list of cycles over 0-based vertices; fixed points may be omitted."""
        fwd = np.arange(n, dtype=np.int64)
        seen = set()
        for cycle in cycles:
            cycle = list(cycle)
            for v in cycle:
                if v in seen:
                    raise ValueError(f"vertex {v} appears in two cycles")
                seen.add(v)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                fwd[a] = b
        return cls(fwd)

    def __call__(self, i: int) -> int:
        return int(self.forward[i])

    def apply(self, vertices) -> np.ndarray:
        """Image of an array of vertices."""
        return self.forward[vertices]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) == self(other(i))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(
            self.forward[other.forward], _inverse=other.inverse[self.inverse]
        )

    def inv(self) -> "Permutation":
        return Permutation(self.inverse, _inverse=self.forward)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition; each cycle starts at its smallest element,
        cycles sorted by smallest element, fixed points included."""
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = int(self.forward[start])
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = int(self.forward[j])
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.n == other.n and bool(np.all(self.forward == other.forward))

    def __repr__(self):
        if self.n <= 16:
            return f"Permutation({self.forward.tolist()})"
        return f"Permutation(n={self.n})"


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation of {0, ..., n-1} (Fisher-Yates via the generator)."""
    return Permutation(rng.permutation(n).astype(np.int64))


def fix_count(a: Permutation, b: Permutation) -> int:
    """Number of points on which the two permutations agree."""
    if a.n != b.n:
        raise ValueError("size mismatch")
    return int(np.count_nonzero(a.forward == b.forward))


def overlap_equivariant(pi_hat: Permutation, pi_star: Permutation) -> int:
    """Overlap of an estimator with the planted permutation.

    Valid for equivariant estimators only (ones that commute with
    relabelings of the first observed graph), for which the symmetrized
    overlap collapses to a single agreement count.
    """
    return fix_count(pi_hat, pi_star)
