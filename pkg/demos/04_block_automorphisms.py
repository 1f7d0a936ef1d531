"""Random tree-blockwise automorphisms of the shared graph.

Each class of isomorphic small trees gets an independent uniform shuffle
of its members; vertices travel through the canonical labelings. The
result always maps the shared graph onto itself and fixes the giant and
oversize vertices, yet two independent draws agree on few points beyond
that fixed core.
"""

import numpy as np

from alignlab import (
    ModelParams,
    build_automorphism,
    build_census,
    decompose,
    fix_count,
    giant_fraction,
    relabel,
    sample_instance,
)
from alignlab.components import small_tree_cutoff

n = 100_000
inst = sample_instance(ModelParams(n=n, lam=0.8, s=0.5), seed=5)
part = decompose(inst.intersection, small_tree_cutoff(n))
census = build_census(part, inst.intersection)

blocks = [build_automorphism(census, seed) for seed in (1, 2, 3)]

shared = inst.intersection
for i, block in enumerate(blocks, start=1):
    assert relabel(shared, block.sigma) == shared
    moved = int(np.count_nonzero(block.sigma.forward != np.arange(n)))
    print(f"draw {i}: automorphism of the shared graph, moves {moved} vertices")

fixed_core = int(np.count_nonzero(part.fixed_mask))
print(f"\nfixed core (giant + oversize): {fixed_core} vertices")
print("pairwise agreement of independent draws (Fix / n):")
for i in range(3):
    for j in range(i + 1, 3):
        agree = fix_count(blocks[i].sigma, blocks[j].sigma)
        print(f"  draws {i + 1},{j + 1}: {agree} points = {agree / n:.5f} of n "
              f"(fixed core alone is {fixed_core / n:.5f})")

mu = inst.params.mu
print(f"\nlimit for mean degree {mu}: giant fraction c = {giant_fraction(mu):.5f}; "
      "the agreement beyond the fixed core is a handful of coincidences")
