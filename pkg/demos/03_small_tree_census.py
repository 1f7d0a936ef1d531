"""Census of small tree components, grouped by canonical code.

Outside the giant component, almost every vertex of a sparse random graph
sits on a small tree. Trees of equal shape get equal balanced-parenthesis
codes; the census counts each shape and fixes a canonical labeling per
member, which is what the block automorphisms permute later.
"""

from alignlab import (
    ModelParams,
    build_census,
    class_frequency,
    decompose,
    expected_class_count,
    sample_instance,
)
from alignlab.components import small_tree_cutoff
from alignlab.trees import all_labeled_trees, canonical_tree_code

# every unlabeled tree shape on up to 5 vertices
print("tree shapes by size (code, automorphisms):")
for k in range(1, 6):
    shapes = {}
    for edges in all_labeled_trees(k):
        code, _, aut = canonical_tree_code(range(k), edges)
        shapes[code] = aut
    line = ", ".join(f"{code} (a={aut})" for code, aut in sorted(shapes.items()))
    print(f"  k={k}: {line}")

n, mu = 100_000, 0.5
inst = sample_instance(ModelParams(n=n, lam=mu, s=1.0), seed=11)
cutoff = small_tree_cutoff(n)
part = decompose(inst.intersection, cutoff)
census = build_census(part, inst.intersection)

print(f"\nn={n}, mean degree {mu}, size cutoff {cutoff}")
print("code        k  count      n*f(k)     alpha")
for code, cls in census.classes.items():
    floor = n * class_frequency(cls.k, mu)
    alpha = expected_class_count(n, cls.k, mu, cls.automorphisms)
    print(f"{code:10s}  {cls.k}  {cls.count:8d}  {floor:9.1f}  {alpha:9.1f}")

total = census.total_small_vertices
print(f"\nsmall-tree vertices: {total} of {n} "
      f"({total / n:.4f}); giant {part.giant_vertices.size}, "
      f"oversize {part.oversize_vertices.size}")

# canonical labelings make members interchangeable: the first two members
# of any class are isomorphic via their position rows
for cls in census.classes.values():
    if cls.k >= 2 and cls.count >= 2:
        print(f"\nclass {cls.code}: member 0 positions {cls.members[0].tolist()}, "
              f"member 1 positions {cls.members[1].tolist()}")
        break
