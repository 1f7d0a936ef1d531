"""alignlab: a simulation laboratory for partial alignment of correlated
sparse random graph pairs.

The library samples correlated graph pairs with a planted relabeling,
decomposes their shared structure into components, groups small tree
components by canonical code, builds random tree-blockwise automorphisms,
measures the extra double edges such relabelings create, and wraps the
whole pipeline in a deterministic Monte Carlo experiment harness with an
exhaustive matching oracle for tiny instances.
"""

from .components import ComponentPartition, decompose, small_tree_cutoff
from .graphs import SparseGraph, intersect, relabel, sym_diff, union
from .model import (
    BLUE_ONLY,
    CATEGORY_CHARS,
    RED_ONLY,
    TWO_COLORED,
    CorrelatedInstance,
    ModelParams,
    log_joint_full,
    log_joint_weight,
    sample_instance,
)
from .permutations import Permutation, fix_count, overlap_equivariant, random_permutation
from .theory import (
    cayley_count,
    class_frequency,
    expected_class_count,
    extra_double_edge_rate,
    giant_fraction,
    poisson_pmf,
)
from .trees import (
    TreeCensus,
    TreeClass,
    all_labeled_trees,
    build_census,
    canonical_tree_code,
    tree_automorphism_count,
)
from .automorphisms import (
    BlockPermutation,
    EdgePartition,
    FamilyExhaustedError,
    FamilyReport,
    assemble_block_permutation,
    blockwise_fix_count,
    build_automorphism,
    common_fixed_edges,
    common_fixed_edges_zone,
    extra_double_edges,
    generate_family,
    verify_family,
)
from .matching import MapResult, graph_automorphism_count, is_connected, map_estimate

__version__ = "0.1.0"
