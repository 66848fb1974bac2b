"""Exact combinatorial objects and their algebra operations."""

from .formal import FormalSum, bilinear_product, from_json_dict, to_json_dict
from .graphs import (
    K2,
    K3,
    P3,
    Graph,
    canonical,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    junction2,
    junction3_pair,
    junction3_point,
    path_graph,
)
from .partitions import (
    Partition,
    frobenius_coords,
    hook_dimension,
    mn_character,
    p_k,
    p_rho,
    partition_join,
    partition_join3_pair,
    partition_join3_point,
    partition_product,
    partitions_of,
    sigma_rho,
    z_order,
)
from .perms import (
    Permutation,
    ab_shuffle,
    amalgam_cardinality,
    amalgamated_shuffle2,
    amalgamated_shuffle3_pair,
    amalgamated_shuffle3_point,
    conf,
    graphical_shuffle,
    identity,
    inversions,
    occ,
    pattern_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
