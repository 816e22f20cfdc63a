"""Exact-arithmetic toolkit for planar geometric maximal operators."""

from .dyadic import (
    DyadicTree,
    Node,
    boundary_paths,
    build_tree,
    children_of,
    dump_family,
    dump_tree,
    full_tree,
    leaves_of,
    load_family,
    load_tree,
    normalize_root,
    parent_of,
    splitting_number,
    tree_from_nodes,
)
from .figs import (
    FigWitness,
    analytic_split,
    check_fig_definition,
    complete_fig,
    extract_fig_tree,
    feasible_pairs,
)
from .slabs import (
    Slab,
    contains_slab,
    dump_slab,
    intersection_measure,
    interval_union_length,
    load_slab,
    member_S_family,
    realize_node,
    scale_translate,
    shifted_copy,
    translate,
    union_measure,
    widen5,
)
from .covering import (
    EstimateViolation,
    austin_cover,
    check_dilation_bound,
    check_geometric_estimate,
    check_translation_bound,
    dilate_interval,
)
from .kakeya import (
    B2Assembly,
    KakeyaCertificate,
    KakeyaSample,
    RatioStats,
    WitnessFamily,
    assemble_B2,
    bateman_witness,
    certify_assembled,
    certify_bateman,
    eval_maximal_lower,
    kakeya_level_and_bound,
    ratio_statistics,
    sample_random_set,
    verify_superlevel,
    witness_parallelogram,
)
from .bases import (
    CANTOR,
    BasisSpec,
    RectSpec,
    bottom_half_assignment,
    generate_basis,
    leaf_assignment,
    meets_cantor,
    node_from_ratio,
    rect_to_node,
    sine_claim_check,
    split_growth_profile,
)

__version__ = "0.1.0"
