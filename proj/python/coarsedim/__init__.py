"""Budgeted coarse-dimension toolkit.

Finite metric spaces and their entourages, the four equivalent budgeted
asymptotic-dimension solvers, finite etale groupoids with dynamic
asymptotic dimension, partitions of unity, and amenability witnesses.
"""

from ._core import (  # noqa: F401
    Action,
    Entourage,
    Group,
    Groupoid,
    Space,
    alexandrov,
    amenability_pipeline,
    arrow_power,
    arrow_product_set,
    box_allocate,
    check_amenability,
    choose_parameters,
    classify,
    cover_stats,
    crosscheck_lemma412,
    crosscheck_thm416,
    dad_action,
    dad_groupoid,
    entourage_compose,
    entourage_invert,
    equiv,
    equivariance_defect,
    exact_witness,
    gen_cayley_ball,
    gen_cycle,
    gen_dirsum,
    gen_grid,
    gen_path,
    generate_subgroupoid,
    greedy_families,
    pair_groupoid,
    preceq_witness,
    solve_ad,
    solve_coarse,
    solve_families,
    solve_rmult,
    stay_in_set,
    transformation_groupoid,
)

__version__ = "0.1.0"
