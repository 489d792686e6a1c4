"""Moment graphs, structure algebras and Braden-MacPherson sheaves for critical-level blocks."""
from .blocks import BlockWindow, alpha_up, block_window, is_closed, is_locally_closed, is_open, k_minus, k_plus
from .bm import (
    BMSheaf,
    bm_construct,
    check_soergel_assumptions,
    endomorphism_image,
    global_sections,
    hom_basis,
    hom_dimension,
)
from .exactpoly import LinearForm, Polynomial, reduce_mod_linear
from .moment_graph import (
    Edge,
    MomentGraph,
    build_moment_graph,
    delta_condition_check,
    export_graph,
    gkm_check,
    import_graph,
    make_graph,
)
from .roots import RootSystem, Weight, build_root_system, dot_reflect, leq
from .sections import (
    ModuleMap,
    SectionModule,
    check_projective,
    edge_intersection,
    edge_module,
    generic_rank,
    is_exact,
    is_free,
    quotient_open,
    restrict_closed,
    stalk,
    verma_flag_report,
)
from .structure import SectionTuple, edge_structure_basis, structure_basis, structure_dims

__version__ = "0.1.0"
