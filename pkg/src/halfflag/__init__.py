"""Half-flag-transitive 2-designs: permutation groups, design checks, parameter sieve and search."""

from .action import find_block_system, is_2_transitive, is_primitive, minimal_block_system, orbit_partition, rank, subdegrees
from .data import FixtureCatalog, build_affine_biplane, builtin_example, catalog_verify, wreath_product_action
from .design import (
    IncidenceStructure,
    classify_parameters,
    flag_orbits,
    from_base_blocks,
    half_flag_dual_check,
    is_flag_transitive,
    is_half_flag_transitive,
)
from .group import PermGroup, SetOrbit, schreier_sims
from .io import read_design, read_group, read_set, write_design, write_group, write_set
from .perm import Permutation, PointSet, parse_permutation
from .pipeline import PipelineConfig, classify_sporadic_cases, product_type_search, run_case, verify_design_candidate
from .sieve import CandidateAction, ParamTuple, r_max, step1_enumerate
from .subgroups import SearchBudget, subgroups_of_index

__version__ = "0.1.0"
