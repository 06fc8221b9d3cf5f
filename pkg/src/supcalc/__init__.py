"""Exact convex analysis for polyhedral functions in low dimension.

The package computes Fenchel conjugates, eps-subdifferentials, and
eps-normal sets in exact rational arithmetic, and ships an executable
catalog of supremum-calculus identities together with brute-force
oracles, a seeded instance generator, and a CLI.
"""
from .calculus import (
    CoHullValue,
    DecompositionWitness,
    SimplexWeights,
    check_qc1,
    check_qc2,
    co_hull_conjugates,
    conjugate_on_interior,
    decompose,
    eps_normal_intersection,
    eps_subdiff_rhs_basic,
    inf_convolution_value,
    rhs_basic_covers,
    rhs_basic_strict_margin,
    rhs_basic_within,
    sum_functions,
)
from .errors import (
    CapacityError,
    DimensionMismatchError,
    EmptySetError,
    ExtendedArithmeticError,
    GenerationError,
    HypothesesNotMet,
    IdentityFalsified,
    ImproperFunctionError,
    InvalidParameterError,
    LPInternalError,
    SchemaError,
    SupcalcError,
)
from .family import FunctionFamily, sup_function
from .functions import PolyhedralFunction, eps_normal_set
from .generator import GeneratorParams, generate
from .identities import (
    CATALOG,
    GAMMA_GRID_DEFAULT,
    IdentityEntry,
    check_identity,
    identity_ids,
)
from .lp import LPResult, LPStatus, solve_max, solve_min
from .oracles import GridSpec, brute_generators, grid_legendre, membership_audit
from .polyhedron import (
    Polyhedron,
    affine_preimage,
    cco_union,
    cone_is_trivial,
    included,
    interior_point,
    intersect,
    minkowski_sum,
    polyhedron_equal,
    recession_cone,
)
from .projection import coordinate_projection, project, project_polyhedron
from .rationals import (
    NEG_INF,
    POS_INF,
    ExtendedRational,
    Vec,
    parse_rational,
    format_rational,
    qv,
    vec,
)
from .reports import CheckReport, CheckStatus, content_digest
from .serialize import (
    Instance,
    canonical_json,
    dump_instance,
    json_digest,
    load_instance,
    loads_instance,
    report_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CapacityError",
    "CheckReport",
    "CheckStatus",
    "CoHullValue",
    "DecompositionWitness",
    "DimensionMismatchError",
    "EmptySetError",
    "ExtendedArithmeticError",
    "ExtendedRational",
    "FunctionFamily",
    "GAMMA_GRID_DEFAULT",
    "GenerationError",
    "GeneratorParams",
    "GridSpec",
    "HypothesesNotMet",
    "IdentityEntry",
    "IdentityFalsified",
    "ImproperFunctionError",
    "Instance",
    "InvalidParameterError",
    "LPInternalError",
    "LPResult",
    "LPStatus",
    "NEG_INF",
    "POS_INF",
    "PolyhedralFunction",
    "Polyhedron",
    "SchemaError",
    "SimplexWeights",
    "SupcalcError",
    "Vec",
    "affine_preimage",
    "brute_generators",
    "canonical_json",
    "cco_union",
    "check_identity",
    "check_qc1",
    "check_qc2",
    "co_hull_conjugates",
    "cone_is_trivial",
    "conjugate_on_interior",
    "content_digest",
    "coordinate_projection",
    "decompose",
    "dump_instance",
    "eps_normal_intersection",
    "eps_normal_set",
    "eps_subdiff_rhs_basic",
    "format_rational",
    "generate",
    "grid_legendre",
    "identity_ids",
    "included",
    "inf_convolution_value",
    "interior_point",
    "intersect",
    "json_digest",
    "load_instance",
    "loads_instance",
    "membership_audit",
    "minkowski_sum",
    "parse_rational",
    "polyhedron_equal",
    "project",
    "project_polyhedron",
    "qv",
    "recession_cone",
    "report_to_json",
    "rhs_basic_covers",
    "rhs_basic_strict_margin",
    "rhs_basic_within",
    "solve_max",
    "solve_min",
    "sum_functions",
    "sup_function",
    "vec",
]
