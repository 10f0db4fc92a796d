"""Einstein metrics on basic classical Lie superalgebras.

Builds the classical matrix families as structure-constant tensors, derives
the algebraic Einstein system for the block-scaled left-invariant metric
family, solves it over the reals, and verifies every solution by brute-force
Ricci computation.
"""

from .curvature import (
    Connection,
    MetricParams,
    levi_civita_blockwise,
    levi_civita_koszul,
    metric_from_params,
    ricci_closed_form,
    ricci_direct,
    verify_naturally_reductive,
)
from .einstein import (
    EinsteinSolution,
    EinsteinSystem,
    build_system,
    elimination_polynomial,
    known_solutions,
    lift_real_form,
    solve,
    solve_family,
    verify_solution,
)
from .families import (
    FamilyData,
    FamilySpec,
    Realization,
    build_osp,
    build_psl,
    build_sl_super,
    catalog,
    family_data,
    family_spec,
    realize,
)
from .invariants import (
    CasimirResult,
    b_ratio,
    casimir_on_odd,
    representation_index,
    verify_killing_casimir,
    verify_trace_identities,
)
from .supercore import (
    BilinearFormMatrix,
    DecompositionRange,
    DegeneracyError,
    LieSuperAlgebra,
    LinearOperator,
    SuperBasis,
    bracket,
    check_form,
    check_super_jacobi,
    dual_basis,
    killing_form,
    supertrace,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearFormMatrix", "CasimirResult", "Connection", "DecompositionRange",
    "DegeneracyError", "EinsteinSolution", "EinsteinSystem", "FamilyData",
    "FamilySpec", "LieSuperAlgebra", "LinearOperator", "MetricParams",
    "Realization", "SuperBasis", "b_ratio", "bracket", "build_osp",
    "build_psl", "build_sl_super", "build_system", "casimir_on_odd",
    "catalog", "check_form", "check_super_jacobi", "dual_basis",
    "elimination_polynomial", "family_data", "family_spec", "killing_form",
    "known_solutions", "levi_civita_blockwise", "levi_civita_koszul",
    "lift_real_form", "metric_from_params", "realize",
    "representation_index", "ricci_closed_form", "ricci_direct", "solve",
    "solve_family", "supertrace", "verify_killing_casimir",
    "verify_naturally_reductive", "verify_solution", "verify_trace_identities",
]
