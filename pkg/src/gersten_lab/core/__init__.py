from .algebra import Algebra, AlgebraMap, Idempotent, corner, enveloping, opposite, quotient_by_ideal, validate
from .builders import (
    TriangularAlgebra,
    e0_category_algebra,
    e0_one_point_data,
    elementary_abelian_group_algebra,
    one_point_extension,
    path_algebra_a2,
    triangular_algebra,
    upper_triangular_over,
)
from .errors import (
    BudgetExceededError,
    ChainMapError,
    GerstenLabError,
    HypothesisError,
    InputError,
    LiftError,
    NotACocycleError,
    TruncationError,
)
from .hochschild import Cochain, CohClass, CohomologyTable, cohomology, verify_gerstenhaber_axioms
from .homalg import ExtTable, FreeResolution, TorTable, ext, free_resolution, grade, tor
from .linalg import FieldSpec, Matrix, Subspace, kernel_basis, rank, rref
from .modules import Bimodule, ModuleFD
from .resources import MemoryMonitor, ResourceBudget, budget_scope

__all__ = [
    "FieldSpec",
    "Matrix",
    "Subspace",
    "rref",
    "rank",
    "kernel_basis",
    "Algebra",
    "AlgebraMap",
    "Idempotent",
    "opposite",
    "enveloping",
    "corner",
    "quotient_by_ideal",
    "validate",
    "ModuleFD",
    "Bimodule",
    "TriangularAlgebra",
    "elementary_abelian_group_algebra",
    "triangular_algebra",
    "one_point_extension",
    "path_algebra_a2",
    "upper_triangular_over",
    "e0_category_algebra",
    "e0_one_point_data",
    "Cochain",
    "CohClass",
    "CohomologyTable",
    "cohomology",
    "verify_gerstenhaber_axioms",
    "FreeResolution",
    "ExtTable",
    "TorTable",
    "free_resolution",
    "ext",
    "tor",
    "grade",
    "ResourceBudget",
    "MemoryMonitor",
    "budget_scope",
    "GerstenLabError",
    "InputError",
    "TruncationError",
    "NotACocycleError",
    "BudgetExceededError",
    "HypothesisError",
    "LiftError",
    "ChainMapError",
]
