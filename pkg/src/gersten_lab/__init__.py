from .core.algebra import Algebra, Idempotent
from .core.builders import elementary_abelian_group_algebra, triangular_algebra
from .core.errors import GerstenLabError, HypothesisError, InputError
from .core.hochschild import CohomologyTable, cohomology
from .core.linalg import FieldSpec
from .gerst import GerstTable, GradedSubspace, extract_table, ideal_closure, nilpotent_homogeneous
from .les import LESReport, buchweitz_window, verify_green_solberg, verify_happel, verify_koenig_nagase
from .transfer import GradedMap, HypothesisReport, check_stratifying, chi_corner, k_surjection

__all__ = [
    "FieldSpec",
    "Algebra",
    "Idempotent",
    "elementary_abelian_group_algebra",
    "triangular_algebra",
    "CohomologyTable",
    "cohomology",
    "GradedMap",
    "HypothesisReport",
    "check_stratifying",
    "chi_corner",
    "k_surjection",
    "LESReport",
    "verify_happel",
    "verify_green_solberg",
    "verify_koenig_nagase",
    "buchweitz_window",
    "GerstTable",
    "GradedSubspace",
    "extract_table",
    "nilpotent_homogeneous",
    "ideal_closure",
    "GerstenLabError",
    "InputError",
    "HypothesisError",
]
