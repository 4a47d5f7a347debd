import json
from pathlib import Path
from typing import Any

import pytest

from gersten_lab.core.algebra import Algebra
from gersten_lab.core.builders import (
    TriangularAlgebra,
    e0_category_algebra,
    elementary_abelian_group_algebra,
    path_algebra_a2,
    upper_triangular_over,
)
from gersten_lab.core.hochschild import CohomologyTable, cohomology
from gersten_lab.core.linalg import FieldSpec


@pytest.fixture
def f2() -> FieldSpec:
    return FieldSpec.prime(2)


@pytest.fixture
def f3() -> FieldSpec:
    return FieldSpec.prime(3)


@pytest.fixture
def rationals() -> FieldSpec:
    return FieldSpec.rationals()


@pytest.fixture
def klein(f2: FieldSpec) -> Algebra:
    """F2(Z2 x Z2)."""
    return elementary_abelian_group_algebra(f2, 2, 2)


@pytest.fixture
def cyclic2(f2: FieldSpec) -> Algebra:
    return elementary_abelian_group_algebra(f2, 2, 1)


@pytest.fixture
def a2(f2: FieldSpec) -> TriangularAlgebra:
    return path_algebra_a2(f2)


@pytest.fixture
def upper_cyclic2(cyclic2: Algebra) -> TriangularAlgebra:
    """(R R; 0 R) over R = F2 Z2."""
    return upper_triangular_over(cyclic2)


@pytest.fixture
def ke0(f2: FieldSpec) -> Algebra:
    return e0_category_algebra(f2)


@pytest.fixture(scope="module")
def klein_table() -> CohomologyTable:
    return cohomology(elementary_abelian_group_algebra(FieldSpec.prime(2), 2, 2), bound=3)


@pytest.fixture
def algebra_doc() -> dict[str, Any]:
    """F2 Z2 written out by hand."""
    return {
        "field": {"prime": 2},
        "name": "F2Z2",
        "dim": 2,
        "basis": ["1", "g"],
        "unit": ["1", "0"],
        "mul": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]],
    }


@pytest.fixture
def broken_doc() -> dict[str, Any]:
    """Unital but not associative: a a = b and b a = a while a b = 0."""
    return {
        "field": {"prime": 2},
        "name": "broken",
        "dim": 3,
        "basis": ["1", "a", "b"],
        "unit": ["1", "0", "0"],
        "mul": [[0, 0, 0, "1"], [0, 1, 1, "1"], [0, 2, 2, "1"], [1, 0, 1, "1"], [2, 0, 2, "1"],
                [1, 1, 2, "1"], [2, 1, 1, "1"]],
    }


@pytest.fixture
def write_json(tmp_path: Path):
    def write(name: str, doc: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return path

    return write
