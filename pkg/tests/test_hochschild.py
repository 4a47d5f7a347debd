import numpy as np
import pytest

from gersten_lab.core.algebra import Algebra, algebra_from_products, center, opposite
from gersten_lab.core.builders import TriangularAlgebra, e0_one_point_data, elementary_abelian_group_algebra
from gersten_lab.core.errors import BudgetExceededError, InputError, NotACocycleError, TruncationError
from gersten_lab.core.hochschild import (
    Cochain,
    CohomologyTable,
    apply_differential,
    bracket,
    circle,
    cohomology,
    cup,
    differential_matrix,
    fundamental_formula_defect,
    random_cochain,
    square,
    structure_tensors,
    verify_gerstenhaber_axioms,
)
from gersten_lab.core.linalg import FieldSpec
from gersten_lab.core.modules import Bimodule
from gersten_lab.core.resources import THREADS_ENV, ResourceBudget, budget_scope


@pytest.fixture(scope="module")
def cyclic3_table() -> CohomologyTable:
    return cohomology(elementary_abelian_group_algebra(FieldSpec.prime(3), 3, 1), bound=3)


class TestComplex:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_matrix_matches_contraction(self, klein: Algebra, n: int) -> None:
        rng = np.random.default_rng(n)
        reg = Bimodule.regular(klein)
        f = random_cochain(klein, reg, n, rng)
        dn = differential_matrix(klein, reg, n)
        assert klein.field.equal(dn.apply(f.flat), apply_differential(f).flat)

    @pytest.mark.parametrize("field_name,p", [("F3", 3), ("F2", 2)])
    def test_d_squared_is_zero(self, field_name: str, p: int) -> None:
        a = elementary_abelian_group_algebra(FieldSpec.parse(field_name), p, 1)
        reg = Bimodule.regular(a)
        rng = np.random.default_rng(7)
        for n in range(3):
            f = random_cochain(a, reg, n, rng)
            assert apply_differential(apply_differential(f)).is_zero

    def test_d_squared_over_rationals(self, rationals: FieldSpec) -> None:
        # Q[x]/(x^2)
        dual = algebra_from_products(rationals, ["1", "x"], {(0, 0): [1, 0], (0, 1): [0, 1], (1, 0): [0, 1]},
                                     [1, 0], "D")
        reg = Bimodule.regular(dual)
        d0, d1 = differential_matrix(dual, reg, 0), differential_matrix(dual, reg, 1)
        assert (d1 @ d0).is_zero()

    def test_degree_is_checked(self, cyclic2: Algebra) -> None:
        reg = Bimodule.regular(cyclic2)
        with pytest.raises(InputError):
            Cochain(cyclic2, reg, 2, cyclic2.field.zeros((2, 2)))
        with pytest.raises(InputError):
            differential_matrix(cyclic2, reg, -1)


class TestCohomology:
    def test_cyclic2(self, cyclic2: Algebra) -> None:
        assert cohomology(cyclic2, bound=5).dims == [2] * 6

    def test_klein(self, klein_table: CohomologyTable) -> None:
        assert klein_table.dims == [4, 8, 12, 16]

    def test_cyclic3(self, cyclic3_table: CohomologyTable) -> None:
        assert cyclic3_table.dims == [3, 3, 3, 3]

    def test_path_algebra(self, a2: TriangularAlgebra) -> None:
        assert cohomology(a2.algebra, bound=3).dims == [1, 0, 0, 0]

    def test_upper_triangular(self, upper_cyclic2: TriangularAlgebra) -> None:
        assert cohomology(upper_cyclic2.algebra, bound=2).dims == [2, 2, 2]

    def test_degree_zero_is_center(self, ke0: Algebra) -> None:
        assert cohomology(ke0, bound=1).dim(0) == center(ke0).dim

    def test_zero_coefficients(self, cyclic2: Algebra) -> None:
        table = cohomology(cyclic2, Bimodule.zero(cyclic2, cyclic2), bound=2)
        assert table.dims == [0, 0, 0]
        assert not table.regular

    def test_negative_bound(self, cyclic2: Algebra) -> None:
        with pytest.raises(InputError):
            cohomology(cyclic2, bound=-1)

    def test_to_json(self, klein_table: CohomologyTable) -> None:
        doc = klein_table.to_json()
        assert doc["bound"] == 3
        assert [row["dim"] for row in doc["degrees"]] == [4, 8, 12, 16]

    @pytest.mark.slow
    def test_e0_matches_opposite_one_point_extension(self, ke0: Algebra, f2: FieldSpec) -> None:
        ext = opposite(e0_one_point_data(f2).extension().algebra)
        assert cohomology(ke0, bound=2).dims == cohomology(ext, bound=2).dims


class TestClasses:
    def test_reduce_with_witness(self, cyclic3_table: CohomologyTable) -> None:
        table = cyclic3_table
        fld = table.field
        rng = np.random.default_rng(3)
        a, reg = table.algebra, table.coefficients
        rep = table.basis_class(2, 1).cochain()
        h = random_cochain(a, reg, 1, rng)
        f = rep + apply_differential(h)
        red = table.reduce(f, witness=True)
        assert red.cls == table.basis_class(2, 1)
        assert red.witness is not None
        assert fld.equal(apply_differential(red.witness).values, apply_differential(h).values)

    def test_not_a_cocycle(self, klein_table: CohomologyTable) -> None:
        a, reg = klein_table.algebra, klein_table.coefficients
        f = Cochain(a, reg, 1, a.field.zeros((4, 4)))
        f.values[0, 0] = 1
        with pytest.raises(NotACocycleError) as info:
            klein_table.reduce(f)
        assert not Cochain(a, reg, 2, info.value.coboundary.reshape(4, 4, 4)).is_zero

    def test_truncation(self, klein_table: CohomologyTable) -> None:
        x = klein_table.basis_class(2, 0)
        with pytest.raises(TruncationError):
            klein_table.cup(x, x)
        with pytest.raises(TruncationError):
            klein_table.dim(4)

    def test_square_needs_even_degree(self, cyclic3_table: CohomologyTable) -> None:
        with pytest.raises(InputError):
            cyclic3_table.square(cyclic3_table.basis_class(1, 0))

    def test_unit_acts_trivially(self, cyclic3_table: CohomologyTable) -> None:
        one = cyclic3_table.unit_class()
        for n in range(4):
            for x in cyclic3_table.basis(n):
                assert cyclic3_table.cup(one, x) == x

    def test_degree_zero_brackets_land_below_zero(self, klein_table: CohomologyTable) -> None:
        for x in klein_table.basis(0):
            for y in klein_table.basis(0):
                assert klein_table.bracket(x, y).degree == -1

    def test_products_need_regular_coefficients(self, cyclic2: Algebra) -> None:
        table = cohomology(cyclic2, Bimodule.zero(cyclic2, cyclic2), bound=1)
        with pytest.raises(InputError):
            table.unit_class()


class TestOperations:
    def test_cup_degrees(self, cyclic2: Algebra) -> None:
        reg = Bimodule.regular(cyclic2)
        rng = np.random.default_rng(1)
        f, g = random_cochain(cyclic2, reg, 1, rng), random_cochain(cyclic2, reg, 2, rng)
        assert cup(f, g).degree == 3
        assert circle(f, g).degree == 2
        assert bracket(f, g).degree == 2

    def test_circle_with_degree_zero_outer(self, cyclic2: Algebra) -> None:
        reg = Bimodule.regular(cyclic2)
        f = Cochain.constant(cyclic2, reg, cyclic2.unit)
        g = random_cochain(cyclic2, reg, 2, np.random.default_rng(0))
        assert circle(f, g).is_zero and circle(f, g).degree == 1

    def test_square_rejects_odd(self, cyclic2: Algebra) -> None:
        reg = Bimodule.regular(cyclic2)
        with pytest.raises(InputError):
            square(random_cochain(cyclic2, reg, 1, np.random.default_rng(0)))

    def test_fundamental_formula(self) -> None:
        fld = FieldSpec.prime(3)
        a = elementary_abelian_group_algebra(fld, 3, 1)
        reg = Bimodule.regular(a)
        rng = np.random.default_rng(2024)
        for _ in range(100):
            m, n = (int(x) for x in rng.integers(0, 4, size=2))
            f, g = random_cochain(a, reg, m, rng), random_cochain(a, reg, n, rng)
            assert fundamental_formula_defect(f, g).is_zero, (m, n)

    def test_fundamental_formula_over_path_algebra(self, a2: TriangularAlgebra) -> None:
        b = a2.algebra
        reg = Bimodule.regular(b)
        rng = np.random.default_rng(5)
        for m in range(4):
            for n in range(4):
                f, g = random_cochain(b, reg, m, rng), random_cochain(b, reg, n, rng)
                assert fundamental_formula_defect(f, g).is_zero, (m, n)


class TestAxioms:
    def test_klein(self, klein_table: CohomologyTable) -> None:
        report = verify_gerstenhaber_axioms(klein_table, samples=3)
        assert report.passed, report.to_json()
        assert report.result("G1").instances > 0
        assert report.result("G8").instances > 0

    def test_square_identity_covers_degree_zero(self, klein_table: CohomologyTable) -> None:
        report = verify_gerstenhaber_axioms(klein_table, samples=3)
        # pools are basis plus 3 samples: 7 in degree 0, 15 in degree 2, for (0, 2) and (2, 0)
        assert report.result("G9").instances == 2 * 7 * 15
        assert report.result("G9").passed

    def test_path_algebra(self, a2: TriangularAlgebra) -> None:
        report = verify_gerstenhaber_axioms(cohomology(a2.algebra, bound=3), samples=2)
        assert report.passed, report.to_json()
        assert report.result("unit").instances > 0

    @pytest.mark.slow
    def test_ke0(self, ke0: Algebra) -> None:
        report = verify_gerstenhaber_axioms(cohomology(ke0, bound=3), samples=2)
        assert report.passed, report.to_json()
        assert report.result("G9").instances > 0

    def test_cyclic3(self, cyclic3_table: CohomologyTable) -> None:
        report = verify_gerstenhaber_axioms(cyclic3_table, samples=4)
        assert report.passed, report.to_json()
        assert not report.result("G3").to_json()["vacuous"]

    def test_structure_tensor_shapes(self, cyclic3_table: CohomologyTable) -> None:
        st = structure_tensors(cyclic3_table)
        cup_12 = st.cup_tensor(1, 2)
        assert cup_12 is not None and cup_12.shape == (3, 3, 3)
        assert st.cup_tensor(2, 2) is None
        br = st.bracket_tensor(2, 2)
        assert br is not None and br.shape == (3, 3, 3)

    def test_report_json(self, cyclic3_table: CohomologyTable) -> None:
        doc = verify_gerstenhaber_axioms(cyclic3_table, samples=1).to_json()
        assert doc["bound"] == 3
        assert {entry["name"] for entry in doc["axioms"]} >= {"assoc", "unit", "G5", "G10"}


class TestResources:
    def test_budget_names_degree(self, klein: Algebra) -> None:
        with pytest.raises(BudgetExceededError) as info:
            cohomology(klein, bound=3, budget=ResourceBudget(1024))
        assert info.value.degree == 2

    def test_budget_scope(self, klein: Algebra) -> None:
        with budget_scope(ResourceBudget(1024)):
            with pytest.raises(BudgetExceededError):
                differential_matrix(klein, Bimodule.regular(klein), 2)
        assert differential_matrix(klein, Bimodule.regular(klein), 2).rows == 256

    def test_thread_count_does_not_change_results(self, klein: Algebra, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(THREADS_ENV, "1")
        single = cohomology(klein, bound=2)
        monkeypatch.setenv(THREADS_ENV, "4")
        multi = cohomology(klein, bound=2)
        for n in range(3):
            assert klein.field.equal(single.representatives(n), multi.representatives(n))
