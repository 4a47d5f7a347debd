from typing import Any

import pytest

from gersten_lab.core.algebra import (
    Algebra,
    AlgebraMap,
    Idempotent,
    center,
    corner,
    opposite,
    quotient_by_ideal,
    tensor_algebra,
    two_sided_ideal,
    validate,
)
from gersten_lab.core.builders import TriangularAlgebra
from gersten_lab.core.errors import InputError
from gersten_lab.core.formats import algebra_from_json
from gersten_lab.core.linalg import FieldSpec


class TestAlgebra:
    def test_group_algebra_products(self, klein: Algebra) -> None:
        fld = klein.field
        g1, g2 = klein.element("g1"), klein.element("g2")
        assert klein.basis_names == ("1", "g2", "g1", "g1*g2")
        assert fld.equal(klein.multiply(g1, g1), klein.unit)
        assert fld.equal(klein.multiply(g1, g2), klein.element("g1*g2"))
        assert klein.is_commutative

    def test_unknown_element(self, klein: Algebra) -> None:
        with pytest.raises(InputError):
            klein.element("h")

    def test_shape_mismatch(self, f2: FieldSpec) -> None:
        with pytest.raises(InputError):
            Algebra(f2, 2, ("a", "b"), f2.zeros((2, 2, 3)), f2.zeros(2))

    def test_format_element(self, klein: Algebra) -> None:
        x = klein.field.add(klein.unit, klein.element("g1"))
        assert klein.format_element(x) == "1 + g1"
        assert klein.format_element(klein.field.zeros(4)) == "0"

    def test_triangular_is_not_commutative(self, a2: TriangularAlgebra) -> None:
        assert not a2.algebra.is_commutative


class TestValidate:
    def test_builders_are_valid(self, klein: Algebra, ke0: Algebra, a2: TriangularAlgebra) -> None:
        for a in (klein, ke0, a2.algebra, opposite(ke0)):
            assert validate(a).ok

    def test_first_failing_triple(self, broken_doc: dict[str, Any]) -> None:
        report = validate(algebra_from_json(broken_doc, check=False))
        assert not report.ok
        assert report.kind == "associativity"
        assert report.failure == (1, 1, 1)
        assert report.to_json()["failure"] == [1, 1, 1]

    def test_unit_failure(self, f2: FieldSpec) -> None:
        a = Algebra(f2, 1, ("x",), f2.array([[[1]]]), f2.zeros(1))
        report = validate(a)
        assert report.kind == "unit"

    def test_tensor_product_is_valid(self, cyclic2: Algebra) -> None:
        t = tensor_algebra(cyclic2, cyclic2)
        assert t.dim == 4
        assert validate(t).ok


class TestIdempotents:
    def test_rejects_non_idempotent(self, cyclic2: Algebra) -> None:
        with pytest.raises(InputError):
            Idempotent(cyclic2, cyclic2.element("g1"))

    def test_complement(self, a2: TriangularAlgebra) -> None:
        comp = a2.e.complement()
        assert a2.algebra.field.equal(comp.coords, a2.e_prime.coords)
        assert not comp.is_zero and not comp.is_one

    def test_corner_of_path_algebra(self, a2: TriangularAlgebra) -> None:
        c, data = corner(a2.algebra, a2.e)
        assert c.dim == 1
        assert validate(c).ok
        assert data.pivots == (0,)

    def test_corner_of_upper_triangular(self, upper_cyclic2: TriangularAlgebra) -> None:
        c, data = corner(upper_cyclic2.algebra, upper_cyclic2.e)
        assert c.dim == 2
        assert c.is_commutative
        fld = c.field
        assert fld.equal(data.to_ambient(c.unit), upper_cyclic2.e.coords)

    def test_corner_at_zero(self, a2: TriangularAlgebra) -> None:
        zero = Idempotent(a2.algebra, a2.algebra.field.zeros(3))
        c, _ = corner(a2.algebra, zero)
        assert c.is_zero


class TestIdealsAndMaps:
    def test_augmentation_quotient(self, cyclic2: Algebra) -> None:
        fld = cyclic2.field
        aug = fld.add(cyclic2.unit, cyclic2.element("g1"))
        assert two_sided_ideal(cyclic2, [aug]).dim == 1
        a, pi = quotient_by_ideal(cyclic2, [aug])
        assert a.dim == 1
        assert pi.verify() is None
        assert pi.is_surjective

    def test_ideal_of_arrow(self, a2: TriangularAlgebra) -> None:
        arrow = a2.algebra.basis_vector(1)
        a, pi = quotient_by_ideal(a2.algebra, [arrow])
        assert a.dim == 2
        assert a.is_commutative
        assert pi.verify() is None

    def test_map_must_be_multiplicative(self, cyclic2: Algebra) -> None:
        fld = cyclic2.field
        swap = AlgebraMap(cyclic2, cyclic2, fld.array([[0, 1], [1, 0]]))
        assert swap.verify() == "not unital"
        assert AlgebraMap.identity(cyclic2).check_isomorphism() is None

    def test_map_shape(self, cyclic2: Algebra) -> None:
        with pytest.raises(InputError):
            AlgebraMap(cyclic2, cyclic2, cyclic2.field.eye(3))

    def test_center(self, klein: Algebra, a2: TriangularAlgebra) -> None:
        assert center(klein).dim == 4
        z = center(a2.algebra)
        assert z.dim == 1
        assert z.contains(a2.algebra.unit)

    def test_center_of_e0(self, ke0: Algebra) -> None:
        z = center(ke0)
        assert z.contains(ke0.unit)
        assert z.dim < ke0.dim
        assert not z.contains(ke0.element("g"))
