import pytest

from gersten_lab.core.algebra import Algebra, validate
from gersten_lab.core.builders import (
    E0_BASIS,
    TriangularAlgebra,
    e0_category_algebra,
    e0_isomorphism,
    e0_one_point_data,
    elementary_abelian_group_algebra,
    group_element_name,
    one_point_extension,
    triangular_algebra,
)
from gersten_lab.core.errors import InputError
from gersten_lab.core.linalg import FieldSpec
from gersten_lab.core.modules import Bimodule, ModuleFD


class TestGroupAlgebras:
    @pytest.mark.parametrize("p,r,dim", [(2, 0, 1), (2, 1, 2), (2, 2, 4), (3, 1, 3), (2, 3, 8)])
    def test_dimensions(self, p: int, r: int, dim: int) -> None:
        a = elementary_abelian_group_algebra(FieldSpec.prime(p), p, r)
        assert a.dim == dim
        assert validate(a).ok
        assert a.basis_names[0] == "1"

    def test_wrong_characteristic(self, f3: FieldSpec) -> None:
        with pytest.raises(InputError):
            elementary_abelian_group_algebra(f3, 2, 1)

    def test_names(self) -> None:
        assert group_element_name((0, 0)) == "1"
        assert group_element_name((1, 2)) == "g1*g2^2"

    def test_cyclic3_is_truncated_polynomial(self, f3: FieldSpec) -> None:
        a = elementary_abelian_group_algebra(f3, 3, 1)
        x = f3.sub(a.element("g1"), a.unit)
        x2 = a.multiply(x, x)
        assert not f3.is_zero(x2)
        assert f3.is_zero(a.multiply(x2, x))


class TestTriangular:
    def test_path_algebra(self, a2: TriangularAlgebra) -> None:
        b = a2.algebra
        assert b.dim == 3
        assert b.basis_names == ("R.1", "M.0", "S.1")
        assert a2.m_slice == slice(1, 2)
        fld = b.field
        assert fld.equal(fld.add(a2.e.coords, a2.e_prime.coords), b.unit)

    def test_arrow_products(self, a2: TriangularAlgebra) -> None:
        b = a2.algebra
        fld = b.field
        arrow = b.basis_vector(1)
        assert fld.equal(b.multiply(a2.e.coords, arrow), arrow)
        assert fld.equal(b.multiply(arrow, a2.e_prime.coords), arrow)
        assert fld.is_zero(b.multiply(arrow, a2.e.coords))

    def test_upper_triangular(self, upper_cyclic2: TriangularAlgebra) -> None:
        assert upper_cyclic2.algebra.dim == 6
        assert validate(upper_cyclic2.algebra).ok

    def test_bimodule_over_other_algebras(self, cyclic2: Algebra, klein: Algebra) -> None:
        with pytest.raises(InputError):
            triangular_algebra(cyclic2, cyclic2, Bimodule.regular(klein))

    def test_one_point_extension_needs_its_module(self, cyclic2: Algebra, klein: Algebra) -> None:
        with pytest.raises(InputError):
            one_point_extension(cyclic2, ModuleFD.regular(klein))


class TestE0:
    def test_basis(self, ke0: Algebra) -> None:
        assert ke0.basis_names == E0_BASIS
        assert ke0.dim == 7

    def test_composites(self, ke0: Algebra) -> None:
        fld = ke0.field
        alpha, beta = ke0.element("alpha"), ke0.element("beta")
        assert fld.equal(ke0.multiply(alpha, ke0.element("h")), alpha)
        assert fld.equal(ke0.multiply(beta, ke0.element("g")), alpha)
        assert fld.equal(ke0.multiply(alpha, ke0.element("g")), beta)
        assert fld.is_zero(ke0.multiply(ke0.element("g"), alpha))
        assert fld.equal(ke0.multiply(ke0.element("id_Y"), beta), beta)

    def test_only_over_f2(self, f3: FieldSpec) -> None:
        with pytest.raises(InputError):
            e0_category_algebra(f3)

    def test_one_point_presentation(self, f2: FieldSpec) -> None:
        data = e0_one_point_data(f2)
        ext = data.extension()
        assert ext.algebra.dim == 7
        assert ext.r.dim == 4 and ext.m.dim == 2

    def test_isomorphism_with_opposite_extension(self, f2: FieldSpec) -> None:
        iso = e0_isomorphism(f2)
        assert iso.check_isomorphism() is None
