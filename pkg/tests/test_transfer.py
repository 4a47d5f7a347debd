from unittest.mock import Mock

import pytest

from gersten_lab.core.algebra import Algebra, Idempotent, quotient_by_ideal
from gersten_lab.core.builders import TriangularAlgebra
from gersten_lab.core.errors import ChainMapError, HypothesisError, InputError
from gersten_lab.core.hochschild import cohomology
from gersten_lab.transfer import (
    CornerCompression,
    GradedMap,
    check_corner_tor,
    check_homological_epi,
    check_stratifying,
    chi_corner,
    happel_maps,
    k_surjection,
    verify_chain_map,
    verify_transfer_structure,
)


@pytest.fixture
def augmentation(cyclic2: Algebra):
    fld = cyclic2.field
    return quotient_by_ideal(cyclic2, [fld.add(cyclic2.unit, cyclic2.element("g1"))])[1]


class TestHypotheses:
    def test_upper_triangular_is_stratifying(self, upper_cyclic2: TriangularAlgebra) -> None:
        report = check_stratifying(upper_cyclic2.algebra, upper_cyclic2.e, 2)
        assert report.passed, report.to_json()
        assert report.witnesses["tensor_dim"] == report.witnesses["ideal_dim"]

    @pytest.mark.parametrize("which", ["e", "e_prime"])
    def test_path_algebra_is_stratifying(self, a2: TriangularAlgebra, which: str) -> None:
        assert check_stratifying(a2.algebra, getattr(a2, which), 3).passed

    def test_zero_idempotent(self, a2: TriangularAlgebra) -> None:
        zero = Idempotent(a2.algebra, a2.algebra.field.zeros(3))
        with pytest.raises(InputError):
            check_stratifying(a2.algebra, zero, 2)

    def test_corner_tor(self, upper_cyclic2: TriangularAlgebra) -> None:
        report = check_corner_tor(upper_cyclic2.algebra, upper_cyclic2.e, 2)
        assert report.passed
        assert report.witnesses["tor_dims"][1:] == [0, 0]

    def test_augmentation_is_not_homological_epi(self, augmentation) -> None:
        report = check_homological_epi(augmentation, 2)
        assert not report.passed
        assert report.verdicts["algebra_map"] and report.verdicts["surjectivity"]
        assert report.witnesses["tor_dims"][1] == 1
        with pytest.raises(HypothesisError) as info:
            report.require()
        assert info.value.report is report

    def test_path_algebra_quotient_is_homological_epi(self, a2: TriangularAlgebra) -> None:
        _, pi = quotient_by_ideal(a2.algebra, [a2.e.coords])
        assert check_homological_epi(pi, 3).passed


class TestCompression:
    def test_chi_is_bijective_for_upper_triangular(self, upper_cyclic2: TriangularAlgebra) -> None:
        chi = chi_corner(upper_cyclic2.algebra, upper_cyclic2.e, 2)
        assert all(chi.is_bijective(n) for n in range(3))
        assert chi.ranks() == [2, 2, 2]
        assert chi.to_json()["label"] == "chi_corner"

    def test_chi_is_a_chain_map(self, a2: TriangularAlgebra) -> None:
        chi = chi_corner(a2.algebra, a2.e_prime, 2)
        assert isinstance(chi.cochain_map, CornerCompression)
        assert verify_chain_map(chi.cochain_map, 3) is None

    def test_broken_compression_is_rejected(self, upper_cyclic2: TriangularAlgebra,
                                            monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(CornerCompression, "chain_defect", lambda self, f: Mock(is_zero=False))
        with pytest.raises(ChainMapError, match="degree 0"):
            chi_corner(upper_cyclic2.algebra, upper_cyclic2.e, 1)

    def test_chi_preserves_structure(self, upper_cyclic2: TriangularAlgebra) -> None:
        chi = chi_corner(upper_cyclic2.algebra, upper_cyclic2.e, 2)
        report = verify_transfer_structure(chi, samples=2)
        assert report.passed, report.to_json()
        assert report.result("cup").instances > 0

    def test_apply_to_class(self, upper_cyclic2: TriangularAlgebra) -> None:
        chi = chi_corner(upper_cyclic2.algebra, upper_cyclic2.e, 1)
        one = chi.source.unit_class()
        assert chi(one) == chi.target.unit_class()
        with pytest.raises(InputError):
            chi(chi.target.unit_class())

    def test_shape_is_checked(self, cyclic2: Algebra) -> None:
        table = cohomology(cyclic2, bound=1)
        with pytest.raises(InputError):
            GradedMap(table, table, (cyclic2.field.eye(3), cyclic2.field.eye(2)), "bad")


class TestSurjection:
    def test_path_algebra_onto_vertex(self, a2: TriangularAlgebra) -> None:
        _, pi = quotient_by_ideal(a2.algebra, [a2.e.coords])
        k = k_surjection(pi, 2)
        assert k.ranks() == [1, 0, 0]
        assert k(k.source.unit_class()) == k.target.unit_class()

    def test_refused_without_tor_vanishing(self, augmentation) -> None:
        with pytest.raises(HypothesisError) as info:
            k_surjection(augmentation, 1)
        assert info.value.report.witnesses["tor_dims"][1] == 1

    def test_structure_preserved_on_upper_triangular(self, upper_cyclic2: TriangularAlgebra) -> None:
        b = upper_cyclic2.algebra
        _, pi = quotient_by_ideal(b, [upper_cyclic2.e.coords])
        k = k_surjection(pi, 2)
        assert k.is_bijective(0)
        assert verify_transfer_structure(k, samples=2).passed


class TestHappelMaps:
    def test_path_algebra(self, a2: TriangularAlgebra) -> None:
        maps = happel_maps(a2.r, a2.m.left_module(), 2)
        assert maps.ext.dims == [1, 0, 0]
        assert maps.g_matrix(0).shape == (2, 1)
        assert maps.h_matrix(0).shape == (1, 2)
        assert maps.bound == 2
