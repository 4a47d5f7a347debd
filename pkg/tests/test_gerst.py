import json

import numpy as np
import pytest

from gersten_lab.core.builders import elementary_abelian_group_algebra
from gersten_lab.core.errors import InputError, TruncationError
from gersten_lab.core.hochschild import CohomologyTable, cohomology
from gersten_lab.core.linalg import FieldSpec
from gersten_lab.gerst import (
    GerstTable,
    GradedSubspace,
    extract_table,
    generation_probe,
    group_algebra_generators,
    ideal_closure,
    induced_bracket_vanishes,
    nilpotent_homogeneous,
    quotient_dims,
)


@pytest.fixture(scope="module")
def klein_gerst(klein_table: CohomologyTable) -> GerstTable:
    return extract_table(klein_table)


@pytest.fixture(scope="module")
def cyclic3_coh() -> CohomologyTable:
    return cohomology(elementary_abelian_group_algebra(FieldSpec.prime(3), 3, 1), bound=3)


@pytest.fixture(scope="module")
def cyclic3_gerst(cyclic3_coh: CohomologyTable) -> GerstTable:
    return extract_table(cyclic3_coh)


class TestTable:
    def test_shapes(self, klein_gerst: GerstTable) -> None:
        assert klein_gerst.dims == (4, 8, 12, 16)
        assert klein_gerst.cup[(1, 2)].shape == (8, 12, 16)
        assert klein_gerst.bracket[(2, 2)].shape == (12, 12, 16)
        assert sorted(klein_gerst.square) == [2]

    def test_json_round_trip(self, klein_gerst: GerstTable) -> None:
        doc = json.loads(json.dumps(klein_gerst.to_json()))
        back = GerstTable.from_json(doc)
        fld = back.field
        assert back.dims == klein_gerst.dims
        assert fld.equal(back.cup[(1, 1)], klein_gerst.cup[(1, 1)])
        assert fld.equal(back.square[2], klein_gerst.square[2])

    def test_malformed_json(self, klein_gerst: GerstTable) -> None:
        doc = klein_gerst.to_json()
        del doc["dims"]
        with pytest.raises(InputError):
            GerstTable.from_json(doc)

    def test_square_of_combination(self, klein_table: CohomologyTable, klein_gerst: GerstTable) -> None:
        fld = klein_gerst.field
        rng = np.random.default_rng(11)
        for _ in range(3):
            coords = fld.random(rng, 12)
            expected = klein_table.square(klein_table.element(2, coords)).coords
            assert fld.equal(klein_gerst.square_of(2, coords), expected)

    def test_square_of_edges(self, klein_gerst: GerstTable) -> None:
        with pytest.raises(InputError):
            klein_gerst.square_of(1, klein_gerst.zero(1))
        assert klein_gerst.square_of(0, klein_gerst.basis_vector(0, 0)).size == 0

    def test_truncation(self, klein_gerst: GerstTable) -> None:
        x = klein_gerst.basis_vector(2, 0)
        with pytest.raises(TruncationError):
            klein_gerst.multiply(2, x, 2, x)
        with pytest.raises(TruncationError):
            klein_gerst.dim(4)


class TestNilpotents:
    def test_klein(self, klein_gerst: GerstTable) -> None:
        report = nilpotent_homogeneous(klein_gerst)
        assert report.subspace.dims[:2] == [3, 6]
        assert {u["degree"] for u in report.undetermined} >= {2, 3}

    def test_odd_degrees_in_odd_characteristic(self, cyclic3_gerst: GerstTable) -> None:
        report = nilpotent_homogeneous(cyclic3_gerst)
        assert report.subspace.dims[0] == 2
        assert report.subspace.dims[1] == report.subspace.dims[3] == 3

    def test_asserted(self, klein_gerst: GerstTable) -> None:
        extra = {2: [klein_gerst.basis_vector(2, 0)]}
        report = nilpotent_homogeneous(klein_gerst, asserted=extra)
        assert report.subspace.contains(2, klein_gerst.basis_vector(2, 0))


class TestClosures:
    def test_klein(self, klein_gerst: GerstTable) -> None:
        nil = nilpotent_homogeneous(klein_gerst).subspace
        cup_ideal = ideal_closure(klein_gerst, nil, "I")
        assert quotient_dims(klein_gerst, cup_ideal) == [1, 2, 3, 4]
        assert ideal_closure(klein_gerst, nil, "WeakG") == cup_ideal
        assert ideal_closure(klein_gerst, nil, "FullG") == GradedSubspace.full(klein_gerst)

    def test_cyclic3(self, cyclic3_gerst: GerstTable) -> None:
        nil = nilpotent_homogeneous(cyclic3_gerst).subspace
        cup_ideal = ideal_closure(cyclic3_gerst, nil, "I")
        assert quotient_dims(cyclic3_gerst, cup_ideal) == [1, 0, 1, 0]
        assert ideal_closure(cyclic3_gerst, nil, "FullG") == GradedSubspace.full(cyclic3_gerst)
        assert induced_bracket_vanishes(cyclic3_gerst, cup_ideal).failures == 0

    def test_closure_contains_generators(self, klein_gerst: GerstTable) -> None:
        s = GradedSubspace.spanned(klein_gerst, {1: [klein_gerst.basis_vector(1, 0)]})
        closed = ideal_closure(klein_gerst, s, "LieI")
        assert s.issubspace(closed)

    def test_zero_is_closed(self, klein_gerst: GerstTable) -> None:
        zero = GradedSubspace.zero(klein_gerst)
        for kind in ("I", "LieI", "WeakG", "FullG"):
            assert ideal_closure(klein_gerst, zero, kind) == zero

    def test_unknown_kind(self, klein_gerst: GerstTable) -> None:
        with pytest.raises(InputError):
            ideal_closure(klein_gerst, GradedSubspace.zero(klein_gerst), "Poisson")

    def test_span_beyond_bound(self, klein_gerst: GerstTable) -> None:
        with pytest.raises(TruncationError):
            GradedSubspace.spanned(klein_gerst, {4: []})


class TestGeneration:
    def test_klein_probe(self, klein_gerst: GerstTable) -> None:
        nil = nilpotent_homogeneous(klein_gerst).subspace
        report = generation_probe(klein_gerst, ideal_closure(klein_gerst, nil, "I"))
        assert report.new_generators == [1, 2, 0, 0]
        assert report.to_json()["note"] == "bounded evidence, not a proof"

    def test_probe_beyond_bound(self, klein_gerst: GerstTable) -> None:
        with pytest.raises(TruncationError):
            generation_probe(klein_gerst, GradedSubspace.zero(klein_gerst), bound=4)


class TestGroupGenerators:
    def test_klein(self, klein_table: CohomologyTable) -> None:
        gens = group_algebra_generators(klein_table, 2, 2)
        one = klein_table.unit_class()
        zero = klein_table.zero(0)
        for i, x in enumerate(gens.x):
            assert klein_table.cup(x, x) == zero
            for j, y in enumerate(gens.y):
                assert klein_table.bracket(x, y) == (one if i == j else zero)

    def test_cyclic3(self, cyclic3_coh: CohomologyTable) -> None:
        gens = group_algebra_generators(cyclic3_coh, 3, 1)
        (x,), (y,) = gens.x, gens.y
        assert cyclic3_coh.bracket(x, y) == cyclic3_coh.unit_class()
        assert len(gens.to_json()["y"]) == 1

    def test_wrong_algebra(self, klein_table: CohomologyTable) -> None:
        with pytest.raises(InputError):
            group_algebra_generators(klein_table, 3, 1)
