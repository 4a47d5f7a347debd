from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gersten_lab.core.errors import InputError
from gersten_lab.core.linalg import (
    EchelonBuilder,
    FieldSpec,
    Matrix,
    Subquotient,
    Subspace,
    coordinates_in_quotient,
    image_basis,
    kernel_basis,
    rank,
    rref,
    rref_reference,
    solve,
    solve_many,
)


def matrices(p: int, max_rows: int = 6, max_cols: int = 9) -> st.SearchStrategy:
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(r, c)
            )
        )
    )


class TestFieldSpec:
    def test_parse(self) -> None:
        assert FieldSpec.parse("F2") == FieldSpec.prime(2)
        assert FieldSpec.parse("gf7").p == 7
        assert FieldSpec.parse("Q").is_rational

    def test_parse_rejects_unknown(self) -> None:
        with pytest.raises(InputError):
            FieldSpec.parse("R")

    def test_rejects_composite(self) -> None:
        with pytest.raises(InputError):
            FieldSpec.prime(6)

    def test_dtypes(self) -> None:
        assert FieldSpec.prime(2).dtype == np.uint8
        assert FieldSpec.prime(65521).dtype == np.int64
        assert FieldSpec.rationals().is_object

    def test_scalar_reduction(self, f3: FieldSpec) -> None:
        assert f3.scalar(-1) == 2
        assert f3.scalar(Fraction(1, 2)) == 2
        assert f3.inv(2) == 2

    def test_fraction_without_image(self, f3: FieldSpec) -> None:
        with pytest.raises(InputError):
            f3.scalar(Fraction(1, 3))

    def test_arithmetic_does_not_overflow(self) -> None:
        fld = FieldSpec.prime(251)
        a = fld.array([250, 250])
        assert list(fld.mul(a, a)) == [1, 1]
        assert list(fld.add(a, a)) == [249, 249]
        assert list(fld.neg(a)) == [1, 1]

    def test_rational_arithmetic(self, rationals: FieldSpec) -> None:
        a = rationals.array([Fraction(1, 2), 3])
        assert list(rationals.mul(a, a)) == [Fraction(1, 4), Fraction(9)]

    def test_json(self, f3: FieldSpec, rationals: FieldSpec) -> None:
        assert FieldSpec.from_json(f3.to_json()) == f3
        assert FieldSpec.from_json(rationals.to_json()) == rationals


class TestRref:
    def test_rank_of_identity(self, f2: FieldSpec) -> None:
        assert rank(Matrix.identity(f2, 70)) == 70

    def test_known_rank(self, f3: FieldSpec) -> None:
        m = Matrix.from_rows(f3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]])
        assert rank(m) == 2

    def test_rational_rank(self, rationals: FieldSpec) -> None:
        m = Matrix.from_rows(rationals, [[1, 2], [Fraction(1, 2), 1]])
        assert rank(m) == 1

    @given(matrices(2, max_rows=8, max_cols=140))
    @settings(max_examples=40, deadline=None)
    def test_packed_gf2_matches_reference(self, data: np.ndarray) -> None:
        fld = FieldSpec.prime(2)
        m = Matrix(fld, fld.array(data))
        fast, slow = rref(m), rref_reference(m)
        assert fast.rank == slow.rank
        assert fast.pivots == slow.pivots
        assert fld.equal(fast.basis, slow.basis)

    @given(matrices(5))
    @settings(max_examples=40, deadline=None)
    def test_dense_matches_reference(self, data: np.ndarray) -> None:
        fld = FieldSpec.prime(5)
        m = Matrix(fld, fld.array(data))
        assert rref(m).pivots == rref_reference(m).pivots

    @given(matrices(3))
    @settings(max_examples=40, deadline=None)
    def test_rank_nullity(self, data: np.ndarray) -> None:
        fld = FieldSpec.prime(3)
        m = Matrix(fld, fld.array(data))
        kernel = kernel_basis(m)
        assert rank(m) + kernel.dim == m.cols
        if kernel.dim:
            assert fld.is_zero(fld.dot(m.data, kernel.basis.T))


class TestSolve:
    def test_solve_consistent(self, f3: FieldSpec) -> None:
        m = Matrix.from_rows(f3, [[1, 1, 0], [0, 1, 1]])
        b = f3.array([2, 1])
        x = solve(m, b)
        assert x is not None
        assert f3.equal(m.apply(x), b)

    def test_solve_inconsistent(self, f2: FieldSpec) -> None:
        m = Matrix.from_rows(f2, [[1, 1], [1, 1]])
        assert solve(m, f2.array([1, 0])) is None

    def test_solve_many_columns(self, rationals: FieldSpec) -> None:
        m = Matrix.from_rows(rationals, [[2, 0], [0, 3]])
        x = solve_many(m, rationals.eye(2))
        assert x is not None
        assert x[0, 0] == Fraction(1, 2) and x[1, 1] == Fraction(1, 3)

    def test_solve_shape_mismatch(self, f2: FieldSpec) -> None:
        with pytest.raises(InputError):
            solve(Matrix.identity(f2, 2), f2.array([1, 0, 1]))


class TestSubspaces:
    def test_span_and_contains(self, f2: FieldSpec) -> None:
        s = Subspace.span(f2, 3, [f2.array([1, 1, 0]), f2.array([0, 1, 1]), f2.array([1, 0, 1])])
        assert s.dim == 2
        assert s.contains(f2.array([1, 0, 1]))
        assert not s.contains(f2.array([1, 0, 0]))
        assert s.complement == [2]

    def test_span_in_dimension_zero(self, f2: FieldSpec) -> None:
        assert Subspace.span(f2, 0, []).dim == 0
        s = Subspace.span(f2, 0, [f2.zeros(0), f2.zeros(0)])
        assert s.dim == 0
        assert s.complement == []

    def test_coordinates_in_quotient(self, f3: FieldSpec) -> None:
        s = Subspace.span(f3, 3, [f3.array([1, 0, 0])])
        assert coordinates_in_quotient(3, s, f3.array([2, 0, 0])).tolist() == [0, 0]
        assert coordinates_in_quotient(3, s, f3.array([1, 2, 1])).tolist() == [2, 1]
        with pytest.raises(InputError):
            coordinates_in_quotient(2, s, f3.array([1, 2]))

    def test_coordinates_outside_raise(self, f2: FieldSpec) -> None:
        s = Subspace.span(f2, 2, [f2.array([1, 0])])
        with pytest.raises(InputError):
            s.coordinates(f2.array([0, 1]))

    def test_sum_and_inclusion(self, f3: FieldSpec) -> None:
        a = Subspace.span(f3, 3, [f3.array([1, 0, 0])])
        b = Subspace.span(f3, 3, [f3.array([0, 1, 0])])
        assert (a + b).dim == 2
        assert a.issubspace(a + b)
        assert not (a + b).issubspace(a)

    def test_image_basis(self, f3: FieldSpec) -> None:
        m = Matrix.from_rows(f3, [[1, 2], [2, 1], [0, 0]])
        assert image_basis(m).dim == rank(m)

    def test_echelon_builder(self, f3: FieldSpec) -> None:
        builder = EchelonBuilder(f3, 3)
        assert builder.add(f3.array([0, 1, 2]))
        assert builder.add(f3.array([1, 1, 1]))
        assert not builder.add(f3.array([1, 2, 0]))
        assert builder.dim == 2
        assert builder.subspace().contains(f3.array([1, 0, 2]))

    def test_subquotient(self, f2: FieldSpec) -> None:
        cycles = Subspace.span(f2, 3, [f2.array([1, 0, 0]), f2.array([0, 1, 0])])
        boundaries = Subspace.span(f2, 3, [f2.array([1, 1, 0])])
        q = Subquotient(cycles, boundaries)
        assert q.dim == 1
        c1, ok1 = q.reduce(f2.array([1, 0, 0]))
        c2, ok2 = q.reduce(f2.array([0, 1, 0]))
        assert ok1 and ok2 and f2.equal(c1, c2)
        _, ok = q.reduce(f2.array([0, 0, 1]))
        assert not ok
