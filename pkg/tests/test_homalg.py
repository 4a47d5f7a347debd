import pytest

from gersten_lab.core.algebra import Algebra, AlgebraMap, enveloping, opposite
from gersten_lab.core.builders import TriangularAlgebra
from gersten_lab.core.errors import InputError
from gersten_lab.core.hochschild import cohomology
from gersten_lab.core.homalg import (
    ChainMap,
    Grade,
    bar_resolution,
    ext,
    ext_on,
    free_resolution,
    grade,
    lift,
    module_bar_resolution,
    null_homotopy,
    tor,
)
from gersten_lab.core.modules import Bimodule, ModuleFD


def trivial(a: Algebra) -> ModuleFD:
    """The one-dimensional module on which every group element acts as 1."""
    fld = a.field
    return ModuleFD(a, 1, fld.array([[[1]]] * a.dim))


class TestResolutions:
    def test_minimal_resolution_of_trivial(self, cyclic2: Algebra) -> None:
        res = free_resolution(cyclic2, trivial(cyclic2), 4)
        assert res.ranks == [1, 1, 1, 1, 1]
        assert res.verify() is None

    def test_module_bar_resolution(self, cyclic2: Algebra) -> None:
        res = module_bar_resolution(cyclic2, trivial(cyclic2), 3)
        assert res.ranks == [1, 2, 4, 8]
        assert res.verify() is None

    def test_bar_resolution_of_algebra(self, cyclic2: Algebra) -> None:
        env = enveloping(cyclic2)
        res = bar_resolution(AlgebraMap.identity(cyclic2), env, 3)
        assert res.verify() is None

    def test_module_over_other_algebra(self, cyclic2: Algebra, klein: Algebra) -> None:
        with pytest.raises(InputError):
            free_resolution(cyclic2, trivial(klein), 2)

    def test_differential_range(self, cyclic2: Algebra) -> None:
        res = free_resolution(cyclic2, trivial(cyclic2), 2)
        with pytest.raises(InputError):
            res.differential(3)


class TestExtTor:
    def test_tor_of_trivial(self, cyclic2: Algebra) -> None:
        right = ModuleFD(opposite(cyclic2), 1, cyclic2.field.array([[[1]], [[1]]]))
        assert tor(cyclic2, right, trivial(cyclic2), 3).dims == (1, 1, 1, 1)

    def test_ext_of_trivial(self, cyclic2: Algebra) -> None:
        assert ext(cyclic2, trivial(cyclic2), trivial(cyclic2), 3).dims == [1, 1, 1, 1]

    def test_ext_over_klein_four(self, klein: Algebra) -> None:
        assert ext(klein, trivial(klein), trivial(klein), 2).dims == [1, 2, 3]

    @pytest.mark.parametrize("bound", [2, 3])
    def test_ext_over_enveloping_is_hochschild(self, cyclic2: Algebra, bound: int) -> None:
        env = enveloping(cyclic2)
        reg = Bimodule.regular(cyclic2).enveloping_module(env)
        table = ext(env, reg, reg, bound, seeds=cyclic2.unit.reshape(1, -1))
        assert table.dims == cohomology(cyclic2, bound=bound).dims

    def test_ext_over_enveloping_of_path_algebra(self, a2: TriangularAlgebra) -> None:
        b = a2.algebra
        env = enveloping(b)
        reg = Bimodule.regular(b).enveloping_module(env)
        assert ext(env, reg, reg, 2, seeds=b.unit.reshape(1, -1)).dims == [1, 0, 0]

    def test_bar_resolution_ext(self, cyclic2: Algebra) -> None:
        env = enveloping(cyclic2)
        res = bar_resolution(AlgebraMap.identity(cyclic2), env, 3)
        table = ext_on(res, res.module, 2)
        assert table.dims == [2, 2, 2]
        assert table.to_json()["ranks"] == [1, 2, 4, 8]

    def test_ext_on_short_resolution(self, cyclic2: Algebra) -> None:
        res = free_resolution(cyclic2, trivial(cyclic2), 1)
        with pytest.raises(InputError):
            ext_on(res, trivial(cyclic2), 1)


class TestLifts:
    def test_lift_identity_between_resolutions(self, cyclic2: Algebra) -> None:
        m = trivial(cyclic2)
        p = free_resolution(cyclic2, m, 3)
        q = module_bar_resolution(cyclic2, m, 3)
        base = cyclic2.field.eye(1)
        chain = lift(base, p, q, 3)
        assert chain.verify(base) is None

    def test_difference_of_lifts_is_null_homotopic(self, cyclic2: Algebra) -> None:
        fld = cyclic2.field
        m = trivial(cyclic2)
        p = free_resolution(cyclic2, m, 3)
        chain = lift(fld.eye(1), p, p, 2)
        identity = []
        for i in range(3):
            r = p.rank(i)
            images = fld.zeros((r, r, cyclic2.dim))
            for g in range(r):
                images[g, g] = cyclic2.unit
            identity.append(images)
        diff = ChainMap(p, p, tuple(fld.sub(x, y) for x, y in zip(chain.images, identity)))
        homotopy = null_homotopy(diff, 2)
        assert len(homotopy) == 3

    def test_lift_too_far(self, cyclic2: Algebra) -> None:
        p = free_resolution(cyclic2, trivial(cyclic2), 1)
        with pytest.raises(InputError):
            lift(cyclic2.field.eye(1), p, p, 2)


class TestGrade:
    def test_self_injective(self, cyclic2: Algebra) -> None:
        g = grade(cyclic2, trivial(cyclic2), 2)
        assert g.value == 0 and g.is_finite

    def test_zero_module(self, cyclic2: Algebra) -> None:
        g = grade(cyclic2, ModuleFD.zero(cyclic2), 2)
        assert not g.is_finite
        assert str(g) == ">= 3"
        assert g.to_json() == ">=3"

    def test_json(self) -> None:
        assert Grade(1, 4).to_json() == 1
        assert str(Grade(1, 4)) == "1"
