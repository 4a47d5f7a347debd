"""Validated builders for the algebras the toolkit works with."""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, AlgebraMap, Idempotent, algebra_from_products, ground_algebra, opposite, require_valid
from .errors import InputError
from .linalg import FieldSpec
from .modules import Bimodule, ModuleFD

LOGGER = logging.getLogger(__name__)


def group_element_name(exponents: tuple[int, ...]) -> str:
    parts = []
    for i, a in enumerate(exponents):
        if a == 1:
            parts.append(f"g{i + 1}")
        elif a > 1:
            parts.append(f"g{i + 1}^{a}")
    return "*".join(parts) if parts else "1"


def elementary_abelian_group_algebra(fld: FieldSpec, p: int, r: int) -> Algebra:
    """Group algebra of ``(Z/p)^r`` over a field of characteristic ``p``.

    Group elements are exponent tuples in lexicographic order, most significant
    generator first; the identity is basis element 0.

    Raises:
        InputError: If the characteristic of ``fld`` is not ``p`` or ``r < 0``.
    """
    if fld.characteristic != p:
        raise InputError(f"group algebra of (Z/{p})^{r} needs characteristic {p}, got {fld.name}")
    if r < 0:
        raise InputError("rank must be non-negative")
    elements = list(itertools.product(range(p), repeat=r))
    index = {g: i for i, g in enumerate(elements)}
    d = len(elements)
    mul = fld.zeros((d, d, d))
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            mul[i, j, index[tuple((a + b) % p for a, b in zip(g, h))]] = 1
    unit = fld.zeros(d)
    unit[0] = 1
    name = f"F{p}Z{p}" if r == 1 else f"F{p}Z{p}^{r}"
    return Algebra(fld, d, tuple(group_element_name(g) for g in elements), mul, unit, name)


@dataclass(frozen=True, eq=False)
class TriangularAlgebra:
    """``B = (R M; 0 S)`` on the basis ``R``, then ``M``, then ``S``."""

    algebra: Algebra
    e: Idempotent
    e_prime: Idempotent
    r: Algebra
    s: Algebra
    m: Bimodule

    @property
    def m_slice(self) -> slice:
        return slice(self.r.dim, self.r.dim + self.m.dim)


def triangular_algebra(r: Algebra, s: Algebra, m: Bimodule, name: str = "B") -> TriangularAlgebra:
    """Triangular matrix algebra with canonical idempotents ``e = 1_R`` and ``e' = 1_S``.

    Raises:
        InputError: On a field mismatch or when ``m`` is not an ``(R, S)``-bimodule.
    """
    if r.field != s.field or m.field != r.field:
        raise InputError(f"field mismatch between {r.name}, {s.name} and the bimodule")
    if m.left_algebra is not r or m.right_algebra is not s:
        raise InputError("bimodule is not over the given algebras")
    problem = m.validate()
    if problem:
        raise InputError(f"invalid bimodule: {problem}")
    fld = r.field
    dr, dm, ds = r.dim, m.dim, s.dim
    om, os_ = dr, dr + dm
    d = dr + dm + ds
    mul = fld.zeros((d, d, d))
    mul[:dr, :dr, :dr] = r.mul
    mul[:dr, om:os_, om:os_] = m.left.transpose(0, 2, 1)
    mul[om:os_, os_:, om:os_] = m.right.transpose(2, 0, 1)
    mul[os_:, os_:, os_:] = s.mul
    unit = np.concatenate([r.unit, fld.zeros(dm), s.unit])
    names = tuple(f"R.{x}" for x in r.basis_names) + tuple(f"M.{k}" for k in range(dm)) \
        + tuple(f"S.{x}" for x in s.basis_names)
    b = require_valid(Algebra(fld, d, names, mul, unit, name))
    e = fld.zeros(d)
    e[:dr] = r.unit
    e2 = fld.zeros(d)
    e2[os_:] = s.unit
    LOGGER.debug("triangular algebra %s: dims R=%d M=%d S=%d", name, dr, dm, ds)
    return TriangularAlgebra(b, Idempotent(b, e), Idempotent(b, e2), r, s, m)


def one_point_extension(r: Algebra, m: ModuleFD, name: str = "") -> TriangularAlgebra:
    """``R[M] = (R M; 0 K)`` with ``K`` acting on ``M`` by scalars."""
    if m.algebra is not r:
        raise InputError("module is not over the given algebra")
    fld = r.field
    k = ground_algebra(fld)
    bimod = Bimodule(r, k, m.dim, m.action, fld.eye(m.dim)[None, :, :])
    return triangular_algebra(r, k, bimod, name or f"{r.name}[M]")


def path_algebra_a2(fld: FieldSpec) -> TriangularAlgebra:
    """``(K K; 0 K)``, the path algebra of the quiver with one arrow."""
    k = ground_algebra(fld)
    return triangular_algebra(k, k, Bimodule.regular(k), "KA2")


def upper_triangular_over(r: Algebra) -> TriangularAlgebra:
    """``(R R; 0 R)`` with the regular bimodule."""
    return triangular_algebra(r, r, Bimodule.regular(r), f"T2({r.name})")


E0_BASIS = ("id_X", "g", "h", "gh", "alpha", "beta", "id_Y")


def e0_category_algebra(fld: FieldSpec) -> Algebra:
    """Category algebra of the EI-category with objects X, Y.

    ``Aut(X) = {id_X, g, h, gh}`` is a Klein four group and ``Hom(X, Y) = {alpha, beta}``
    with ``alpha h = beta g = alpha`` and ``alpha g = beta h = beta``. The product
    ``f g`` is the composite ``f o g`` and vanishes for non-composable pairs.

    Raises:
        InputError: Outside characteristic 2.
    """
    if fld.characteristic != 2:
        raise InputError(f"the E0 category algebra is defined here over F2, got {fld.name}")
    group = [(0, 0), (1, 0), (0, 1), (1, 1)]  # id_X, g, h, gh
    products: dict[tuple[int, int], list[int]] = {}

    def basis(i: int) -> list[int]:
        v = [0] * 7
        v[i] = 1
        return v

    for i, x in enumerate(group):
        for j, y in enumerate(group):
            products[(i, j)] = basis(group.index(((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)))
    for parity in (0, 1):
        for j, y in enumerate(group):
            # precomposing with g flips alpha and beta, h fixes them
            products[(4 + parity, j)] = basis(4 + (parity ^ y[0]))
        products[(6, 4 + parity)] = basis(4 + parity)
    products[(6, 6)] = basis(6)
    return require_valid(algebra_from_products(fld, E0_BASIS, products, [1, 0, 0, 0, 0, 0, 1], "KE0"))


@dataclass(frozen=True, eq=False)
class OnePointData:
    """The pair ``(R, M)`` presenting KE0 through a one-point extension."""

    r: Algebra
    m: ModuleFD

    def extension(self) -> TriangularAlgebra:
        return one_point_extension(self.r, self.m, "KE0'")


def e0_one_point_data(fld: FieldSpec) -> OnePointData:
    """``R = F2(Z2 x Z2)`` and ``M = F2 Z2``, where ``g1`` swaps the basis of M and ``g2`` fixes it."""
    r = elementary_abelian_group_algebra(fld, 2, 2)
    swap = fld.array([[0, 1], [1, 0]])
    eye = fld.eye(2)
    # R basis order: 1, g2, g1, g1*g2
    action = np.stack([eye, eye, swap, swap])
    m = ModuleFD(r, 2, action)
    problem = m.validate()
    if problem:
        raise InputError(problem)
    return OnePointData(r, m)


def e0_isomorphism(fld: FieldSpec) -> AlgebraMap:
    """Basis permutation from KE0 onto the opposite of ``R[M]`` for the pair of :func:`e0_one_point_data`.

    With products read as composites, ``Hom(X, Y)`` is a right module over the
    group algebra, so KE0 matches ``R[M]`` with the order of multiplication
    reversed. Hochschild cohomology is the same for an algebra and its opposite.
    """
    target = opposite(e0_one_point_data(fld).extension().algebra)
    source = e0_category_algebra(fld)
    # id_X, g, h, gh, alpha, beta, id_Y -> R.1, R.g1, R.g2, R.g1*g2, M.0, M.1, S.1
    images = [0, 2, 1, 3, 4, 5, 6]
    matrix = fld.zeros((7, 7))
    for src, dst in enumerate(images):
        matrix[dst, src] = 1
    return AlgebraMap(source, target, matrix)
