"""Truncated Gerstenhaber algebras: nilpotents, ideals and quotients.

A :class:`GerstTable` freezes the cup product, bracket and squaring map of
``HH^*(A)`` on basis classes up to a degree bound. Everything else in this
module works on class coordinates only, so tables can be stored, reloaded and
compared without recomputing cohomology.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Sequence

import numpy as np

from .core.errors import InputError, TruncationError
from .core.hochschild import (
    AxiomResult,
    Cochain,
    CohClass,
    CohomologyTable,
    bilinear,
    structure_tensors,
)
from .core.linalg import EchelonBuilder, FieldSpec, Matrix, Subspace, kernel_basis

LOGGER = logging.getLogger(__name__)

KINDS = ("I", "LieI", "WeakG", "FullG")


@dataclass(frozen=True, eq=False)
class GerstTable:
    """Structure constants of ``(HH^*(A), cup, bracket, sq)`` in degrees ``0..bound``.

    ``cup[(m, n)]`` has shape ``(dims[m], dims[n], dims[m + n])`` and ``bracket[(m, n)]``
    shape ``(dims[m], dims[n], dims[m + n - 1])``. ``square[n]`` holds ``sq`` of the
    basis classes of even degree ``n`` as rows of length ``dims[2n - 1]``.
    """

    field: FieldSpec
    algebra: str
    bound: int
    dims: tuple[int, ...]
    cup: dict[tuple[int, int], np.ndarray]
    bracket: dict[tuple[int, int], np.ndarray]
    square: dict[int, np.ndarray]
    unit: np.ndarray

    def __post_init__(self) -> None:
        if len(self.dims) != self.bound + 1:
            raise InputError(f"table has {len(self.dims)} degrees for bound {self.bound}")
        for (m, n), t in self.cup.items():
            if t.shape != (self.dims[m], self.dims[n], self.dims[m + n]):
                raise InputError(f"cup block ({m}, {n}) has shape {t.shape}")
        for (m, n), t in self.bracket.items():
            if t.shape != (self.dims[m], self.dims[n], self.dims[m + n - 1]):
                raise InputError(f"bracket block ({m}, {n}) has shape {t.shape}")

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.bound:
            raise TruncationError(n, self.bound)
        return self.dims[n]

    def zero(self, n: int) -> np.ndarray:
        return self.field.zeros(self.dim(n))

    def basis_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zero(n)
        v[i] = self.field.scalar(1)
        return v

    def multiply(self, m: int, x: np.ndarray, n: int, y: np.ndarray) -> np.ndarray:
        if m + n > self.bound:
            raise TruncationError(m + n, self.bound)
        return bilinear(self.field, self.cup[(m, n)], x, y)

    def bracket_of(self, m: int, x: np.ndarray, n: int, y: np.ndarray) -> np.ndarray:
        out = m + n - 1
        if out > self.bound:
            raise TruncationError(out, self.bound)
        if out < 0:
            return self.field.zeros(0)
        return bilinear(self.field, self.bracket[(m, n)], x, y)

    def square_of(self, n: int, x: np.ndarray) -> np.ndarray:
        """``sq`` of an arbitrary class of even degree ``n``.

        Uses ``sq(a + b) = sq(a) + sq(b) + {a, b}`` and ``sq(c a) = c^2 sq(a)``.
        """
        if n % 2:
            raise InputError(f"square is defined on even degrees, got {n}")
        if n == 0:
            return self.field.zeros(0)
        if n not in self.square:
            raise TruncationError(2 * n - 1, self.bound)
        fld = self.field
        out = fld.dot(fld.mul(x, x), self.square[n]) if self.dims[n] else fld.zeros(self.square[n].shape[1])
        br = self.bracket[(n, n)]
        for i in range(self.dims[n]):
            for j in range(i + 1, self.dims[n]):
                c = fld.mul(x[i : i + 1], x[j : j + 1])[0]
                if c != 0:
                    out = fld.add(out, fld.scale(br[i, j], c))
        return out

    def power(self, n: int, x: np.ndarray, k: int) -> np.ndarray:
        """``x^k`` for ``x`` of degree ``n`` (``k >= 1``)."""
        y = x
        for i in range(1, k):
            y = self.multiply(n, x, i * n, y)
        return y

    def to_json(self) -> dict[str, Any]:
        fld = self.field

        def blocks(store: dict[tuple[int, int], np.ndarray]) -> list[dict[str, Any]]:
            return [{"degrees": [m, n], "values": fld.format_array(store[(m, n)])} for m, n in sorted(store)]

        return {
            "algebra": self.algebra,
            "field": fld.to_json(),
            "bound": self.bound,
            "dims": list(self.dims),
            "unit": fld.format_array(self.unit),
            "cup": blocks(self.cup),
            "bracket": blocks(self.bracket),
            "square": [{"degree": n, "values": fld.format_array(self.square[n])} for n in sorted(self.square)],
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "GerstTable":
        try:
            fld = FieldSpec.from_json(doc["field"])
            dims = tuple(int(d) for d in doc["dims"])
            bound = int(doc["bound"])

            def block(entry: dict[str, Any], shape: tuple[int, ...]) -> np.ndarray:
                values = np.asarray(entry["values"], dtype=object)
                if values.size == 0:
                    return fld.zeros(shape)
                return fld.array(np.vectorize(lambda s: fld.parse_scalar(str(s)), otypes=[object])(values))

            cups = {}
            for entry in doc["cup"]:
                m, n = entry["degrees"]
                cups[(m, n)] = block(entry, (dims[m], dims[n], dims[m + n])).reshape(dims[m], dims[n], dims[m + n])
            brackets = {}
            for entry in doc["bracket"]:
                m, n = entry["degrees"]
                shape = (dims[m], dims[n], dims[m + n - 1])
                brackets[(m, n)] = block(entry, shape).reshape(shape)
            squares = {}
            for entry in doc["square"]:
                n = entry["degree"]
                shape = (dims[n], dims[2 * n - 1])
                squares[n] = block(entry, shape).reshape(shape)
            unit = block({"values": doc["unit"]}, (dims[0],)).reshape(dims[0])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed Gerstenhaber table: {exc}") from exc
        return cls(fld, str(doc.get("algebra", "A")), bound, dims, cups, brackets, squares, unit)


def extract_table(coh: CohomologyTable) -> GerstTable:
    """Freeze the structure of ``HH^*(A)`` computed to ``coh.bound``."""
    tensors = structure_tensors(coh)
    fld = coh.field
    N = coh.bound
    squares: dict[int, np.ndarray] = {}
    for n in range(2, N + 1, 2):
        out = 2 * n - 1
        if out > N:
            break
        rows = [coh.square(c).coords for c in coh.basis(n)]
        squares[n] = np.stack(rows) if rows else fld.zeros((0, coh.dim(out)))
    table = GerstTable(fld, coh.algebra.name, N, tuple(coh.dims), dict(tensors.cup), dict(tensors.bracket),
                       squares, tensors.unit)
    LOGGER.info("extracted Gerstenhaber table for %s, dims %s", table.algebra, list(table.dims))
    return table


@dataclass(frozen=True, eq=False)
class GradedSubspace:
    """One :class:`Subspace` of class coordinates per degree ``0..bound``."""

    field: FieldSpec
    parts: tuple[Subspace, ...]

    @classmethod
    def zero(cls, table: GerstTable) -> "GradedSubspace":
        return cls(table.field, tuple(Subspace.zero(table.field, d) for d in table.dims))

    @classmethod
    def full(cls, table: GerstTable) -> "GradedSubspace":
        return cls(table.field, tuple(Subspace.full(table.field, d) for d in table.dims))

    @classmethod
    def spanned(cls, table: GerstTable, vectors: dict[int, Sequence[np.ndarray]]) -> "GradedSubspace":
        """Span of homogeneous vectors given per degree.

        Raises:
            TruncationError: If a degree exceeds the table's bound.
        """
        for n in vectors:
            table.dim(n)
        return cls(table.field, tuple(Subspace.span(table.field, d, list(vectors.get(n, ())))
                                      for n, d in enumerate(table.dims)))

    @property
    def bound(self) -> int:
        return len(self.parts) - 1

    @property
    def dims(self) -> list[int]:
        return [p.dim for p in self.parts]

    def dim(self, n: int) -> int:
        return self.parts[n].dim

    def contains(self, n: int, v: np.ndarray) -> bool:
        return self.parts[n].contains(v)

    def __add__(self, other: "GradedSubspace") -> "GradedSubspace":
        return GradedSubspace(self.field, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def issubspace(self, other: "GradedSubspace") -> bool:
        return all(a.issubspace(b) for a, b in zip(self.parts, other.parts))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.dims == other.dims and self.issubspace(other)

    def to_json(self) -> dict[str, Any]:
        return {
            "dims": self.dims,
            "bases": [self.field.format_array(p.basis) for p in self.parts],
        }


@dataclass
class NilpotentReport:
    subspace: GradedSubspace
    certified: list[dict[str, Any]] = field(default_factory=list)
    undetermined: list[dict[str, int]] = field(default_factory=list)
    k_max: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "dims": self.subspace.dims,
            "k_max": self.k_max,
            "certified": self.certified,
            "undetermined": self.undetermined,
        }


def _frobenius_exponent(p: int, limit: int) -> int:
    q = 1
    while q * p <= limit:
        q *= p
    return q


def _degree_zero_radical(table: GerstTable) -> Subspace:
    """Nilradical of the commutative algebra ``HH^0``."""
    fld = table.field
    d = table.dim(0)
    basis = [table.basis_vector(0, i) for i in range(d)]
    if not fld.is_rational:
        q = 1
        while q < d:
            q *= fld.p
        images = [table.power(0, b, q) for b in basis]
        return kernel_basis(Matrix(fld, np.stack(images, axis=1))) if d else Subspace.zero(fld, 0)
    # characteristic 0: radical of the trace form
    mult = [np.stack([table.multiply(0, b, 0, c) for c in basis], axis=1) for b in basis]
    form = fld.zeros((d, d))
    for i in range(d):
        for j in range(d):
            prod = fld.dot(mult[i], mult[j])
            form[i, j] = fld.scalar(np.trace(prod))
    return kernel_basis(Matrix(fld, form))


def nilpotent_homogeneous(
    table: GerstTable,
    k_max: int = 8,
    asserted: Optional[dict[int, Sequence[np.ndarray]]] = None,
) -> NilpotentReport:
    """Certified homogeneous nilpotents, degree by degree.

    Degree 0 is decided exactly as the nilradical of ``HH^0``. Odd degrees are
    nilpotent when ``2`` is invertible (``x^2 = -x^2``). Otherwise a class is
    certified when ``x^k = 0`` with ``k <= k_max`` and ``k n <= bound``; in positive
    characteristic the ``q``-th power map (``q`` the largest usable power of ``p``)
    is additive, so its kernel is certified as a whole. Basis classes that are
    not certified are listed as undetermined.

    Args:
        table: the truncated structure.
        k_max: largest exponent tried.
        asserted: extra classes the caller asserts are nilpotent, per degree.
    """
    fld = table.field
    report = NilpotentReport(GradedSubspace.zero(table), k_max=k_max)
    parts = []
    for n in range(table.bound + 1):
        d = table.dim(n)
        if n == 0:
            space = _degree_zero_radical(table)
            report.certified.append({"degree": 0, "dim": space.dim, "rule": "nilradical"})
            parts.append(space)
            continue
        if n % 2 and (fld.is_rational or fld.p != 2):
            report.certified.append({"degree": n, "dim": d, "rule": "odd"})
            parts.append(Subspace.full(fld, d))
            continue
        limit = min(k_max, table.bound // n)
        builder = EchelonBuilder(fld, d)
        if limit >= 2:
            basis = [table.basis_vector(n, i) for i in range(d)]
            if not fld.is_rational:
                q = _frobenius_exponent(fld.p, limit)
                if q > 1:
                    images = np.stack([table.power(n, b, q) for b in basis], axis=1)
                    kernel = kernel_basis(Matrix(fld, images))
                    builder.add_many(kernel.basis)
                    report.certified.append({"degree": n, "dim": kernel.dim, "rule": f"power {q}"})
            for i, b in enumerate(basis):
                if not builder.contains(b) and fld.is_zero(table.power(n, b, limit)):
                    builder.add(b)
                    report.certified.append({"degree": n, "index": i, "rule": f"power {limit}"})
        if asserted and n in asserted:
            builder.add_many(fld.array(v) for v in asserted[n])
        space = builder.subspace()
        for i in range(d):
            if not space.contains(table.basis_vector(n, i)):
                report.undetermined.append({"degree": n, "index": i})
        parts.append(space)
    report.subspace = GradedSubspace(fld, tuple(parts))
    LOGGER.info("nilpotent classes of %s: dims %s, %d undetermined", table.algebra, report.subspace.dims,
                len(report.undetermined))
    return report


def _basis_pairs(table: GerstTable) -> Iterator[tuple[int, np.ndarray]]:
    for n in range(table.bound + 1):
        for i in range(table.dim(n)):
            yield n, table.basis_vector(n, i)


def _new_elements(table: GerstTable, current: GradedSubspace, kind: str) -> Iterator[tuple[int, np.ndarray]]:
    N = table.bound
    for m, part in enumerate(current.parts):
        for v in part.basis:
            if kind in ("I", "WeakG", "FullG"):
                for n, b in _basis_pairs(table):
                    if m + n <= N:
                        yield m + n, table.multiply(m, v, n, b)
                        yield m + n, table.multiply(n, b, m, v)
            if kind in ("LieI", "FullG"):
                for n, b in _basis_pairs(table):
                    if 0 <= m + n - 1 <= N:
                        yield m + n - 1, table.bracket_of(m, v, n, b)
                        yield m + n - 1, table.bracket_of(n, b, m, v)
            if kind == "WeakG":
                for n, other in enumerate(current.parts):
                    if 0 <= m + n - 1 <= N:
                        for w in other.basis:
                            yield m + n - 1, table.bracket_of(m, v, n, w)


def ideal_closure(table: GerstTable, s: GradedSubspace, kind: str) -> GradedSubspace:
    """Smallest graded subspace containing ``s`` that is closed within the bound.

    ``kind`` selects the closure: ``I`` (cup ideal), ``LieI`` (bracket with every
    class), ``WeakG`` (cup ideal closed under brackets of its own elements) or
    ``FullG`` (cup ideal and bracket with every class).

    Raises:
        InputError: On an unknown kind.
    """
    if kind not in KINDS:
        raise InputError(f"unknown ideal kind {kind!r}; expected one of {', '.join(KINDS)}")
    fld = table.field
    builders = []
    for d, part in zip(table.dims, s.parts):
        b = EchelonBuilder(fld, d)
        b.add_many(part.basis)
        builders.append(b)
    current = GradedSubspace(fld, tuple(b.subspace() for b in builders))
    sweeps = 0
    while True:
        sweeps += 1
        grew = False
        for n, v in _new_elements(table, current, kind):
            grew = builders[n].add(v) or grew
        if not grew:
            break
        current = GradedSubspace(fld, tuple(b.subspace() for b in builders))
    LOGGER.debug("%s closure of %s: dims %s after %d sweeps", kind, table.algebra, current.dims, sweeps)
    return current


def quotient_dims(table: GerstTable, ideal: GradedSubspace) -> list[int]:
    if not all(p.dim <= d for p, d in zip(ideal.parts, table.dims)):
        raise InputError("ideal is larger than the table")
    return [d - p.dim for d, p in zip(table.dims, ideal.parts)]


def _quotient_basis(table: GerstTable, ideal: GradedSubspace, n: int) -> list[np.ndarray]:
    return [table.basis_vector(n, i) for i in ideal.parts[n].complement]


@dataclass
class GenerationReport:
    bound: int
    quotient_dims: list[int]
    new_generators: list[int]
    note: str = "bounded evidence, not a proof"

    def to_json(self) -> dict[str, Any]:
        return {
            "bound": self.bound,
            "quotient_dims": self.quotient_dims,
            "new_generators": self.new_generators,
            "note": self.note,
        }


def generation_probe(table: GerstTable, ideal: GradedSubspace, bound: Optional[int] = None) -> GenerationReport:
    """Count algebra generators of ``HH^*/ideal`` needed in each degree up to ``bound``.

    Degree 0 counts all of the quotient's degree-0 part. In degree ``n > 0`` the
    count is the codimension of the products of quotient classes of degrees
    ``i`` and ``n - i`` with ``1 <= i < n``.
    """
    N = table.bound if bound is None else bound
    if N > table.bound:
        raise TruncationError(N, table.bound)
    fld = table.field
    dims = quotient_dims(table, ideal)[: N + 1]
    counts = [dims[0]] if N >= 0 else []
    for n in range(1, N + 1):
        b = EchelonBuilder(fld, table.dim(n))
        b.add_many(ideal.parts[n].basis)
        base = b.dim
        for i in range(1, n):
            for u in _quotient_basis(table, ideal, i):
                for v in _quotient_basis(table, ideal, n - i):
                    b.add(table.multiply(i, u, n - i, v))
        counts.append(dims[n] - (b.dim - base))
    LOGGER.info("generation probe for %s: %s", table.algebra, counts)
    return GenerationReport(N, dims, counts)


def induced_bracket_vanishes(table: GerstTable, ideal: GradedSubspace) -> AxiomResult:
    """Whether every bracket of quotient representatives lands in ``ideal``."""
    result = AxiomResult("induced_bracket_zero")
    N = table.bound
    for m in range(N + 1):
        for n in range(m, N + 1):
            out = m + n - 1
            if not 0 <= out <= N:
                continue
            for i, u in zip(ideal.parts[m].complement, _quotient_basis(table, ideal, m)):
                for j, v in zip(ideal.parts[n].complement, _quotient_basis(table, ideal, n)):
                    ok = ideal.contains(out, table.bracket_of(m, u, n, v))
                    result.record(ok, {"degrees": [m, n], "basis": [int(i), int(j)]})
    return result


@dataclass(frozen=True, eq=False)
class GroupGenerators:
    """``x_i`` in ``HH^0`` and ``y_j`` in ``HH^1`` of ``K(Z/p)^r`` as class coordinates."""

    x: tuple[CohClass, ...]
    y: tuple[CohClass, ...]

    def to_json(self) -> dict[str, Any]:
        return {"x": [c.to_json() for c in self.x], "y": [c.to_json() for c in self.y]}


def group_algebra_generators(table: CohomologyTable, p: int, r: int) -> GroupGenerators:
    """Match the standard generators of ``HH^*(K(Z/p)^r)``.

    ``x_i`` is the class of ``g_i - 1`` and ``y_j`` the class of ``-D_j`` where
    ``D_j(g) = a_j(g) g g_j^{-1}`` and ``a_j(g)`` is the ``j``-th exponent of ``g``.
    With this sign ``{x_i, y_j}`` is the Kronecker delta times the unit.

    Raises:
        InputError: If the table is not over a group algebra of ``(Z/p)^r`` built by
            :func:`~gersten_lab.core.builders.elementary_abelian_group_algebra`.
    """
    a = table.algebra
    fld = a.field
    if a.dim != p**r or fld.is_rational or fld.p != p:
        raise InputError(f"table is not over the group algebra of (Z/{p})^{r}")
    if table.bound < 1:
        raise TruncationError(1, table.bound)
    elements = list(itertools.product(range(p), repeat=r))
    index = {g: i for i, g in enumerate(elements)}

    def generator(i: int) -> tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(r))

    xs = []
    for i in range(r):
        value = fld.zeros(a.dim)
        value[index[generator(i)]] = fld.scalar(1)
        value[0] = fld.scalar(-1)
        xs.append(table.classify(Cochain.constant(a, table.coefficients, value)))
    ys = []
    for j in range(r):
        values = fld.zeros((a.dim, a.dim))
        for col, g in enumerate(elements):
            if g[j]:
                shifted = tuple((c - (1 if k == j else 0)) % p for k, c in enumerate(g))
                values[index[shifted], col] = fld.scalar(-g[j])
        ys.append(table.classify(Cochain(a, table.coefficients, 1, values)))
    return GroupGenerators(tuple(xs), tuple(ys))
