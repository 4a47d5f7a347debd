"""Finite-dimensional associative unital algebras given by structure constants."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import InputError
from .linalg import EchelonBuilder, FieldSpec, Matrix, Subspace, kernel_basis, rank

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Algebra:
    """Structure-constant presentation: ``e_i e_j = sum_k mul[i, j, k] e_k``.

    Attributes:
        field: the ground field.
        dim: number of basis elements.
        basis_names: one label per basis element.
        mul: structure constants of shape ``(dim, dim, dim)``.
        unit: coordinates of the identity element.
        name: free-form label used in reports.
    """

    field: FieldSpec
    dim: int
    basis_names: tuple[str, ...]
    mul: np.ndarray
    unit: np.ndarray
    name: str = "A"

    def __post_init__(self) -> None:
        d = self.dim
        if self.mul.shape != (d, d, d):
            raise InputError(f"structure constants have shape {self.mul.shape}, expected {(d, d, d)}")
        if self.unit.shape != (d,):
            raise InputError(f"unit has shape {self.unit.shape}, expected {(d,)}")
        if len(self.basis_names) != d:
            raise InputError(f"{len(self.basis_names)} basis names for dimension {d}")

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def left_mult(self) -> np.ndarray:
        """``left_mult[i]`` is the matrix of ``x -> e_i x``."""
        return np.ascontiguousarray(self.mul.transpose(0, 2, 1))

    @cached_property
    def right_mult(self) -> np.ndarray:
        """``right_mult[i]`` is the matrix of ``x -> x e_i``."""
        return np.ascontiguousarray(self.mul.transpose(1, 2, 0))

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.scalar(1)
        return v

    def element(self, name: str) -> np.ndarray:
        try:
            return self.basis_vector(self.basis_names.index(name))
        except ValueError as exc:
            raise InputError(f"{self.name} has no basis element {name!r}") from exc

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        fld = self.field
        return fld.dot(y, fld.tensordot(x, self.mul, axes=([0], [0])))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.field.tensordot(x, self.left_mult, axes=([0], [0]))

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.field.tensordot(x, self.right_mult, axes=([0], [0]))

    @cached_property
    def is_commutative(self) -> bool:
        return self.field.equal(self.mul, self.mul.transpose(1, 0, 2))

    def products(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Row-wise products of two stacks of elements."""
        fld = self.field
        t = fld.tensordot(xs, self.mul, axes=([1], [0]))  # (n, j, k)
        out = fld.zeros((xs.shape[0], self.dim))
        for r in range(xs.shape[0]):
            out[r] = fld.dot(ys[r], t[r])
        return out

    def format_element(self, x: np.ndarray) -> str:
        terms = []
        for i in np.flatnonzero(x):
            c = self.field.format_scalar(x[i])
            terms.append(self.basis_names[i] if c == "1" else f"{c}*{self.basis_names[i]}")
        return " + ".join(terms) if terms else "0"


def algebra_from_products(
    fld: FieldSpec,
    names: Sequence[str],
    products: dict[tuple[int, int], Sequence[int]],
    unit: Sequence[int],
    name: str = "A",
) -> Algebra:
    """Build an algebra from a sparse table ``(i, j) -> coordinates of e_i e_j``."""
    d = len(names)
    mul = fld.zeros((d, d, d))
    for (i, j), vec in products.items():
        mul[i, j] = fld.array(list(vec))
    return Algebra(fld, d, tuple(names), mul, fld.array(list(unit)), name)


def ground_algebra(fld: FieldSpec, name: str = "K") -> Algebra:
    """The field itself as a 1-dimensional algebra."""
    return algebra_from_products(fld, ["1"], {(0, 0): [1]}, [1], name)


def zero_algebra(fld: FieldSpec, name: str = "0") -> Algebra:
    return Algebra(fld, 0, (), fld.zeros((0, 0, 0)), fld.zeros(0), name)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; ``failure`` names the first failing basis tuple."""

    ok: bool
    kind: Optional[str] = None
    failure: Optional[tuple[int, ...]] = None
    message: str = "ok"

    def to_json(self) -> dict:
        return {"ok": self.ok, "kind": self.kind, "failure": list(self.failure) if self.failure else None,
                "message": self.message}


def validate(a: Algebra) -> ValidationReport:
    """Check associativity on all basis triples and the two unit laws."""
    fld = a.field
    d = a.dim
    if d == 0:
        return ValidationReport(True, message="zero algebra")
    c = a.mul
    lhs = fld.tensordot(c, c, axes=([2], [0]))  # (i, j, k, y) = (e_i e_j) e_k
    rhs = fld.tensordot(c, c, axes=([1], [2])).transpose(0, 2, 3, 1)  # e_i (e_j e_k)
    bad = np.argwhere(np.any(fld.sub(lhs, rhs) != 0, axis=3))
    if bad.size:
        i, j, k = (int(x) for x in bad[0])
        return ValidationReport(
            False, "associativity", (i, j, k),
            f"(e{i} e{j}) e{k} != e{i} (e{j} e{k}) for "
            f"({a.basis_names[i]}, {a.basis_names[j]}, {a.basis_names[k]})",
        )
    eye = fld.eye(d)
    for label, mats in (("left unit", a.left_mult), ("right unit", a.right_mult)):
        act = fld.tensordot(a.unit, mats, axes=([0], [0]))
        if not fld.equal(act, eye):
            cols = np.argwhere(np.any(fld.sub(act, eye) != 0, axis=0))
            i = int(cols[0][0])
            return ValidationReport(False, "unit", (i,), f"{label} fails on {a.basis_names[i]}")
    return ValidationReport(True)


def require_valid(a: Algebra) -> Algebra:
    report = validate(a)
    if not report.ok:
        raise InputError(f"{a.name} is not a unital associative algebra: {report.message}")
    return a


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """A linear map ``source -> target`` given by a ``target.dim x source.dim`` matrix."""

    source: Algebra
    target: Algebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise InputError(f"map matrix shape {self.matrix.shape} does not match the algebras")

    @classmethod
    def identity(cls, a: Algebra) -> "AlgebraMap":
        return cls(a, a, a.field.eye(a.dim))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.source.field.dot(self.matrix, x)

    def compose(self, inner: "AlgebraMap") -> "AlgebraMap":
        """``self o inner``."""
        return AlgebraMap(inner.source, self.target, self.source.field.dot(self.matrix, inner.matrix))

    def verify(self) -> Optional[str]:
        """None when the map is unital and multiplicative on basis pairs, else a diagnostic."""
        fld = self.source.field
        if not fld.equal(self(self.source.unit), self.target.unit):
            return "not unital"
        s = self.source
        f = self.matrix
        # f(e_i e_j) against f(e_i) f(e_j), all pairs at once
        lhs = fld.tensordot(s.mul, f, axes=([2], [1]))
        t = fld.tensordot(f, self.target.mul, axes=([0], [0]))  # (i, y, k)
        rhs = fld.tensordot(t, f, axes=([1], [0])).transpose(0, 2, 1)
        bad = np.argwhere(np.any(fld.sub(lhs, rhs) != 0, axis=2))
        if bad.size:
            i, j = (int(x) for x in bad[0])
            return f"not multiplicative on ({s.basis_names[i]}, {s.basis_names[j]})"
        return None

    @property
    def is_surjective(self) -> bool:
        return rank(Matrix(self.source.field, self.matrix)) == self.target.dim

    def check_isomorphism(self) -> Optional[str]:
        """None when the map is a bijective algebra homomorphism, else a diagnostic."""
        if self.source.dim != self.target.dim:
            return f"dimensions differ: {self.source.dim} vs {self.target.dim}"
        if not self.is_surjective:
            return "not bijective"
        return self.verify()


@dataclass(frozen=True, eq=False)
class Idempotent:
    """An element ``e`` of an algebra with ``e e = e``."""

    algebra: Algebra
    coords: np.ndarray

    def __post_init__(self) -> None:
        a = self.algebra
        if self.coords.shape != (a.dim,):
            raise InputError("idempotent has the wrong length")
        if not a.field.equal(a.multiply(self.coords, self.coords), self.coords):
            raise InputError(f"{a.format_element(self.coords)} is not idempotent in {a.name}")

    @property
    def is_zero(self) -> bool:
        return self.algebra.field.is_zero(self.coords)

    @property
    def is_one(self) -> bool:
        return self.algebra.field.equal(self.coords, self.algebra.unit)

    def complement(self) -> "Idempotent":
        return Idempotent(self.algebra, self.algebra.field.sub(self.algebra.unit, self.coords))


def opposite(a: Algebra) -> Algebra:
    return Algebra(a.field, a.dim, a.basis_names, np.ascontiguousarray(a.mul.transpose(1, 0, 2)), a.unit.copy(),
                   f"{a.name}^op")


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    """``a (x) b`` on the basis ``(i, j) -> i * b.dim + j``."""
    if a.field != b.field:
        raise InputError(f"field mismatch: {a.field.name} vs {b.field.name}")
    fld = a.field
    da, db = a.dim, b.dim
    big = fld.mul(a.mul[:, None, :, None, :, None], b.mul[None, :, None, :, None, :])
    mul = np.ascontiguousarray(big.reshape(da * db, da * db, da * db))
    unit = fld.mul(a.unit[:, None], b.unit[None, :]).reshape(-1)
    names = tuple(f"{x}⊗{y}" for x in a.basis_names for y in b.basis_names)
    return Algebra(fld, da * db, names, mul, unit, f"{a.name}⊗{b.name}")


def enveloping(a: Algebra) -> Algebra:
    """``a^ev = a (x) a^op``; its left modules are the a-bimodules."""
    env = tensor_algebra(a, opposite(a))
    return Algebra(env.field, env.dim, env.basis_names, env.mul, env.unit, f"{a.name}^ev")


@dataclass(frozen=True, eq=False)
class CornerData:
    """How a corner algebra ``C = eBe`` sits inside ``B``.

    Attributes:
        embedding: rows are the C-basis written in B-coordinates (rref form).
        pivots: B-coordinates at which the embedding rows carry their leading 1.
    """

    idempotent: Idempotent
    embedding: np.ndarray
    pivots: tuple[int, ...]

    def to_corner(self, x: np.ndarray) -> np.ndarray:
        """C-coordinates of elements of ``eBe`` (last axis)."""
        return x[..., list(self.pivots)]

    def to_ambient(self, c: np.ndarray) -> np.ndarray:
        """B-coordinates of C-elements (last axis)."""
        fld = self.idempotent.algebra.field
        return fld.dot(c, self.embedding)


def corner(b: Algebra, e: Idempotent) -> tuple[Algebra, CornerData]:
    """The corner algebra ``eBe`` with unit ``e``; dimension 0 when ``e = 0``."""
    if e.algebra is not b:
        raise InputError("idempotent belongs to another algebra")
    fld = b.field
    compress = fld.dot(b.left_matrix(e.coords), b.right_matrix(e.coords))
    space = Subspace.span(fld, b.dim, compress.T)
    emb = space.basis
    pivots = space.pivots
    k = space.dim
    if k == 0:
        LOGGER.info("corner of %s at a zero idempotent is the zero algebra", b.name)
    t = fld.tensordot(emb, b.mul, axes=([1], [0]))  # (i, j', z)
    prods = fld.tensordot(t, emb, axes=([1], [1])).transpose(0, 2, 1)  # (i, j, z)
    mul = np.ascontiguousarray(prods[..., list(pivots)])
    names = []
    for i in range(k):
        nz = np.flatnonzero(emb[i])
        names.append(b.basis_names[nz[0]] if nz.size == 1 and emb[i, nz[0]] == 1 else f"c{i}")
    unit = e.coords[list(pivots)]
    c = Algebra(fld, k, tuple(names), mul, unit, f"e{b.name}e")
    return c, CornerData(e, emb, pivots)


def two_sided_ideal(b: Algebra, generators: Sequence[np.ndarray]) -> Subspace:
    """Span of ``B g B`` over the generators, grown to a fixed point."""
    fld = b.field
    builder = EchelonBuilder(fld, b.dim)
    queue = [g for g in (fld.array(x) for x in generators) if builder.add(g)]
    while queue:
        v = queue.pop()
        for i in range(b.dim):
            for w in (fld.dot(b.left_mult[i], v), fld.dot(b.right_mult[i], v)):
                if builder.add(w):
                    queue.append(w)
    return builder.subspace()


def quotient_by_ideal(b: Algebra, generators: Sequence[np.ndarray]) -> tuple[Algebra, AlgebraMap]:
    """``A = B / BgB`` on the complement basis, with the surjection ``pi: B -> A``."""
    fld = b.field
    ideal = two_sided_ideal(b, generators)
    keep = ideal.complement
    pi = ideal.reduce(fld.eye(b.dim))[:, keep].T.copy() if b.dim else fld.zeros((0, 0))
    pi = np.ascontiguousarray(pi)
    sub = b.mul[np.ix_(keep, keep)] if keep else fld.zeros((0, 0, b.dim))
    mul = fld.tensordot(sub, pi, axes=([2], [1])) if keep else fld.zeros((0, 0, 0))
    unit = fld.dot(pi, b.unit) if keep else fld.zeros(0)
    a = Algebra(fld, len(keep), tuple(b.basis_names[i] for i in keep), np.ascontiguousarray(mul), unit,
                f"{b.name}/I")
    if a.is_zero:
        LOGGER.info("quotient of %s is the zero algebra", b.name)
    return a, AlgebraMap(b, a, pi)


def center(a: Algebra) -> Subspace:
    """Basis of ``{z : e_i z = z e_i for all i}``."""
    fld = a.field
    if a.dim == 0:
        return Subspace.zero(fld, 0)
    stacked = fld.sub(a.left_mult, a.right_mult).reshape(a.dim * a.dim, a.dim)
    return kernel_basis(Matrix(fld, stacked))
