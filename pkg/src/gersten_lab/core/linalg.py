"""Exact dense linear algebra over prime fields and the rationals.

Matrices are numpy arrays in a canonical storage dtype chosen by the field:

* ``F_p`` with ``p < 256``: ``uint8``
* ``F_p`` with ``p < 2**16``: ``int64``
* larger primes: ``object`` arrays of Python ints
* ``Q``: ``object`` arrays of :class:`fractions.Fraction`

Elimination over ``F_2`` runs on rows packed into ``uint64`` words; a scalar
reference implementation (:func:`rref_reference`) is kept for differential tests.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Optional, Union

import numpy as np

from .errors import InputError

LOGGER = logging.getLogger(__name__)

WORD = 64
# float64 products stay exact while every partial sum is below 2**53
_FLOAT_EXACT = 2**53

Scalar = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field ``F_p`` (``characteristic = p``) or ``Q`` (``characteristic = 0``)."""

    characteristic: int

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise InputError(f"{self.characteristic} is not a prime")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``F<p>``, ``GF<p>`` or ``Q``."""
        t = text.strip().upper()
        if t in ("Q", "QQ", "RATIONALS"):
            return cls.rationals()
        for prefix in ("GF", "F"):
            if t.startswith(prefix) and t[len(prefix) :].isdigit():
                return cls.prime(int(t[len(prefix) :]))
        raise InputError(f"unknown field {text!r}; expected F<p> or Q")

    @classmethod
    def from_json(cls, doc: Any) -> "FieldSpec":
        if doc == "rationals":
            return cls.rationals()
        if isinstance(doc, dict) and "prime" in doc:
            return cls.prime(int(doc["prime"]))
        raise InputError(f"bad field description {doc!r}")

    def to_json(self) -> Any:
        return "rationals" if self.is_rational else {"prime": self.characteristic}

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"F{self.characteristic}"

    @property
    def dtype(self) -> Any:
        if self.is_rational or self.characteristic >= 2**16:
            return object
        if self.characteristic < 256:
            return np.uint8
        return np.int64

    @property
    def is_object(self) -> bool:
        return self.dtype is object

    # -- scalars ---------------------------------------------------------

    def scalar(self, value: Any) -> Scalar:
        if self.is_rational:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise InputError(f"{value} has no image in {self.name}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return 1 / Fraction(value)
        return pow(int(value), self.p - 2, self.p)

    def format_scalar(self, value: Any) -> str:
        if self.is_rational:
            return str(Fraction(value))
        return str(int(value) % self.p)

    def parse_scalar(self, text: Union[str, int]) -> Scalar:
        try:
            if self.is_rational:
                return Fraction(text)
            return int(text) % self.p
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad scalar {text!r} for {self.name}") from exc

    # -- arrays ----------------------------------------------------------

    def zeros(self, shape: Union[int, Sequence[int]]) -> np.ndarray:
        if self.is_rational:
            return np.full(shape, Fraction(0), dtype=object)
        if self.is_object:
            return np.zeros(shape, dtype=object)
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def array(self, data: Any) -> np.ndarray:
        """Canonical array from nested lists, ints, Fractions or another array."""
        if self.is_rational:
            arr = np.asarray(data, dtype=object)
            flat = [Fraction(x) for x in arr.reshape(-1)]
            out = np.empty(len(flat), dtype=object)
            out[:] = flat
            return out.reshape(arr.shape)
        arr = np.asarray(data)
        if arr.dtype == object:
            flat = [self.scalar(x) for x in arr.reshape(-1)]
            if self.is_object:
                return np.array(flat, dtype=object).reshape(arr.shape)
            return np.array(flat, dtype=np.int64).reshape(arr.shape).astype(self.dtype)
        if self.is_object:
            return np.array([int(x) % self.p for x in arr.reshape(-1)], dtype=object).reshape(arr.shape)
        return (arr.astype(np.int64) % self.p).astype(self.dtype)

    def _wide(self, a: np.ndarray) -> np.ndarray:
        return a if self.is_object else a.astype(np.int64)

    def _narrow(self, a: np.ndarray) -> np.ndarray:
        if self.is_rational:
            return a
        if self.is_object:
            return a % self.p
        return (a % self.p).astype(self.dtype)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._narrow(self._wide(a) + self._wide(b))

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._narrow(self._wide(a) - self._wide(b))

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self._narrow(-self._wide(a))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product."""
        return self._narrow(self._wide(a) * self._wide(b))

    def scale(self, a: np.ndarray, s: Any) -> np.ndarray:
        s = self.scalar(s)
        if self.is_object:
            return self._narrow(a * s)
        return self._narrow(self._wide(a) * int(s))

    def _float_safe(self, k: int) -> bool:
        return (not self.is_object) and (self.p - 1) ** 2 * max(k, 1) < _FLOAT_EXACT

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product reduced into the field."""
        k = a.shape[-1] if a.ndim else 1
        if self.is_object:
            return self._narrow(np.dot(a, b))
        if self._float_safe(k):
            out = np.dot(a.astype(np.float64), b.astype(np.float64))
            return (out.astype(np.int64) % self.p).astype(self.dtype)
        return self._narrow(np.dot(a.astype(np.int64), b.astype(np.int64)))

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes: Any) -> np.ndarray:
        """``np.tensordot`` reduced into the field."""
        if isinstance(axes, int):
            k = int(np.prod(a.shape[a.ndim - axes :])) if axes else 1
        else:
            a_axes = axes[0] if isinstance(axes[0], (list, tuple)) else [axes[0]]
            k = int(np.prod([a.shape[i] for i in a_axes])) if a_axes else 1
        if self.is_object:
            return self._narrow(np.tensordot(a, b, axes=axes))
        if self._float_safe(k):
            out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
            return (out.astype(np.int64) % self.p).astype(self.dtype)
        return self._narrow(np.tensordot(a.astype(np.int64), b.astype(np.int64), axes=axes))

    def is_zero(self, a: np.ndarray) -> bool:
        return a.size == 0 or not bool(np.any(a != 0))

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.sub(a, b))

    def random(self, rng: np.random.Generator, shape: Union[int, Sequence[int]]) -> np.ndarray:
        if self.is_rational:
            nums = rng.integers(-3, 4, size=shape)
            dens = rng.integers(1, 3, size=shape)
            out = np.empty(nums.shape, dtype=object)
            for idx in np.ndindex(nums.shape):
                out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
            return out
        if self.is_object:
            return self.array(rng.integers(0, 2**62, size=shape).astype(object))
        return rng.integers(0, self.p, size=shape).astype(self.dtype)

    def format_array(self, a: np.ndarray) -> list[Any]:
        """Nested lists of canonical scalar strings (Q) or ints (F_p)."""
        if a.ndim == 1:
            if self.is_rational:
                return [str(Fraction(x)) for x in a]
            return [int(x) for x in a]
        return [self.format_array(row) for row in a]


@dataclass(frozen=True)
class Matrix:
    """A rows x cols matrix over a FieldSpec, stored as a canonical numpy array."""

    field: FieldSpec
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise InputError(f"matrix data must be 2-dimensional, got shape {self.data.shape}")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Any, cols: Optional[int] = None) -> "Matrix":
        arr = field.array(rows)
        if arr.ndim == 1 and arr.size == 0:
            arr = field.zeros((0, cols or 0))
        return cls(field, arr)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, field.eye(n))

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def T(self) -> "Matrix":  # noqa: N802
        return Matrix(self.field, np.ascontiguousarray(self.data.T))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.field.dot(self.data, other.data))

    def apply(self, v: np.ndarray) -> np.ndarray:
        if v.shape[0] != self.cols:
            raise InputError(f"vector of length {v.shape[0]} does not match {self.cols} columns")
        return self.field.dot(self.data, v)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.field.equal(self.data, other.data)


@dataclass(frozen=True)
class RowEchelon:
    """Result of :func:`rref`."""

    rank: int
    pivots: tuple[int, ...]
    reduced: Matrix

    @property
    def basis(self) -> np.ndarray:
        """The nonzero rows of the reduced matrix."""
        return self.reduced.data[: self.rank]


# -- elimination kernels ---------------------------------------------------


def _pack_gf2(arr: np.ndarray) -> np.ndarray:
    rows, cols = arr.shape
    padded = (cols + WORD - 1) // WORD * WORD
    bits = np.zeros((rows, max(padded, WORD)), dtype=np.uint8)
    bits[:, :cols] = arr & 1
    return np.packbits(bits, axis=1, bitorder="little").view("<u8")


def _unpack_gf2(words: np.ndarray, cols: int) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.uint8)


def _rref_gf2(arr: np.ndarray, limit: int) -> tuple[int, list[int], np.ndarray]:
    rows, cols = arr.shape
    words = _pack_gf2(arr)
    pivots: list[int] = []
    rank = 0
    for c in range(limit):
        if rank == rows:
            break
        w, bit = divmod(c, WORD)
        mask = np.uint64(1) << np.uint64(bit)
        hits = np.flatnonzero(words[rank:, w] & mask)
        if hits.size == 0:
            continue
        piv = rank + int(hits[0])
        if piv != rank:
            words[[rank, piv]] = words[[piv, rank]]
        others = np.flatnonzero(words[:, w] & mask)
        others = others[others != rank]
        if others.size:
            words[others, w:] ^= words[rank, w:]
        pivots.append(c)
        rank += 1
    return rank, pivots, _unpack_gf2(words, cols)


def _rref_dense(fld: FieldSpec, arr: np.ndarray, limit: int) -> tuple[int, list[int], np.ndarray]:
    rows = arr.shape[0]
    work = fld._wide(arr).copy()
    pivots: list[int] = []
    rank = 0
    for c in range(limit):
        if rank == rows:
            break
        hits = np.flatnonzero(work[rank:, c])
        if hits.size == 0:
            continue
        piv = rank + int(hits[0])
        if piv != rank:
            work[[rank, piv]] = work[[piv, rank]]
        lead = work[rank, c]
        if lead != 1:
            work[rank] = fld._narrow(work[rank] * fld.inv(lead)) if fld.is_object else (
                work[rank] * int(fld.inv(lead)) % fld.p
            )
        others = np.flatnonzero(work[:, c])
        others = others[others != rank]
        if others.size:
            factors = work[others, c].copy()
            update = work[others] - np.outer(factors, work[rank])
            work[others] = update if fld.is_rational else update % fld.p
        pivots.append(c)
        rank += 1
    return rank, pivots, fld._narrow(work) if not fld.is_object else work


def rref(m: Matrix, pivot_limit: Optional[int] = None) -> RowEchelon:
    """Reduced row-echelon form.

    Args:
        m: the matrix.
        pivot_limit: only columns ``< pivot_limit`` may carry pivots; the remaining
            columns are carried along (augmented systems).

    Returns:
        RowEchelon: rank, pivot columns and the reduced matrix (same shape as ``m``).
    """
    fld = m.field
    rows, cols = m.rows, m.cols
    limit = cols if pivot_limit is None else min(pivot_limit, cols)
    if rows == 0 or cols == 0:
        return RowEchelon(0, (), Matrix(fld, m.data.copy()))
    if not fld.is_rational and fld.p == 2:
        rank, pivots, reduced = _rref_gf2(m.data, limit)
    else:
        rank, pivots, reduced = _rref_dense(fld, m.data, limit)
    return RowEchelon(rank, tuple(pivots), Matrix(fld, reduced))


def rref_reference(m: Matrix) -> RowEchelon:
    """Scalar Gauss-Jordan elimination on Python lists, for differential testing."""
    fld = m.field
    work = [[fld.scalar(x) for x in row] for row in m.data.tolist()]
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if work[r][c] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = fld.inv(work[rank][c])
        work[rank] = [fld.scalar(x * inv) for x in work[rank]]
        for r in range(rows):
            if r != rank and work[r][c] != 0:
                f = work[r][c]
                work[r] = [fld.scalar(a - f * b) for a, b in zip(work[r], work[rank])]
        pivots.append(c)
        rank += 1
    data = fld.array(work) if rows else fld.zeros((0, cols))
    return RowEchelon(rank, tuple(pivots), Matrix(fld, data))


def rank(m: Matrix) -> int:
    return rref(m).rank


def _nonpivots(cols: int, pivots: Sequence[int]) -> list[int]:
    taken = set(pivots)
    return [c for c in range(cols) if c not in taken]


# -- subspaces -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``field^ambient_dim`` spanned by linearly independent rows."""

    field: FieldSpec
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self) -> None:
        if self.basis.ndim != 2 or self.basis.shape[1] != self.ambient_dim:
            raise InputError(f"basis shape {self.basis.shape} does not match ambient dimension {self.ambient_dim}")

    @classmethod
    def zero(cls, fld: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(fld, ambient_dim, fld.zeros((0, ambient_dim)))

    @classmethod
    def full(cls, fld: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(fld, ambient_dim, fld.eye(ambient_dim))

    @classmethod
    def span(cls, fld: FieldSpec, ambient_dim: int, vectors: Union[np.ndarray, Iterable[np.ndarray]]) -> "Subspace":
        """Subspace spanned by arbitrary (possibly dependent) vectors, kept in rref."""
        if ambient_dim == 0:
            return cls.zero(fld, 0)
        rows = vectors if isinstance(vectors, np.ndarray) else list(vectors)
        if isinstance(rows, list):
            rows = np.stack(rows) if rows else fld.zeros((0, ambient_dim))
        rows = rows.reshape(-1, ambient_dim)
        ech = rref(Matrix(fld, rows))
        return cls(fld, ambient_dim, ech.basis.copy())

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @cached_property
    def echelon(self) -> RowEchelon:
        return rref(Matrix(self.field, self.basis))

    @property
    def pivots(self) -> tuple[int, ...]:
        return self.echelon.pivots

    @property
    def complement(self) -> list[int]:
        """Coordinates not carrying a pivot: the canonical complement basis."""
        return _nonpivots(self.ambient_dim, self.pivots)

    def _residual(self, v: np.ndarray) -> np.ndarray:
        ech = self.echelon
        if ech.rank == 0:
            return v.copy()
        r = ech.basis
        return self.field.sub(v, self.field.dot(v[..., list(ech.pivots)], r))

    def contains(self, v: np.ndarray) -> bool:
        return self.field.is_zero(self._residual(v))

    def contains_all(self, vectors: np.ndarray) -> bool:
        return vectors.shape[0] == 0 or self.field.is_zero(self._residual(vectors))

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of ``v`` in the rref basis of this subspace.

        Raises:
            InputError: If ``v`` is not in the subspace.
        """
        if not self.contains(v):
            raise InputError("vector is not in the subspace")
        return v[..., list(self.pivots)]

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """``v`` minus its component along this subspace (zero at pivot coordinates)."""
        return self._residual(v)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, np.concatenate([self.basis, other.basis]))

    def issubspace(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis)


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of ``{v : m v = 0}``; one vector per free column of the rref."""
    fld = m.field
    cols = m.cols
    ech = rref(m)
    free = _nonpivots(cols, ech.pivots)
    basis = fld.zeros((len(free), cols))
    if free:
        basis[np.arange(len(free)), free] = fld.scalar(1)
        if ech.rank:
            block = ech.basis[:, free]
            basis[:, list(ech.pivots)] = fld.neg(block).T
    return Subspace(fld, cols, basis)


def image_basis(m: Matrix) -> Subspace:
    """Column space of ``m`` as a subspace of ``field^rows``."""
    return Subspace.span(m.field, m.rows, m.data.T)


def solve(m: Matrix, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution of ``m x = b`` (free variables zero), or None when inconsistent.

    Raises:
        InputError: If ``b`` does not have ``m.rows`` entries.
    """
    if b.shape != (m.rows,):
        raise InputError(f"right-hand side of length {b.shape} for a matrix with {m.rows} rows")
    x = solve_many(m, b.reshape(-1, 1))
    return None if x is None else x[:, 0]


def solve_many(m: Matrix, rhs: np.ndarray) -> Optional[np.ndarray]:
    """Solve ``m X = rhs`` column by column; None if any column is inconsistent."""
    fld = m.field
    if rhs.ndim != 2 or rhs.shape[0] != m.rows:
        raise InputError(f"right-hand side shape {rhs.shape} does not match {m.rows} rows")
    k = rhs.shape[1]
    if m.rows == 0:
        return fld.zeros((m.cols, k))
    aug = np.concatenate([m.data, rhs.astype(m.data.dtype)], axis=1)
    ech = rref(Matrix(fld, aug), pivot_limit=m.cols)
    reduced = ech.reduced.data
    if not fld.is_zero(reduced[ech.rank :, m.cols :]):
        return None
    x = fld.zeros((m.cols, k))
    if ech.rank:
        x[list(ech.pivots)] = reduced[: ech.rank, m.cols :]
    return x


def coordinates_in_quotient(ambient_dim: int, subspace: Subspace, v: np.ndarray) -> np.ndarray:
    """Coordinates of ``v + subspace`` in the complement basis at non-pivot coordinates."""
    if v.shape[-1] != ambient_dim or subspace.ambient_dim != ambient_dim:
        raise InputError("dimension mismatch in coordinates_in_quotient")
    return subspace.reduce(v)[..., subspace.complement]


class EchelonBuilder:
    """Incrementally maintained rref basis; used for spans grown one vector at a time."""

    def __init__(self, fld: FieldSpec, ambient_dim: int):
        self.field = fld
        self.ambient_dim = ambient_dim
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        if not self._rows:
            return v.copy()
        r = np.stack(self._rows)
        return self.field.sub(v, self.field.dot(v[..., self._pivots], r))

    def contains(self, v: np.ndarray) -> bool:
        return self.field.is_zero(self._reduce(v))

    def add(self, v: np.ndarray) -> bool:
        """Add ``v`` to the span; returns True when the dimension grew."""
        fld = self.field
        w = self._reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = fld.scale(w, fld.inv(w[c]))
        for i, row in enumerate(self._rows):
            if row[c] != 0:
                self._rows[i] = fld.sub(row, fld.scale(w, row[c]))
        pos = int(np.searchsorted(self._pivots, c))
        self._rows.insert(pos, w)
        self._pivots.insert(pos, c)
        return True

    def add_many(self, vectors: Iterable[np.ndarray]) -> int:
        return sum(1 for v in vectors if self.add(v))

    def subspace(self) -> Subspace:
        basis = np.stack(self._rows) if self._rows else self.field.zeros((0, self.ambient_dim))
        return Subspace(self.field, self.ambient_dim, basis)


class Subquotient:
    """``Z / B`` for subspaces ``B <= Z`` of one ambient space.

    Representatives are the rref basis of ``Z`` reduced modulo ``B``; a vector
    reduces to coordinates read off at the representatives' pivots.
    """

    def __init__(self, cycles: Subspace, boundaries: Subspace):
        if cycles.ambient_dim != boundaries.ambient_dim:
            raise InputError("cycles and boundaries live in different spaces")
        self.field = cycles.field
        self.ambient_dim = cycles.ambient_dim
        self.cycles = cycles
        self.boundaries = boundaries
        reduced = boundaries.reduce(cycles.basis) if cycles.dim else cycles.basis
        self._reps = rref(Matrix(self.field, reduced)) if cycles.dim else RowEchelon(
            0, (), Matrix(self.field, self.field.zeros((0, self.ambient_dim)))
        )

    @property
    def dim(self) -> int:
        return self._reps.rank

    @property
    def representatives(self) -> np.ndarray:
        return self._reps.basis

    def reduce_many(self, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Class coordinates and residuals of the rows of ``vectors``.

        A nonzero residual row means that row does not lie in ``Z``.
        """
        fld = self.field
        v = self.boundaries.reduce(vectors)
        coords = v[:, list(self._reps.pivots)]
        residual = fld.sub(v, fld.dot(coords, self.representatives)) if self.dim else v
        return coords, residual

    def reduce(self, v: np.ndarray) -> tuple[np.ndarray, bool]:
        coords, residual = self.reduce_many(v.reshape(1, -1))
        return coords[0], self.field.is_zero(residual)

    def boundary_part(self, v: np.ndarray) -> np.ndarray:
        """The element of ``B`` with ``v - boundary_part(v)`` in the span of the representatives."""
        return self.field.sub(v, self.boundaries.reduce(v))
