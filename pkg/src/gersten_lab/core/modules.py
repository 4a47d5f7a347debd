"""Finite-dimensional left modules and bimodules given by action matrices."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import Algebra, AlgebraMap, CornerData, Idempotent, corner, opposite, tensor_algebra
from .errors import InputError
from .linalg import FieldSpec, Subspace, coordinates_in_quotient

LOGGER = logging.getLogger(__name__)


def kron(fld: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices, index ``(i, k) -> i * b.rows + k``."""
    out = fld.mul(a[:, None, :, None], b[None, :, None, :])
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def restrict_action(fld: FieldSpec, space: Subspace, mats: np.ndarray) -> np.ndarray:
    """Matrices of ``mats[k]`` on an invariant subspace, in its rref coordinates.

    Raises:
        InputError: If the subspace is not invariant.
    """
    k = mats.shape[0]
    d = space.dim
    if d == 0:
        return fld.zeros((k, 0, 0))
    images = fld.tensordot(mats, space.basis.T, axes=([2], [0]))  # (k, n, d)
    flat = np.ascontiguousarray(images.transpose(0, 2, 1)).reshape(k * d, space.ambient_dim)
    if not space.contains_all(flat):
        raise InputError("subspace is not invariant under the action")
    return np.ascontiguousarray(images[:, list(space.pivots), :])


def quotient_action(fld: FieldSpec, space: Subspace, mats: np.ndarray) -> np.ndarray:
    """Matrices of ``mats[k]`` on the quotient by an invariant subspace (complement basis)."""
    comp = space.complement
    q = len(comp)
    out = fld.zeros((mats.shape[0], q, q))
    if q == 0:
        return out
    for k in range(mats.shape[0]):
        cols = np.ascontiguousarray(mats[k][:, comp].T)
        out[k] = space.reduce(cols)[:, comp].T
    return out


@dataclass(frozen=True, eq=False)
class ModuleFD:
    """A left module: ``action[i]`` is the matrix of ``m -> e_i m``."""

    algebra: Algebra
    dim: int
    action: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.algebra.dim, self.dim, self.dim)
        if self.action.shape != shape:
            raise InputError(f"module action has shape {self.action.shape}, expected {shape}")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @classmethod
    def regular(cls, a: Algebra) -> "ModuleFD":
        return cls(a, a.dim, a.left_mult.copy())

    @classmethod
    def zero(cls, a: Algebra) -> "ModuleFD":
        return cls(a, 0, a.field.zeros((a.dim, 0, 0)))

    @classmethod
    def free(cls, a: Algebra, rank: int) -> "ModuleFD":
        """``a^rank`` on the index ``g * a.dim + k``."""
        fld = a.field
        return cls(a, rank * a.dim, np.stack([kron(fld, fld.eye(rank), a.left_mult[i]) for i in range(a.dim)])
                   if a.dim else fld.zeros((0, 0, 0)))

    def act(self, x: np.ndarray) -> np.ndarray:
        """Matrix of the action of an algebra element."""
        return self.field.tensordot(x, self.action, axes=([0], [0]))

    def validate(self) -> Optional[str]:
        """None when the action is unital and multiplicative, else a diagnostic."""
        return _check_action(self.algebra, self.action, self.dim, left=True)

    def submodule(self, space: Subspace) -> "ModuleFD":
        return ModuleFD(self.algebra, space.dim, restrict_action(self.field, space, self.action))

    def quotient(self, space: Subspace) -> "ModuleFD":
        return ModuleFD(self.algebra, self.dim - space.dim, quotient_action(self.field, space, self.action))

    def pullback(self, f: AlgebraMap) -> "ModuleFD":
        """Restriction of scalars along ``f: A' -> self.algebra``."""
        if f.target is not self.algebra:
            raise InputError("restriction along a map into another algebra")
        return ModuleFD(f.source, self.dim, self.field.tensordot(f.matrix, self.action, axes=([0], [0])))


def _check_action(a: Algebra, action: np.ndarray, dim: int, left: bool) -> Optional[str]:
    fld = a.field
    if a.dim == 0:
        return None if dim == 0 else "nonzero module over the zero algebra"
    if not fld.equal(fld.tensordot(a.unit, action, axes=([0], [0])), fld.eye(dim)):
        return "unit does not act as the identity"
    combos = fld.tensordot(a.mul, action, axes=([2], [0]))  # (i, j, m, m) = action of e_i e_j
    for i in range(a.dim):
        for j in range(a.dim):
            prod = fld.dot(action[i], action[j]) if left else fld.dot(action[j], action[i])
            if not fld.equal(prod, combos[i, j]):
                return f"action is not multiplicative on ({a.basis_names[i]}, {a.basis_names[j]})"
    return None


@dataclass(frozen=True, eq=False)
class Bimodule:
    """An ``(A, B)``-bimodule: ``left[i]`` is ``m -> e_i m``, ``right[j]`` is ``m -> m e_j``."""

    left_algebra: Algebra
    right_algebra: Algebra
    dim: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self) -> None:
        if self.left_algebra.field != self.right_algebra.field:
            raise InputError("bimodule over algebras with different fields")
        if self.left.shape != (self.left_algebra.dim, self.dim, self.dim):
            raise InputError(f"left action has shape {self.left.shape}")
        if self.right.shape != (self.right_algebra.dim, self.dim, self.dim):
            raise InputError(f"right action has shape {self.right.shape}")

    @property
    def field(self) -> FieldSpec:
        return self.left_algebra.field

    @classmethod
    def regular(cls, a: Algebra) -> "Bimodule":
        return cls(a, a, a.dim, a.left_mult.copy(), a.right_mult.copy())

    @classmethod
    def zero(cls, a: Algebra, b: Algebra) -> "Bimodule":
        fld = a.field
        return cls(a, b, 0, fld.zeros((a.dim, 0, 0)), fld.zeros((b.dim, 0, 0)))

    def validate(self) -> Optional[str]:
        fld = self.field
        msg = _check_action(self.left_algebra, self.left, self.dim, left=True)
        if msg:
            return f"left {msg}"
        msg = _check_action(self.right_algebra, self.right, self.dim, left=False)
        if msg:
            return f"right {msg}"
        for i in range(self.left_algebra.dim):
            for j in range(self.right_algebra.dim):
                if not fld.equal(fld.dot(self.left[i], self.right[j]), fld.dot(self.right[j], self.left[i])):
                    return "left and right actions do not commute"
        return None

    def left_module(self) -> ModuleFD:
        return ModuleFD(self.left_algebra, self.dim, self.left)

    def right_module(self, op: Optional[Algebra] = None) -> ModuleFD:
        """The right action as a left module over the opposite algebra."""
        return ModuleFD(op if op is not None else opposite(self.right_algebra), self.dim, self.right)

    def enveloping_module(self, env: Optional[Algebra] = None) -> ModuleFD:
        """Left module over ``A (x) B^op``; ``a (x) b`` acts as ``m -> a m b``."""
        fld = self.field
        if env is None:
            env = tensor_algebra(self.left_algebra, opposite(self.right_algebra))
        if env.dim != self.left_algebra.dim * self.right_algebra.dim:
            raise InputError("enveloping algebra does not match the bimodule")
        action = fld.tensordot(self.left, self.right, axes=([2], [1]))  # (i, m, j, m')
        action = np.ascontiguousarray(action.transpose(0, 2, 1, 3)).reshape(env.dim, self.dim, self.dim)
        return ModuleFD(env, self.dim, action)

    def sub(self, space: Subspace) -> "Bimodule":
        fld = self.field
        return Bimodule(self.left_algebra, self.right_algebra, space.dim,
                        restrict_action(fld, space, self.left), restrict_action(fld, space, self.right))

    def quotient(self, space: Subspace) -> "Bimodule":
        fld = self.field
        return Bimodule(self.left_algebra, self.right_algebra, self.dim - space.dim,
                        quotient_action(fld, space, self.left), quotient_action(fld, space, self.right))

    def pullback(self, f_left: AlgebraMap, f_right: AlgebraMap) -> "Bimodule":
        """Restriction of scalars on both sides."""
        fld = self.field
        return Bimodule(f_left.source, f_right.source, self.dim,
                        fld.tensordot(f_left.matrix, self.left, axes=([0], [0])),
                        fld.tensordot(f_right.matrix, self.right, axes=([0], [0])))

    def act_left(self, x: np.ndarray) -> np.ndarray:
        return self.field.tensordot(x, self.left, axes=([0], [0]))

    def act_right(self, x: np.ndarray) -> np.ndarray:
        return self.field.tensordot(x, self.right, axes=([0], [0]))


def direct_sum(first: Bimodule, second: Bimodule) -> Bimodule:
    if first.left_algebra is not second.left_algebra or first.right_algebra is not second.right_algebra:
        raise InputError("direct sum of bimodules over different algebras")
    fld = first.field
    d = first.dim + second.dim

    def block(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = fld.zeros((x.shape[0], d, d))
        out[:, : first.dim, : first.dim] = x
        out[:, first.dim :, first.dim :] = y
        return out

    return Bimodule(first.left_algebra, first.right_algebra, d,
                    block(first.left, second.left), block(first.right, second.right))


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """``X (x)_C Y`` as the quotient of ``X (x)_K Y`` by the balancing relations.

    Attributes:
        bimodule: the quotient, on the complement basis of ``relations``.
        relations: span of ``x c (x) y - x (x) c y`` inside ``X (x)_K Y``.
    """

    first: Bimodule
    second: Bimodule
    bimodule: Bimodule
    relations: Subspace

    def project(self, v: np.ndarray) -> np.ndarray:
        """Quotient coordinates of vectors of ``X (x)_K Y`` (last axis)."""
        return coordinates_in_quotient(self.relations.ambient_dim, self.relations, v)


def tensor_over(x: Bimodule, y: Bimodule) -> TensorProduct:
    """Balanced tensor product of an ``(A, C)``-bimodule and a ``(C, B)``-bimodule."""
    if x.right_algebra is not y.left_algebra:
        raise InputError("tensor product over mismatched middle algebras")
    fld = x.field
    c = x.right_algebra
    ix, iy = fld.eye(x.dim), fld.eye(y.dim)
    n = x.dim * y.dim
    gens = [fld.sub(kron(fld, x.right[k], iy), kron(fld, ix, y.left[k])).T for k in range(c.dim)]
    relations = Subspace.span(fld, n, np.concatenate(gens) if gens else fld.zeros((0, n)))
    left = np.stack([kron(fld, x.left[i], iy) for i in range(x.left_algebra.dim)]) if x.left_algebra.dim \
        else fld.zeros((0, n, n))
    right = np.stack([kron(fld, ix, y.right[j]) for j in range(y.right_algebra.dim)]) if y.right_algebra.dim \
        else fld.zeros((0, n, n))
    big = Bimodule(x.left_algebra, y.right_algebra, n, left, right)
    LOGGER.debug("tensor over %s: %d x %d -> %d", c.name, x.dim, y.dim, n - relations.dim)
    return TensorProduct(x, y, big.quotient(relations), relations)


@dataclass(frozen=True, eq=False)
class CornerBimodules:
    """``Be`` as a ``(B, C)``-bimodule and ``eB`` as a ``(C, B)``-bimodule for ``C = eBe``.

    ``be_basis`` and ``eb_basis`` hold the chosen bases in B-coordinates.
    """

    algebra: Algebra
    corner: Algebra
    data: CornerData
    be: Bimodule
    eb: Bimodule
    be_basis: np.ndarray
    eb_basis: np.ndarray

    def multiplication(self, product: TensorProduct) -> np.ndarray:
        """Matrix of ``Be (x)_C eB -> B`` on the quotient basis of ``product``."""
        fld = self.algebra.field
        b = self.algebra
        t = fld.tensordot(self.be_basis, b.mul, axes=([1], [0]))  # (s, j, z)
        full = fld.tensordot(t, self.eb_basis, axes=([1], [1]))  # (s, z, t)
        mu = np.ascontiguousarray(full.transpose(1, 0, 2)).reshape(b.dim, -1)
        return np.ascontiguousarray(mu[:, product.relations.complement])


def corner_bimodules(b: Algebra, e: Idempotent) -> CornerBimodules:
    fld = b.field
    c, data = corner(b, e)
    emb = data.embedding
    be_space = Subspace.span(fld, b.dim, b.right_matrix(e.coords).T)
    eb_space = Subspace.span(fld, b.dim, b.left_matrix(e.coords).T)
    c_left = np.stack([b.left_matrix(emb[q]) for q in range(c.dim)]) if c.dim else fld.zeros((0, b.dim, b.dim))
    c_right = np.stack([b.right_matrix(emb[q]) for q in range(c.dim)]) if c.dim else fld.zeros((0, b.dim, b.dim))
    be = Bimodule(b, c, be_space.dim, restrict_action(fld, be_space, b.left_mult),
                  restrict_action(fld, be_space, c_right))
    eb = Bimodule(c, b, eb_space.dim, restrict_action(fld, eb_space, c_left),
                  restrict_action(fld, eb_space, b.right_mult))
    return CornerBimodules(b, c, data, be, eb, be_space.basis, eb_space.basis)


def compress(m: Bimodule, data: CornerData, c: Algebra) -> tuple[Bimodule, Subspace]:
    """``eMe`` as a ``(C, C)``-bimodule together with its basis inside M."""
    fld = m.field
    e = data.idempotent.coords
    space = Subspace.span(fld, m.dim, fld.dot(m.act_left(e), m.act_right(e)).T)
    emb = data.embedding
    left = np.stack([m.act_left(emb[q]) for q in range(c.dim)]) if c.dim else fld.zeros((0, m.dim, m.dim))
    right = np.stack([m.act_right(emb[q]) for q in range(c.dim)]) if c.dim else fld.zeros((0, m.dim, m.dim))
    return Bimodule(c, c, space.dim, restrict_action(fld, space, left), restrict_action(fld, space, right)), space
