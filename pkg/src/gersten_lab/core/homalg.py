"""Bounded free resolutions, Ext, Tor, comparison lifts and grade.

A free module ``A^r`` has underlying coordinates ``g * dim A + k`` (generator
``g``, algebra basis element ``k``). An equivariant map out of ``A^r`` is stored
by the images of its generators: for a map into another free module ``A^s`` an
array ``Y`` of shape ``(r, s, dim A)`` with ``Y[g, h, k]`` the coefficient of
``e_k * gen_h`` in the image of ``gen_g``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .algebra import Algebra, AlgebraMap
from .errors import InputError, LiftError
from .linalg import EchelonBuilder, FieldSpec, Matrix, Subquotient, Subspace, kernel_basis, rank, solve_many
from .modules import Bimodule, ModuleFD
from .resources import ResourceBudget, active_budget

LOGGER = logging.getLogger(__name__)


def free_map_matrix(a: Algebra, images: np.ndarray) -> np.ndarray:
    """K-matrix of the equivariant map ``A^r -> A^s`` with generator images ``(r, s, d)``."""
    fld = a.field
    r, s, d = images.shape
    if r == 0 or s == 0 or d == 0:
        return fld.zeros((s * d, r * d))
    # e_k * (sum_l y[g, h, l] e_l gen_h) has coordinate sum_l y[g, h, l] c[k, l, z] at (h, z)
    t = fld.tensordot(images, a.mul, axes=([2], [1]))  # (g, h, k, z)
    return np.ascontiguousarray(t.transpose(1, 3, 0, 2)).reshape(s * d, r * d)


def module_map_matrix(action: np.ndarray, images: np.ndarray, fld: FieldSpec) -> np.ndarray:
    """K-matrix of the equivariant map ``A^r -> M`` sending ``gen_g`` to ``images[g]``."""
    d, n, _ = action.shape
    r = images.shape[0]
    if r == 0 or d == 0 or n == 0:
        return fld.zeros((n, r * d))
    t = fld.tensordot(action, images, axes=([2], [1]))  # (k, n, g)
    return np.ascontiguousarray(t.transpose(1, 2, 0)).reshape(n, r * d)


def free_action(a: Algebra, count: int) -> np.ndarray:
    """Action matrices of ``A^count`` on its underlying space."""
    fld = a.field
    n = count * a.dim
    out = fld.zeros((a.dim, n, n))
    for g in range(count):
        out[:, g * a.dim : (g + 1) * a.dim, g * a.dim : (g + 1) * a.dim] = a.left_mult
    return out


def select_generators(fld: FieldSpec, action: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Greedy A-generators of the span of the candidate rows.

    A candidate is kept when it is not in the A-span of the ones kept before it.
    """
    n = action.shape[1]
    builder = EchelonBuilder(fld, n)
    kept = []
    for v in candidates:
        if builder.contains(v):
            continue
        kept.append(v)
        builder.add_many(fld.tensordot(action, v, axes=([2], [0])))
    return np.stack(kept) if kept else fld.zeros((0, n))


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """``... -> A^{r_1} -> A^{r_0} -> M -> 0`` up to ``length``.

    Attributes:
        augmentation: generator images in M, shape ``(r_0, dim M)``.
        images: ``images[i - 1]`` holds the generator images of ``d_i``, shape ``(r_i, r_{i-1}, dim A)``.
    """

    algebra: Algebra
    module: ModuleFD
    augmentation: np.ndarray
    images: tuple[np.ndarray, ...]
    _matrices: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def length(self) -> int:
        return len(self.images)

    @property
    def ranks(self) -> list[int]:
        return [int(self.augmentation.shape[0])] + [int(x.shape[0]) for x in self.images]

    def rank(self, i: int) -> int:
        return self.ranks[i]

    def augmentation_matrix(self) -> np.ndarray:
        return module_map_matrix(self.module.action, self.augmentation, self.algebra.field)

    def differential(self, i: int) -> np.ndarray:
        """K-matrix of ``d_i: A^{r_i} -> A^{r_{i-1}}`` for ``1 <= i <= length``."""
        if not 1 <= i <= self.length:
            raise InputError(f"resolution has no differential in degree {i}")
        if i not in self._matrices:
            self._matrices[i] = free_map_matrix(self.algebra, self.images[i - 1])
        return self._matrices[i]

    def verify(self, upto: Optional[int] = None) -> Optional[str]:
        """None when the resolution is exact through ``upto`` (default: length), else a diagnostic.

        Equivariance holds by construction of the matrices from generator images.
        """
        fld = self.algebra.field
        top = self.length if upto is None else min(upto, self.length)
        eps = Matrix(fld, self.augmentation_matrix())
        if eps.rows and Subspace.span(fld, eps.rows, eps.data.T).dim != eps.rows:
            return "augmentation is not surjective"
        previous = eps
        for i in range(1, top + 1):
            di = Matrix(fld, self.differential(i))
            if not (previous @ di).is_zero():
                return f"d_{i - 1} d_{i} != 0"
            kernel = kernel_basis(previous)
            image = Subspace.span(fld, di.rows, di.data.T)
            if image.dim != kernel.dim:
                return f"not exact in degree {i - 1}"
            previous = di
        return None


def free_resolution(
    a: Algebra,
    m: ModuleFD,
    length: int,
    seeds: Optional[np.ndarray] = None,
    budget: Optional[ResourceBudget] = None,
) -> FreeResolution:
    """Free resolution with greedily chosen generators of successive kernels.

    Args:
        a: the algebra; ``m.algebra`` must be ``a``.
        m: the module to resolve.
        length: number of differentials to build.
        seeds: vectors of ``m`` tried first as generators (e.g. the unit of a bimodule).
        budget: memory budget for each differential matrix.
    """
    if m.algebra is not a:
        raise InputError("module is not over the given algebra")
    fld = a.field
    budget = budget if budget is not None else active_budget()
    d = a.dim
    candidates = fld.eye(m.dim)
    if seeds is not None and len(seeds):
        candidates = np.concatenate([fld.array(seeds), candidates])
    gens = select_generators(fld, m.action, candidates)
    augmentation = gens
    previous = module_map_matrix(m.action, gens, fld)
    images: list[np.ndarray] = []
    current = gens.shape[0]
    for i in range(1, length + 1):
        kernel = kernel_basis(Matrix(fld, previous))
        new = select_generators(fld, free_action(a, current), kernel.basis)
        r_new = new.shape[0]
        budget.check(i, current * d, r_new * d, np.dtype(fld.dtype).itemsize, "resolution")
        img = new.reshape(r_new, current, d)
        images.append(img)
        previous = free_map_matrix(a, img)
        LOGGER.debug("resolution of %d-dim module over %s: rank %d in degree %d", m.dim, a.name, r_new, i)
        current = r_new
    return FreeResolution(a, m, augmentation, tuple(images))


def _index(idx: tuple[int, ...], d: int) -> int:
    out = 0
    for i in idx:
        out = out * d + int(i)
    return out


def _wide(fld: FieldSpec, v: np.ndarray) -> np.ndarray:
    return v if fld.is_object else v.astype(np.int64)


def module_bar_resolution(a: Algebra, m: ModuleFD, length: int) -> FreeResolution:
    """``A (x) A^{(x)n} (x) M`` with generators ``(j_1..j_n, s)`` at index ``j * dim M + s``.

    ``d(1 (x) a_1..a_n (x) m) = a_1 (x) (a_2..a_n (x) m) + sum_{i<n} (-1)^i 1 (x) (..a_i a_{i+1}..) (x) m
    + (-1)^n 1 (x) (a_1..a_{n-1}) (x) a_n m``.
    """
    if m.algebra is not a:
        raise InputError("module is not over the given algebra")
    fld = a.field
    d, dm = a.dim, m.dim
    unit = _wide(fld, a.unit)
    mul = _wide(fld, a.mul)
    action = _wide(fld, m.action)
    images: list[np.ndarray] = []
    for n in range(1, length + 1):
        wide = _wide(fld, fld.zeros((d**n, dm, d ** (n - 1), dm, d)))
        for idx in np.ndindex(*((d,) * n)):
            J = _index(idx, d)
            rest = _index(idx[1:], d)
            for s in range(dm):
                wide[J, s, rest, s, idx[0]] += 1
            for i in range(1, n):
                for z in np.flatnonzero(mul[idx[i - 1], idx[i]]):
                    merged = _index(idx[: i - 1] + (int(z),) + idx[i + 1 :], d)
                    coeff = mul[idx[i - 1], idx[i], z] * (-1) ** i
                    for s in range(dm):
                        wide[J, s, merged, s] += unit * coeff
            head = _index(idx[:-1], d)
            act = action[idx[-1]]
            for s in range(dm):
                for t in np.flatnonzero(act[:, s]):
                    wide[J, s, head, t] += unit * (act[t, s] * (-1) ** n)
        images.append(fld.array(wide).reshape(d**n * dm, d ** (n - 1) * dm, d))
    return FreeResolution(a, m, fld.eye(dm), tuple(images))


def bar_resolution(pi: AlgebraMap, env: Algebra, length: int) -> FreeResolution:
    """``A (x)_B BB (x)_B A`` over ``env = A^ev`` for a surjection ``pi: B -> A``.

    Generators in degree ``n`` are the monomials of ``B^{(x)n}``; with ``pi`` the
    identity this is the bar resolution of ``A``. It is exact in positive degrees
    ``< n`` when ``Tor^B_i(A, A) = 0`` for ``0 < i < n``.
    """
    b, a = pi.source, pi.target
    fld = a.field
    da, db = a.dim, b.dim
    if env.dim != da * da:
        raise InputError("enveloping algebra does not match the target of pi")
    ua = _wide(fld, a.unit)
    pm = _wide(fld, pi.matrix)
    mul = _wide(fld, b.mul)
    one_one = np.multiply.outer(ua, ua).reshape(-1)
    images: list[np.ndarray] = []
    for n in range(1, length + 1):
        wide = _wide(fld, fld.zeros((db**n, db ** (n - 1), da * da)))
        for idx in np.ndindex(*((db,) * n)):
            J = _index(idx, db)
            # pi(b_1) (x) 1
            wide[J, _index(idx[1:], db)] += np.multiply.outer(pm[:, idx[0]], ua).reshape(-1)
            for i in range(1, n):
                for z in np.flatnonzero(mul[idx[i - 1], idx[i]]):
                    merged = _index(idx[: i - 1] + (int(z),) + idx[i + 1 :], db)
                    wide[J, merged] += one_one * (mul[idx[i - 1], idx[i], z] * (-1) ** i)
            # 1 (x) pi(b_n)
            wide[J, _index(idx[:-1], db)] += np.multiply.outer(ua, pm[:, idx[-1]]).reshape(-1) * (-1) ** n
        images.append(fld.array(wide))
    regular = Bimodule.regular(a).enveloping_module(env)
    return FreeResolution(env, regular, a.unit.reshape(1, da).copy(), tuple(images))


# -- Ext and Tor -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtTable:
    """``Ext^n_A(M, N)`` for ``n <= bound`` computed on a fixed resolution of M.

    A cochain in degree ``n`` is a vector of length ``r_n * dim N`` (value of
    generator ``g`` at ``g * dim N + coordinate``).
    """

    resolution: FreeResolution
    target: ModuleFD
    bound: int
    coboundaries: tuple[np.ndarray, ...]
    quotients: tuple[Subquotient, ...]

    @property
    def dims(self) -> list[int]:
        return [q.dim for q in self.quotients]

    def dim(self, n: int) -> int:
        return self.quotients[n].dim if 0 <= n <= self.bound else 0

    def coboundary(self, n: int) -> np.ndarray:
        """Matrix of ``Hom(P_n, N) -> Hom(P_{n+1}, N)``."""
        return self.coboundaries[n]

    def reduce(self, n: int, cocycle: np.ndarray) -> np.ndarray:
        coords, ok = self.quotients[n].reduce(cocycle)
        if not ok:
            raise InputError(f"Ext cochain of degree {n} is not a cocycle")
        return coords

    def to_json(self) -> dict[str, Any]:
        return {"bound": self.bound, "dims": self.dims, "ranks": self.resolution.ranks}


def hom_matrix(imgs: np.ndarray, target: ModuleFD) -> np.ndarray:
    """``Hom(phi, N)`` for an equivariant ``phi`` between free modules given by generator images.

    Block ``(h, g)`` is ``sum_k y[h, g, k] * action_N[k]``.
    """
    fld = target.field
    r1, r0, _ = imgs.shape
    n = target.dim
    if r1 == 0 or r0 == 0 or n == 0:
        return fld.zeros((r1 * n, r0 * n))
    t = fld.tensordot(imgs, target.action, axes=([2], [0]))  # (h, g, n, n')
    return np.ascontiguousarray(t.transpose(0, 2, 1, 3)).reshape(r1 * n, r0 * n)


def hom_coboundary(res: FreeResolution, target: ModuleFD, i: int) -> np.ndarray:
    """``Hom(d_{i+1}, N)``."""
    return hom_matrix(res.images[i], target)


def ext_on(res: FreeResolution, target: ModuleFD, bound: int) -> ExtTable:
    """Ext from a resolution that has at least ``bound + 1`` differentials."""
    if res.length < bound + 1:
        raise InputError(f"resolution of length {res.length} is too short for Ext up to {bound}")
    if target.algebra is not res.algebra and target.algebra.dim != res.algebra.dim:
        raise InputError("target module is over another algebra")
    fld = res.algebra.field
    deltas = tuple(hom_coboundary(res, target, i) for i in range(bound + 1))
    quotients = []
    for n in range(bound + 1):
        width = res.rank(n) * target.dim
        cycles = kernel_basis(Matrix(fld, deltas[n]))
        boundaries = Subspace.span(fld, width, deltas[n - 1].T) if n else Subspace.zero(fld, width)
        quotients.append(Subquotient(cycles, boundaries))
    return ExtTable(res, target, bound, deltas, tuple(quotients))


def ext(a: Algebra, m: ModuleFD, n: ModuleFD, bound: int, seeds: Optional[np.ndarray] = None) -> ExtTable:
    """``Ext^i_A(M, N)`` for ``i <= bound``."""
    res = free_resolution(a, m, bound + 1, seeds)
    table = ext_on(res, n, bound)
    LOGGER.debug("Ext over %s: %s", a.name, table.dims)
    return table


@dataclass(frozen=True, eq=False)
class TorTable:
    resolution: FreeResolution
    right: ModuleFD
    bound: int
    dims: tuple[int, ...]

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n <= self.bound else 0

    def to_json(self) -> dict[str, Any]:
        return {"bound": self.bound, "dims": list(self.dims), "ranks": self.resolution.ranks}


def tor_boundary(res: FreeResolution, right: ModuleFD, i: int) -> np.ndarray:
    """``X (x) d_i``: block ``(g, h)`` is ``sum_k x_h[g, k] * right_X[k]``."""
    fld = res.algebra.field
    imgs = res.images[i - 1]  # (r_i, r_{i-1}, d)
    r1, r0, _ = imgs.shape
    n = right.dim
    if r1 == 0 or r0 == 0 or n == 0:
        return fld.zeros((r0 * n, r1 * n))
    t = fld.tensordot(imgs, right.action, axes=([2], [0]))  # (h, g, n, n')
    return np.ascontiguousarray(t.transpose(1, 2, 0, 3)).reshape(r0 * n, r1 * n)


def tor(a: Algebra, x: ModuleFD, y: ModuleFD, bound: int, res: Optional[FreeResolution] = None) -> TorTable:
    """``Tor^A_i(X, Y)`` for ``i <= bound``.

    Args:
        a: the algebra.
        x: a right A-module, given as a left module over the opposite algebra.
        y: a left A-module.
        bound: highest degree computed.
        res: a resolution of ``y`` to reuse; built when omitted.
    """
    if x.algebra.dim != a.dim or x.field != a.field:
        raise InputError("right module is not over the given algebra")
    if res is None:
        res = free_resolution(a, y, bound + 1)
    fld = a.field
    dims = []
    ranks = [0] + [rank(Matrix(fld, tor_boundary(res, x, i))) for i in range(1, bound + 2)]
    for n in range(bound + 1):
        width = res.rank(n) * x.dim
        dims.append(width - ranks[n] - ranks[n + 1])
    LOGGER.debug("Tor over %s: %s", a.name, dims)
    return TorTable(res, x, bound, tuple(dims))


# -- lifts --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Equivariant maps ``P_i -> Q_i`` lifting a module map, stored by generator images."""

    source: FreeResolution
    target: FreeResolution
    images: tuple[np.ndarray, ...]

    def matrix(self, i: int) -> np.ndarray:
        return free_map_matrix(self.source.algebra, self.images[i])

    def verify(self, base: np.ndarray) -> Optional[str]:
        """None when the lift is compatible with ``base: M -> N`` and all squares commute."""
        fld = self.source.algebra.field
        if not fld.equal(fld.dot(self.target.augmentation_matrix(), self.matrix(0)),
                         fld.dot(base, self.source.augmentation_matrix())):
            return "augmentation square does not commute"
        for i in range(1, len(self.images)):
            lhs = fld.dot(self.target.differential(i), self.matrix(i))
            rhs = fld.dot(self.matrix(i - 1), self.source.differential(i))
            if not fld.equal(lhs, rhs):
                return f"square in degree {i} does not commute"
        return None


def lift(base: np.ndarray, p: FreeResolution, q: FreeResolution, degree: int) -> ChainMap:
    """Lift ``base: M -> N`` to ``P_i -> Q_i`` for ``i <= degree``.

    Raises:
        LiftError: When a lifting system is inconsistent (Q not exact in range).
    """
    a = p.algebra
    fld = a.field
    if q.algebra is not a:
        raise InputError("resolutions over different algebras")
    if degree > min(p.length, q.length):
        raise InputError(f"resolutions too short to lift to degree {degree}")
    d = a.dim
    # generator g of P_0 maps to base(eps_P(gen_g))
    targets = fld.dot(base, p.augmentation.T)  # (dim N, r_0)
    sol = solve_many(Matrix(fld, q.augmentation_matrix()), targets)
    if sol is None:
        raise LiftError("augmentation of the target resolution is not surjective")
    images = [sol.T.reshape(p.rank(0), q.rank(0), d)]
    for i in range(1, degree + 1):
        prev = free_map_matrix(a, images[-1])  # (s_{i-1} d, r_{i-1} d)
        # image of gen_h under d^P_i, as a vector of P_{i-1}
        gen_vectors = _generator_vectors(p.images[i - 1], fld)  # (r_{i-1} d, r_i)
        rhs = fld.dot(prev, gen_vectors)
        sol = solve_many(Matrix(fld, q.differential(i)), rhs)
        if sol is None:
            raise LiftError(f"lifting system in degree {i} is inconsistent")
        images.append(sol.T.reshape(p.rank(i), q.rank(i), d))
    return ChainMap(p, q, tuple(images))


def _generator_vectors(images: np.ndarray, fld: FieldSpec) -> np.ndarray:
    """The images ``d(gen_h)`` as columns."""
    r1, r0, d = images.shape
    return np.ascontiguousarray(images.reshape(r1, r0 * d).T) if r1 else fld.zeros((r0 * d, 0))


def null_homotopy(chain_map: ChainMap, degree: int) -> list[np.ndarray]:
    """Equivariant ``s_i: P_i -> Q_{i+1}`` with ``phi_i = d s_i + s_{i-1} d`` for ``i <= degree``.

    The chain map must lift the zero map.

    Raises:
        LiftError: If no null-homotopy exists in the computed range.
    """
    p, q = chain_map.source, chain_map.target
    a = p.algebra
    fld = a.field
    d = a.dim
    out: list[np.ndarray] = []
    prev_s: Optional[np.ndarray] = None
    for i in range(degree + 1):
        phi = chain_map.matrix(i)
        rhs = phi
        if prev_s is not None:
            rhs = fld.sub(phi, fld.dot(free_map_matrix(a, prev_s), p.differential(i)))
        # an equivariant map is determined by the images of its generators
        gen_cols = _unit_columns(rhs, p.rank(i), a)
        sol = solve_many(Matrix(fld, q.differential(i + 1)), gen_cols)
        if sol is None:
            raise LiftError(f"no null-homotopy in degree {i}")
        s = sol.T.reshape(p.rank(i), q.rank(i + 1), d)
        out.append(s)
        prev_s = s
    return out


def _unit_columns(mat: np.ndarray, count: int, a: Algebra) -> np.ndarray:
    """Images of the generators ``1 * gen_g`` under an equivariant map given by its K-matrix."""
    fld = a.field
    d = a.dim
    if count == 0:
        return fld.zeros((mat.shape[0], 0))
    blocks = mat.reshape(mat.shape[0], count, d)
    return fld.tensordot(blocks, a.unit, axes=([2], [0]))


# -- grade ----------------------------------------------------------------------


@dataclass(frozen=True)
class Grade:
    """Least ``i <= bound`` with ``Ext^i(X, A) != 0``; ``value`` is None beyond the bound."""

    value: Optional[int]
    bound: int

    def __str__(self) -> str:
        return str(self.value) if self.value is not None else f">= {self.bound + 1}"

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def to_json(self) -> Any:
        return self.value if self.value is not None else f">={self.bound + 1}"


def grade(a: Algebra, x: ModuleFD, bound: int) -> Grade:
    if x.dim == 0:
        return Grade(None, bound)
    table = ext(a, x, ModuleFD.regular(a), bound)
    for i, dim in enumerate(table.dims):
        if dim:
            return Grade(i, bound)
    return Grade(None, bound)
