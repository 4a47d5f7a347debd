"""Truncated Hochschild cochain complex, cohomology and the Gerstenhaber operations.

A cochain ``f in C^n(A, M)`` is stored as a tensor of shape ``(dim M, d, ..., d)``
with ``n`` algebra axes, ``F[s, j_1, ..., j_n]`` being coordinate ``s`` of
``f(e_{j_1} (x) ... (x) e_{j_n})``. Flattened, coordinate ``s`` and the monomial
``(j_1, ..., j_n)`` (lexicographic, most significant first) give the index
``s * d**n + j``.

The differential is

    (df)(a_1..a_{n+1}) = a_1 f(a_2..) + sum_i (-1)^i f(..a_i a_{i+1}..) + (-1)^{n+1} f(a_1..a_n) a_{n+1}.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .algebra import Algebra
from .errors import GerstenLabError, InputError, NotACocycleError, TruncationError
from .linalg import FieldSpec, Matrix, Subquotient, Subspace, kernel_basis, solve
from .modules import Bimodule
from .resources import ResourceBudget, active_budget, thread_count

LOGGER = logging.getLogger(__name__)

DEFAULT_BOUND = 3


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def is_regular(m: Bimodule, a: Algebra) -> bool:
    """True when ``m`` is ``a`` as a bimodule over itself (same basis)."""
    fld = a.field
    return (
        m.left_algebra is a
        and m.right_algebra is a
        and m.dim == a.dim
        and fld.equal(m.left, a.left_mult)
        and fld.equal(m.right, a.right_mult)
    )


# -- cochains --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cochain:
    """An element of ``C^n(A, M)``; degree ``-1`` is the zero object."""

    algebra: Algebra
    coefficients: Bimodule
    degree: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.degree < -1:
            raise InputError(f"cochain degree {self.degree} is below -1")
        if self.degree >= 0:
            shape = (self.coefficients.dim,) + (self.algebra.dim,) * self.degree
            if self.values.shape != shape:
                raise InputError(f"cochain values have shape {self.values.shape}, expected {shape}")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @classmethod
    def zero(cls, a: Algebra, m: Bimodule, degree: int) -> "Cochain":
        if degree < 0:
            return cls(a, m, -1, a.field.zeros(0))
        return cls(a, m, degree, a.field.zeros((m.dim,) + (a.dim,) * degree))

    @classmethod
    def from_flat(cls, a: Algebra, m: Bimodule, degree: int, vector: np.ndarray) -> "Cochain":
        shape = (m.dim,) + (a.dim,) * degree
        if vector.shape != (int(np.prod(shape)),):
            raise InputError(f"flat cochain of length {vector.shape} for degree {degree}")
        return cls(a, m, degree, vector.reshape(shape))

    @classmethod
    def constant(cls, a: Algebra, m: Bimodule, value: np.ndarray) -> "Cochain":
        """The degree-0 cochain with value ``value`` in ``M``."""
        return cls(a, m, 0, a.field.array(value))

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    @property
    def is_zero(self) -> bool:
        return self.degree < 0 or self.field.is_zero(self.values)

    def _like(self, other: "Cochain") -> None:
        if other.degree != self.degree or other.coefficients is not self.coefficients:
            raise InputError("cochains of different degree or coefficients")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._like(other)
        if self.degree < 0:
            return self
        return Cochain(self.algebra, self.coefficients, self.degree, self.field.add(self.values, other.values))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._like(other)
        if self.degree < 0:
            return self
        return Cochain(self.algebra, self.coefficients, self.degree, self.field.sub(self.values, other.values))

    def scale(self, s: Any) -> "Cochain":
        if self.degree < 0:
            return self
        return Cochain(self.algebra, self.coefficients, self.degree, self.field.scale(self.values, s))

    def evaluate(self, *indices: int) -> np.ndarray:
        """Value on the basis monomial ``e_{i_1} (x) ... (x) e_{i_n}``."""
        if len(indices) != self.degree:
            raise InputError(f"{len(indices)} arguments for a cochain of degree {self.degree}")
        return self.values[(slice(None),) + tuple(indices)]


def random_cochain(a: Algebra, m: Bimodule, degree: int, rng: np.random.Generator) -> Cochain:
    fld = a.field
    return Cochain(a, m, degree, fld.random(rng, (m.dim,) + (a.dim,) * degree))


# -- the differential ------------------------------------------------------


def apply_differential(f: Cochain) -> Cochain:
    """``df`` for a single cochain, by tensor contractions."""
    a, m, n = f.algebra, f.coefficients, f.degree
    fld = a.field
    if n < 0:
        return Cochain.zero(a, m, 0)
    F = f.values
    # a_1 f(a_2..)
    out = np.moveaxis(fld.tensordot(m.left, F, axes=([2], [0])), 0, 1)
    for i in range(1, n + 1):
        merged = fld.tensordot(F, a.mul, axes=([i], [2]))
        merged = np.moveaxis(merged, [-2, -1], [i, i + 1])
        out = fld.sub(out, merged) if i % 2 else fld.add(out, merged)
    last = np.moveaxis(fld.tensordot(F, m.right, axes=([0], [2])), -1, 0)
    out = fld.sub(out, last) if (n + 1) % 2 else fld.add(out, last)
    return Cochain(a, m, n + 1, np.ascontiguousarray(out))


def _scatter_terms(a: Algebra, m: Bimodule, n: int) -> tuple[np.ndarray, np.ndarray, list[Any]]:
    """Row indices, column indices and values of every elementary term of ``d^n``."""
    d, dm = a.dim, m.dim
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[Any] = []
    dn = d**n
    J = np.arange(dn, dtype=np.int64)

    # first term: row s*d^{n+1} + i1*d^n + J, col r*d^n + J
    i1, s, r = np.nonzero(m.left)
    if i1.size:
        rows.append(((s * d ** (n + 1) + i1 * dn)[:, None] + J[None, :]).ravel())
        cols.append(((r * dn)[:, None] + J[None, :]).ravel())
        vals.append((m.left[i1, s, r], J.size, 1))

    aa, bb, kk = np.nonzero(a.mul)
    for i in range(1, n + 1):
        sgn = sign(i)
        pre = d ** (i - 1)
        post = d ** (n - i)
        # (s, P) prefix and S suffix range over all values
        sp = np.arange(dm * pre, dtype=np.int64)
        suf = np.arange(post, dtype=np.int64)
        row_base = ((sp[:, None] * d + aa[None, :]) * d + bb[None, :]) * post  # (sp, nz)
        col_base = (sp[:, None] * d + kk[None, :]) * post
        rows.append((row_base[:, :, None] + suf[None, None, :]).ravel())
        cols.append((col_base[:, :, None] + suf[None, None, :]).ravel())
        coeff = np.broadcast_to(a.mul[aa, bb, kk][None, :, None], (sp.size, aa.size, suf.size)).ravel()
        vals.append((coeff, 1, sgn))

    # last term: row s*d^{n+1} + J*d + j, col r*d^n + J
    j, s, r = np.nonzero(m.right)
    if j.size:
        rows.append(((s * d ** (n + 1) + j)[:, None] + (J * d)[None, :]).ravel())
        cols.append(((r * dn)[:, None] + J[None, :]).ravel())
        vals.append((m.right[j, s, r], J.size, sign(n + 1)))

    return (
        np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64),
        np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64),
        vals,
    )


def differential_matrix(a: Algebra, m: Bimodule, n: int, budget: Optional[ResourceBudget] = None) -> Matrix:
    """Matrix of ``d^n: C^n(A, M) -> C^{n+1}(A, M)`` in the flat cochain bases.

    Raises:
        InputError: If ``n < 0`` or the bimodule is not over ``(a, a)``.
        BudgetExceededError: If the dense matrix would not fit the budget.
    """
    if n < 0:
        raise InputError("differential degree must be non-negative")
    if m.left_algebra is not a or m.right_algebra is not a:
        raise InputError("coefficients are not an a-bimodule")
    fld = a.field
    d, dm = a.dim, m.dim
    n_rows, n_cols = dm * d ** (n + 1), dm * d**n
    itemsize = 8 if fld.is_object else np.dtype(fld.dtype).itemsize
    budget = budget if budget is not None else active_budget()
    budget.check(n, n_rows, n_cols, itemsize)
    out = fld.zeros((n_rows, n_cols))
    if out.size == 0:
        return Matrix(fld, out)
    rows, cols, parts = _scatter_terms(a, m, n)
    if fld.is_object:
        flat_vals = np.concatenate([
            np.repeat(np.asarray(v, dtype=object) * sgn, rep) for v, rep, sgn in parts
        ]) if parts else np.zeros(0, dtype=object)
        np.add.at(out, (rows, cols), flat_vals)
        out = fld.array(out) if not fld.is_rational else out
    else:
        flat_vals = np.concatenate([np.repeat(v.astype(np.int64) * sgn, rep) for v, rep, sgn in parts])
        keys = rows * n_cols + cols
        uniq, inverse = np.unique(keys, return_inverse=True)
        sums = np.bincount(inverse, weights=flat_vals.astype(np.float64)).astype(np.int64) % fld.p
        out.reshape(-1)[uniq] = sums.astype(out.dtype)
    LOGGER.debug("differential of degree %d for %s: %dx%d", n, a.name, n_rows, n_cols)
    return Matrix(fld, out)


# -- cohomology ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DegreeData:
    """Everything a table keeps about one degree ``n``."""

    degree: int
    differential: Matrix
    cycles: Subspace
    boundaries: Subspace
    quotient: Subquotient
    previous: Optional[Matrix]

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def rank(self) -> int:
        """Rank of ``d^n``."""
        return self.differential.cols - self.cycles.dim


@dataclass(frozen=True, eq=False)
class CohClass:
    """A class in ``HH^degree`` given by coordinates in the table's representative basis."""

    table: "CohomologyTable"
    degree: int
    coords: np.ndarray

    def __post_init__(self) -> None:
        if self.coords.shape != (self.table.dim(self.degree),):
            raise InputError(f"class coordinates of length {self.coords.shape} in degree {self.degree}")

    @property
    def is_zero(self) -> bool:
        return self.table.field.is_zero(self.coords)

    def __add__(self, other: "CohClass") -> "CohClass":
        if other.degree != self.degree or other.table is not self.table:
            raise InputError("sum of classes in different degrees or tables")
        return CohClass(self.table, self.degree, self.table.field.add(self.coords, other.coords))

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + other.scale(-1)

    def scale(self, s: Any) -> "CohClass":
        return CohClass(self.table, self.degree, self.table.field.scale(self.coords, s))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohClass):
            return NotImplemented
        return (
            other.table is self.table
            and other.degree == self.degree
            and self.table.field.equal(self.coords, other.coords)
        )

    __hash__ = object.__hash__

    def cochain(self) -> Cochain:
        return self.table.cochain(self)

    def to_json(self) -> dict[str, Any]:
        return {"degree": self.degree, "coords": self.table.field.format_array(self.coords)}


@dataclass(frozen=True, eq=False)
class Reduction:
    """Result of :meth:`CohomologyTable.reduce`; ``witness`` satisfies ``d(witness) = input - sum coords*reps``."""

    cls: CohClass
    witness: Optional[Cochain]


@dataclass(frozen=True, eq=False)
class CohomologyTable:
    """``HH^n(A, M)`` for ``0 <= n <= bound`` with fixed representing cocycles."""

    algebra: Algebra
    coefficients: Bimodule
    bound: int
    degrees: tuple[DegreeData, ...]
    regular: bool = False

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def _check(self, n: int) -> None:
        if n > self.bound:
            raise TruncationError(n, self.bound)

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        self._check(n)
        return self.degrees[n].dim

    @property
    def dims(self) -> list[int]:
        return [dd.dim for dd in self.degrees]

    def rank(self, n: int) -> int:
        """Rank of ``d^n``; zero for negative ``n``."""
        return 0 if n < 0 else self.degrees[n].rank

    def representatives(self, n: int) -> np.ndarray:
        self._check(n)
        return self.degrees[n].quotient.representatives

    def zero(self, n: int) -> CohClass:
        if n >= 0:
            self._check(n)
        return CohClass(self, n, self.field.zeros(self.dim(n)))

    def basis_class(self, n: int, i: int) -> CohClass:
        c = self.zero(n)
        c.coords[i] = self.field.scalar(1)
        return c

    def basis(self, n: int) -> list[CohClass]:
        return [self.basis_class(n, i) for i in range(self.dim(n))]

    def element(self, n: int, coords: Any) -> CohClass:
        return CohClass(self, n, self.field.array(coords))

    def cochain(self, c: CohClass) -> Cochain:
        a, m = self.algebra, self.coefficients
        if c.degree < 0:
            return Cochain.zero(a, m, -1)
        if self.dim(c.degree) == 0:
            return Cochain.zero(a, m, c.degree)
        flat = self.field.dot(c.coords, self.representatives(c.degree))
        return Cochain.from_flat(a, m, c.degree, flat)

    def reduce(self, f: Cochain, witness: bool = False) -> Reduction:
        """Class coordinates of a cocycle.

        Args:
            f: a cocycle of degree at most ``bound``.
            witness: also solve for ``h`` with ``f - sum coords*reps = dh``.

        Raises:
            NotACocycleError: If ``df != 0``; the error carries ``df``.
            TruncationError: If the degree exceeds the bound.
        """
        if f.coefficients is not self.coefficients:
            raise InputError("cochain has different coefficients than the table")
        if f.degree < 0:
            return Reduction(self.zero(-1), None)
        n = f.degree
        self._check(n)
        data = self.degrees[n]
        coords, ok = data.quotient.reduce(f.flat)
        if not ok:
            raise NotACocycleError(n, data.differential.apply(f.flat))
        cls = CohClass(self, n, coords)
        if not witness or n == 0:
            return Reduction(cls, None)
        fld = self.field
        rest = fld.sub(f.flat, fld.dot(coords, data.quotient.representatives)) if data.dim else f.flat
        assert data.previous is not None
        h = solve(data.previous, rest)
        if h is None:
            raise GerstenLabError(f"coboundary in degree {n} has no preimage")
        return Reduction(cls, Cochain.from_flat(self.algebra, self.coefficients, n - 1, h))

    def classify(self, f: Cochain) -> CohClass:
        """Class of a cochain whose degree may be negative or above the bound check."""
        if f.degree < 0:
            return self.zero(-1)
        return self.reduce(f).cls

    # class-level operations; coefficients must be the algebra itself

    def _regular_only(self) -> None:
        if not self.regular:
            raise InputError("class-level products need coefficients M = A")

    def _target(self, degree: int) -> int:
        if degree > self.bound:
            raise TruncationError(degree, self.bound)
        return degree

    def unit_class(self) -> CohClass:
        self._regular_only()
        return self.classify(Cochain.constant(self.algebra, self.coefficients, self.algebra.unit))

    def cup(self, x: CohClass, y: CohClass) -> CohClass:
        self._regular_only()
        deg = self._target(x.degree + y.degree)
        if x.degree < 0 or y.degree < 0:
            return self.zero(deg)
        return self.classify(cup(x.cochain(), y.cochain()))

    def circle(self, x: CohClass, y: CohClass) -> CohClass:
        self._regular_only()
        deg = self._target(x.degree + y.degree - 1)
        if x.degree < 0 or y.degree < 0:
            return self.zero(deg)
        return self.classify(circle(x.cochain(), y.cochain()))

    def bracket(self, x: CohClass, y: CohClass) -> CohClass:
        self._regular_only()
        deg = self._target(x.degree + y.degree - 1)
        if x.degree < 0 or y.degree < 0:
            return self.zero(deg)
        return self.classify(bracket(x.cochain(), y.cochain()))

    def square(self, x: CohClass) -> CohClass:
        self._regular_only()
        if x.degree >= 0 and x.degree % 2:
            raise InputError(f"square is defined on even degrees, got {x.degree}")
        deg = self._target(2 * x.degree - 1)
        if x.degree < 0:
            return self.zero(deg)
        return self.classify(square(x.cochain()))

    def to_json(self, representatives: bool = False) -> dict[str, Any]:
        fld = self.field
        rows = []
        for dd in self.degrees:
            row: dict[str, Any] = {"n": dd.degree, "dim": dd.dim}
            if representatives:
                row["representatives"] = [fld.format_array(r) for r in dd.quotient.representatives]
            rows.append(row)
        return {
            "algebra": self.algebra.name,
            "field": fld.name,
            "bound": self.bound,
            "coefficients_dim": self.coefficients.dim,
            "degrees": rows,
        }


def _degree_matrices(a: Algebra, m: Bimodule, n: int, budget: ResourceBudget) -> tuple[Matrix, Subspace]:
    dn = differential_matrix(a, m, n, budget)
    return dn, kernel_basis(dn)


def cohomology(
    a: Algebra,
    m: Optional[Bimodule] = None,
    bound: int = DEFAULT_BOUND,
    budget: Optional[ResourceBudget] = None,
    check_square: bool = True,
) -> CohomologyTable:
    """``HH^n(a, m)`` for ``n <= bound`` from the bar cocomplex.

    Args:
        a: the algebra.
        m: coefficient bimodule; the regular bimodule when omitted.
        bound: the degree bound ``N``.
        budget: memory budget for the differential matrices.
        check_square: verify ``d^{n+1} d^n = 0`` in every computed degree.

    Raises:
        BudgetExceededError: naming the first degree whose differential does not fit.
        InputError: If ``d o d != 0`` (inconsistent coefficient bimodule).
    """
    if bound < 0:
        raise InputError("degree bound must be non-negative")
    coeff = m if m is not None else Bimodule.regular(a)
    fld = a.field
    budget = budget if budget is not None else active_budget()
    for n in range(bound + 1):
        cols = coeff.dim * a.dim**n
        budget.check(n, cols * a.dim, cols, 8 if fld.is_object else np.dtype(fld.dtype).itemsize)
    workers = min(thread_count(), bound + 1)
    LOGGER.debug("cohomology of %s to degree %d on %d threads", a.name, bound, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda n: _degree_matrices(a, coeff, n, budget), range(bound + 1)))
    degrees = []
    for n, (dn, cycles) in enumerate(results):
        prev = results[n - 1][0] if n else None
        if prev is not None and check_square and not (dn @ prev).is_zero():
            raise InputError(f"d o d is nonzero in degree {n}; the coefficient bimodule is inconsistent")
        boundaries = Subspace.span(fld, dn.cols, prev.data.T) if prev is not None else Subspace.zero(fld, dn.cols)
        degrees.append(DegreeData(n, dn, cycles, boundaries, Subquotient(cycles, boundaries), prev))
        LOGGER.debug("HH^%d(%s): dim %d", n, a.name, degrees[-1].dim)
    return CohomologyTable(a, coeff, bound, tuple(degrees), is_regular(coeff, a))


# -- products ---------------------------------------------------------------


def standard_pairing(mf: Bimodule, mg: Bimodule, a: Algebra) -> tuple[np.ndarray, Bimodule]:
    """Pairing tensor ``P[x, y, k]`` for ``M (x)_A N -> target`` when one side is ``A``."""
    fld = a.field
    if is_regular(mf, a):
        # a * n through the left action of the second factor
        return np.ascontiguousarray(mg.left.transpose(0, 2, 1)), mg
    if is_regular(mg, a):
        return np.ascontiguousarray(mf.right.transpose(2, 0, 1)), mf
    raise InputError(f"no standard pairing for coefficients of dimensions {mf.dim} and {mg.dim} over {fld.name}")


def cup(f: Cochain, g: Cochain, pairing: Optional[np.ndarray] = None, target: Optional[Bimodule] = None) -> Cochain:
    """``(f cup g)(a_1..a_{m+n}) = f(a_1..a_m) . g(a_{m+1}..a_{m+n})``.

    Args:
        f, g: cochains over the same algebra.
        pairing: tensor ``P[x, y, k]`` of a balanced map ``M (x) N -> target``; when
            omitted one of the coefficient bimodules must be the algebra itself.
        target: coefficients of the result, required with an explicit pairing.
    """
    a = f.algebra
    if g.algebra is not a:
        raise InputError("cup product of cochains over different algebras")
    fld = a.field
    if pairing is None:
        pairing, target = standard_pairing(f.coefficients, g.coefficients, a)
    elif target is None:
        raise InputError("an explicit pairing needs its target bimodule")
    if f.degree < 0 or g.degree < 0:
        return Cochain.zero(a, target, f.degree + g.degree)
    m = f.degree
    t = fld.tensordot(f.values, pairing, axes=([0], [0]))  # (J..., y, k)
    t = fld.tensordot(t, g.values, axes=([m], [0]))  # (J..., k, K...)
    return Cochain(a, target, m + g.degree, np.ascontiguousarray(np.moveaxis(t, m, 0)))


def circle_i(f: Cochain, g: Cochain, i: int) -> Cochain:
    """Substitution of ``g`` into the ``i``-th argument of ``f`` (``1 <= i <= deg f``)."""
    m, n = f.degree, g.degree
    if not 1 <= i <= m:
        raise InputError(f"substitution slot {i} outside 1..{m}")
    fld = f.field
    t = fld.tensordot(f.values, g.values, axes=([i], [0]))
    if n:
        t = np.moveaxis(t, list(range(t.ndim - n, t.ndim)), list(range(i, i + n)))
    return Cochain(f.algebra, f.coefficients, m + n - 1, np.ascontiguousarray(t))


def circle(f: Cochain, g: Cochain) -> Cochain:
    """``f . g = sum_{i=1}^{m} (-1)^{(i-1)(n-1)} f ._i g``; ``g`` must take values in ``A``.

    ``m = 0`` gives the zero cochain of degree ``n - 1``.
    """
    a = f.algebra
    if g.algebra is not a or not is_regular(g.coefficients, a):
        raise InputError("the inner cochain of a circle product must have coefficients A")
    m, n = f.degree, g.degree
    out = Cochain.zero(a, f.coefficients, m + n - 1)
    if m <= 0 or n < 0:
        return out
    for i in range(1, m + 1):
        term = circle_i(f, g, i)
        out = out - term if (i - 1) * (n - 1) % 2 else out + term
    return out


def bracket(f: Cochain, g: Cochain) -> Cochain:
    """``{f, g} = f . g - (-1)^{(m-1)(n-1)} g . f`` for cochains with coefficients A."""
    m, n = f.degree, g.degree
    left = circle(f, g)
    right = circle(g, f)
    return left + right if (m - 1) * (n - 1) % 2 else left - right


def square(f: Cochain) -> Cochain:
    """``sq(f) = f . f`` on even degrees; degree 0 maps to the zero object."""
    if f.degree >= 0 and f.degree % 2:
        raise InputError(f"square is defined on even degrees, got {f.degree}")
    return circle(f, f)


def fundamental_formula_defect(f: Cochain, g: Cochain) -> Cochain:
    """LHS minus RHS of ``d(f.g) + (-1)^n df.g = f.dg + (-1)^n [g cup f - (-1)^{mn} f cup g]``.

    Here ``f`` has coefficients ``M`` and ``g`` coefficients ``A``; the result is
    zero for every pair.
    """
    m, n = f.degree, g.degree
    s_n = sign(n)
    lhs = apply_differential(circle(f, g)) if m + n - 1 >= 0 else Cochain.zero(f.algebra, f.coefficients, m + n)
    lhs = lhs + circle(apply_differential(f), g).scale(s_n)
    rhs = circle(f, apply_differential(g))
    commutator = cup(g, f) - cup(f, g).scale(sign(m * n))
    rhs = rhs + commutator.scale(s_n)
    return lhs - rhs


# -- axioms -----------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    instances: int = 0
    failures: int = 0
    witness: Optional[dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness: dict[str, Any]) -> None:
        self.instances += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "instances": self.instances,
            "passed": self.passed,
            "vacuous": self.instances == 0,
            "witness": self.witness,
        }


@dataclass(frozen=True, eq=False)
class StructureTensors:
    """Cup and bracket on basis classes of a table with ``M = A``.

    ``cup[(m, n)]`` has shape ``(dim m, dim n, dim m+n)`` and ``bracket[(m, n)]``
    shape ``(dim m, dim n, dim m+n-1)``; pairs whose result leaves ``0..bound`` are absent.
    """

    table: CohomologyTable
    cup: dict[tuple[int, int], np.ndarray]
    bracket: dict[tuple[int, int], np.ndarray]
    unit: np.ndarray

    def cup_tensor(self, m: int, n: int) -> Optional[np.ndarray]:
        return self._get(self.cup, m, n, m + n)

    def bracket_tensor(self, m: int, n: int) -> Optional[np.ndarray]:
        return self._get(self.bracket, m, n, m + n - 1)

    def _get(self, store: dict[tuple[int, int], np.ndarray], m: int, n: int, out: int) -> Optional[np.ndarray]:
        t = self.table
        if out > t.bound or m > t.bound or n > t.bound:
            return None
        if m < 0 or n < 0 or out < 0:
            return t.field.zeros((t.dim(m), t.dim(n), t.dim(out)))
        return store[(m, n)]


def bilinear(fld: FieldSpec, tensor: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return fld.dot(y, fld.tensordot(x, tensor, axes=([0], [0])))


def structure_tensors(table: CohomologyTable) -> StructureTensors:
    """Evaluate cup and bracket on every in-bound pair of basis classes."""
    table._regular_only()
    fld = table.field
    N = table.bound
    cups: dict[tuple[int, int], np.ndarray] = {}
    brackets: dict[tuple[int, int], np.ndarray] = {}
    reps = {n: [table.cochain(c) for c in table.basis(n)] for n in range(N + 1)}
    for m in range(N + 1):
        for n in range(N + 1):
            if m + n <= N:
                t = fld.zeros((table.dim(m), table.dim(n), table.dim(m + n)))
                for i, f in enumerate(reps[m]):
                    for j, g in enumerate(reps[n]):
                        t[i, j] = table.classify(cup(f, g)).coords
                cups[(m, n)] = t
            if 0 <= m + n - 1 <= N:
                t = fld.zeros((table.dim(m), table.dim(n), table.dim(m + n - 1)))
                for i, f in enumerate(reps[m]):
                    for j, g in enumerate(reps[n]):
                        t[i, j] = table.classify(bracket(f, g)).coords
                brackets[(m, n)] = t
    LOGGER.debug("structure tensors for %s: %d cup blocks, %d bracket blocks", table.algebra.name,
                 len(cups), len(brackets))
    return StructureTensors(table, cups, brackets, table.unit_class().coords)


@dataclass
class AxiomReport:
    algebra: str
    bound: int
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> AxiomResult:
        return next(r for r in self.results if r.name == name)

    def to_json(self) -> dict[str, Any]:
        return {
            "algebra": self.algebra,
            "bound": self.bound,
            "passed": self.passed,
            "axioms": [r.to_json() for r in self.results],
        }


def _eq(fld: FieldSpec, x: np.ndarray, y: np.ndarray) -> bool:
    return fld.equal(x, y)


def verify_gerstenhaber_axioms(
    table: CohomologyTable,
    samples: int = 8,
    seed: int = 0,
    tensors: Optional[StructureTensors] = None,
) -> AxiomReport:
    """Check the strict Gerstenhaber axioms on all in-bound basis tuples.

    The bilinear axioms (graded commutativity, antisymmetry, Jacobi, Poisson)
    run on structure tensors over all basis tuples; the non-linear ones
    (``{a,a} = 0``, ``{{a,a},a} = 0`` and the four square identities) also run
    on ``samples`` random combinations per degree. Cup associativity and the
    unit law are reported as well.
    """
    fld = table.field
    N = table.bound
    st = tensors if tensors is not None else structure_tensors(table)
    rng = np.random.default_rng(seed)
    dims = {n: table.dim(n) for n in range(-1, N + 1)}
    res = {name: AxiomResult(name) for name in
           ("assoc", "unit", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10")}

    def samples_in(n: int) -> list[np.ndarray]:
        out = [fld.eye(dims[n])[i] for i in range(dims[n])]
        if dims[n]:
            out += [fld.random(rng, dims[n]) for _ in range(samples)]
        return out

    degrees = range(N + 1)
    for m in degrees:
        for n in degrees:
            c_mn, c_nm = st.cup_tensor(m, n), st.cup_tensor(n, m)
            if c_mn is not None and c_nm is not None:
                ok = _eq(fld, c_mn, fld.scale(c_nm.transpose(1, 0, 2), sign(m * n)))
                res["G1"].record(ok, {"degrees": [m, n]})
            b_mn, b_nm = st.bracket_tensor(m, n), st.bracket_tensor(n, m)
            if b_mn is not None and b_nm is not None:
                ok = _eq(fld, b_mn, fld.scale(b_nm.transpose(1, 0, 2), -sign((m - 1) * (n - 1))))
                res["G2"].record(ok, {"degrees": [m, n]})
        c0m = st.cup_tensor(0, m)
        if c0m is not None and dims[m]:
            ok = _eq(fld, fld.tensordot(st.unit, c0m, axes=([0], [0])), fld.eye(dims[m]))
            res["unit"].record(ok, {"degree": m})
    for m in degrees:
        for n in degrees:
            for p in degrees:
                _triple_axioms(fld, st, m, n, p, res)
    for m in degrees:
        if m % 2:
            b = st.bracket_tensor(m, m)
            if b is not None:
                for x in samples_in(m):
                    res["G3"].record(fld.is_zero(bilinear(fld, b, x, x)), {"degree": m, "x": fld.format_array(x)})
        else:
            b = st.bracket_tensor(m, m)
            b2 = st.bracket_tensor(2 * m - 1, m)
            if b is not None and b2 is not None and 2 * m - 1 >= 0:
                for x in samples_in(m):
                    inner = bilinear(fld, b, x, x)
                    res["G4"].record(fld.is_zero(bilinear(fld, b2, inner, x)),
                                     {"degree": m, "x": fld.format_array(x)})
    _square_axioms(table, st, rng, samples, res)
    report = AxiomReport(table.algebra.name, N, list(res.values()))
    LOGGER.info("axioms for %s to degree %d: %s", table.algebra.name, N, "pass" if report.passed else "FAIL")
    return report


def _triple_axioms(
    fld: FieldSpec, st: StructureTensors, m: int, n: int, p: int, res: dict[str, AxiomResult]
) -> None:
    # associativity (ab)c = a(bc)
    ab, ab_c = st.cup_tensor(m, n), st.cup_tensor(m + n, p)
    bc, a_bc = st.cup_tensor(n, p), st.cup_tensor(m, n + p)
    if all(x is not None for x in (ab, ab_c, bc, a_bc)):
        lhs = fld.tensordot(ab, ab_c, axes=([2], [0]))
        rhs = fld.tensordot(bc, a_bc, axes=([2], [1])).transpose(2, 0, 1, 3)
        res["assoc"].record(_eq(fld, lhs, rhs), {"degrees": [m, n, p]})
    # Jacobi {a,{b,c}} = {{a,b},c} + (-1)^{(m-1)(n-1)} {b,{a,c}}
    t = [st.bracket_tensor(n, p), st.bracket_tensor(m, n + p - 1), st.bracket_tensor(m, n),
         st.bracket_tensor(m + n - 1, p), st.bracket_tensor(m, p), st.bracket_tensor(n, m + p - 1)]
    if all(x is not None for x in t) and m + n + p - 2 >= 0:
        b_np, b_a, b_mn, b_ab_c, b_mp, b_b = t
        assert b_np is not None and b_a is not None and b_mn is not None
        assert b_ab_c is not None and b_mp is not None and b_b is not None
        lhs = fld.tensordot(b_np, b_a, axes=([2], [1])).transpose(2, 0, 1, 3)
        first = fld.tensordot(b_mn, b_ab_c, axes=([2], [0]))
        second = fld.tensordot(b_mp, b_b, axes=([2], [1])).transpose(0, 2, 1, 3)
        rhs = fld.add(first, fld.scale(second, sign((m - 1) * (n - 1))))
        res["G5"].record(_eq(fld, lhs, rhs), {"degrees": [m, n, p]})
    # Poisson {a,bc} = {a,b}c + (-1)^{(m-1)n} b{a,c}
    u = [st.cup_tensor(n, p), st.bracket_tensor(m, n + p), st.bracket_tensor(m, n),
         st.cup_tensor(m + n - 1, p), st.bracket_tensor(m, p), st.cup_tensor(n, m + p - 1)]
    if all(x is not None for x in u) and m + n + p - 1 >= 0:
        c_np, b_a_bc, b_mn, c_ab_c, b_mp, c_b = u
        assert c_np is not None and b_a_bc is not None and b_mn is not None
        assert c_ab_c is not None and b_mp is not None and c_b is not None
        lhs = fld.tensordot(c_np, b_a_bc, axes=([2], [1])).transpose(2, 0, 1, 3)
        first = fld.tensordot(b_mn, c_ab_c, axes=([2], [0]))
        second = fld.tensordot(b_mp, c_b, axes=([2], [1])).transpose(0, 2, 1, 3)
        rhs = fld.add(first, fld.scale(second, sign((m - 1) * n)))
        res["G6"].record(_eq(fld, lhs, rhs), {"degrees": [m, n, p]})


def _square_axioms(
    table: CohomologyTable,
    st: StructureTensors,
    rng: np.random.Generator,
    samples: int,
    res: dict[str, AxiomResult],
) -> None:
    fld = table.field
    N = table.bound

    def sq(deg: int, x: np.ndarray) -> np.ndarray:
        return table.square(CohClass(table, deg, x)).coords

    def cup_(m: int, n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        t = st.cup_tensor(m, n)
        assert t is not None
        return bilinear(fld, t, x, y)

    def br(m: int, n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        t = st.bracket_tensor(m, n)
        assert t is not None
        return bilinear(fld, t, x, y)

    def pool(n: int) -> list[np.ndarray]:
        d = table.dim(n)
        return [fld.eye(d)[i] for i in range(d)] + [fld.random(rng, d) for _ in range(samples if d else 0)]

    evens = [n for n in range(0, N + 1, 2)]
    for m in evens:
        if 2 * m - 1 > N or 2 * m - 1 < 0:
            continue
        xs = pool(m)
        for x in xs:
            r = fld.random(rng, 1)[0]
            lhs = sq(m, fld.scale(x, r))
            res["G7"].record(_eq(fld, lhs, fld.scale(sq(m, x), fld.scalar(r) * fld.scalar(r))),
                             {"degree": m, "x": fld.format_array(x)})
        for x, y in zip(xs, xs[1:] + xs[:1]):
            lhs = sq(m, fld.add(x, y))
            rhs = fld.add(fld.add(sq(m, x), sq(m, y)), br(m, m, x, y))
            res["G8"].record(_eq(fld, lhs, rhs), {"degree": m, "x": fld.format_array(x), "y": fld.format_array(y)})
    for m in evens:
        for n in evens:
            # {a, sq b} = {{a,b},b}
            if 1 <= 2 * n - 1 <= N and m + 2 * n - 2 <= N:
                for a in pool(m):
                    for b in pool(n):
                        lhs = br(m, 2 * n - 1, a, sq(n, b))
                        rhs = br(m + n - 1, n, br(m, n, a, b), b)
                        res["G9"].record(_eq(fld, lhs, rhs), {"degrees": [m, n], "a": fld.format_array(a),
                                                              "b": fld.format_array(b)})
            elif n == 0 and m >= 2:
                # sq vanishes on HH^0, so {{a,b},b} must too
                for a in pool(m):
                    for b in pool(0):
                        rhs = br(m - 1, 0, br(m, 0, a, b), b)
                        res["G9"].record(fld.is_zero(rhs), {"degrees": [m, n], "a": fld.format_array(a),
                                                            "b": fld.format_array(b)})
            # sq(ab) = a^2 sq(b) + sq(a) b^2 + a{a,b}b
            top = 2 * (m + n) - 1
            if top < 0 or top > N:
                continue
            for a in pool(m):
                for b in pool(n):
                    lhs = sq(m + n, cup_(m, n, a, b))
                    total = fld.zeros(table.dim(top))
                    if 2 * n - 1 >= 0:
                        total = fld.add(total, cup_(2 * m, 2 * n - 1, cup_(m, m, a, a), sq(n, b)))
                    if 2 * m - 1 >= 0:
                        total = fld.add(total, cup_(2 * m - 1, 2 * n, sq(m, a), cup_(n, n, b, b)))
                    if m + n - 1 >= 0:
                        inner = cup_(m, m + n - 1, a, br(m, n, a, b))
                        total = fld.add(total, cup_(2 * m + n - 1, n, inner, b))
                    res["G10"].record(_eq(fld, lhs, total), {"degrees": [m, n], "a": fld.format_array(a),
                                                             "b": fld.format_array(b)})
