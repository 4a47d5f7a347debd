"""Maps between Hochschild cohomologies and the checks that license them.

Three families of maps are produced, all as :class:`GradedMap` on class
coordinates:

* compression to a corner algebra ``eBe`` (``f -> e f(c_1, ..., c_n) e``),
* the map induced by a surjection ``pi: B -> A`` with ``Tor^B_{>0}(A, A) = 0``,
  obtained by comparing bar-type resolutions over ``A^ev``,
* the component maps of a one-point extension ``R[M]``.

A map is only produced when its hypothesis holds to the bound; otherwise a
:class:`HypothesisError` carrying the :class:`HypothesisReport` is raised.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

import numpy as np

from .core.algebra import Algebra, AlgebraMap, CornerData, Idempotent, corner, enveloping, two_sided_ideal
from .core.builders import TriangularAlgebra, one_point_extension
from .core.errors import ChainMapError, HypothesisError, InputError, TruncationError
from .core.hochschild import (
    AxiomReport,
    AxiomResult,
    Cochain,
    CohClass,
    CohomologyTable,
    StructureTensors,
    apply_differential,
    cohomology,
    random_cochain,
    structure_tensors,
)
from .core.homalg import (
    ExtTable,
    bar_resolution,
    ext_on,
    hom_matrix,
    lift,
    module_bar_resolution,
    tor,
)
from .core.linalg import Matrix, rank
from .core.modules import Bimodule, ModuleFD, corner_bimodules, tensor_over

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Degree-preserving linear map between truncated cohomology tables.

    ``matrices[n]`` has shape ``(target.dim(n), source.dim(n))``; column ``i`` holds
    the target coordinates of the image of basis class ``i``.
    """

    source: CohomologyTable
    target: Union[CohomologyTable, ExtTable]
    matrices: tuple[np.ndarray, ...]
    label: str
    cochain_map: Optional[Callable[[Cochain], Any]] = None

    def __post_init__(self) -> None:
        for n, mat in enumerate(self.matrices):
            shape = (self.target.dim(n), self.source.dim(n))
            if mat.shape != shape:
                raise InputError(f"{self.label}: matrix in degree {n} has shape {mat.shape}, expected {shape}")

    @property
    def field(self) -> Any:
        return self.source.field

    @property
    def bound(self) -> int:
        return len(self.matrices) - 1

    def matrix(self, n: int) -> np.ndarray:
        if n < 0:
            return self.field.zeros((0, 0))
        if n > self.bound:
            raise TruncationError(n, self.bound)
        return self.matrices[n]

    def rank(self, n: int) -> int:
        if n < 0:
            return 0
        return rank(Matrix(self.field, self.matrix(n)))

    def ranks(self) -> list[int]:
        return [self.rank(n) for n in range(self.bound + 1)]

    def is_injective(self, n: int) -> bool:
        return self.rank(n) == self.source.dim(n)

    def is_surjective(self, n: int) -> bool:
        return self.rank(n) == self.target.dim(n)

    def is_bijective(self, n: int) -> bool:
        return self.is_injective(n) and self.is_surjective(n)

    def __call__(self, cls: CohClass) -> CohClass:
        if not isinstance(self.target, CohomologyTable):
            raise InputError(f"{self.label} does not land in a cohomology table")
        if cls.table is not self.source:
            raise InputError("class belongs to another table")
        return CohClass(self.target, cls.degree, self.field.dot(self.matrix(cls.degree), cls.coords))

    def to_json(self) -> dict[str, Any]:
        fld = self.field
        return {
            "label": self.label,
            "bound": self.bound,
            "ranks": self.ranks(),
            "matrices": [fld.format_array(m) if m.size else [] for m in self.matrices],
        }


@dataclass
class HypothesisReport:
    """Named verdicts with the data that decided them."""

    name: str
    bound: int
    verdicts: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def require(self) -> "HypothesisReport":
        if not self.passed:
            failing = sorted(k for k, v in self.verdicts.items() if not v)
            LOGGER.info("refusing %s: %s", self.name, ", ".join(failing))
            raise HypothesisError(f"{self.name}: hypothesis fails to degree {self.bound} ({', '.join(failing)})",
                                  self)
        return self

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "bound": self.bound, "passed": self.passed,
                "verdicts": dict(self.verdicts), "witnesses": dict(self.witnesses)}


# -- hypotheses -----------------------------------------------------------------


def corner_tor_dims(b: Algebra, e: Idempotent, bound: int) -> list[int]:
    """``dim Tor^{eBe}_i(Be, eB)`` for ``0 <= i <= bound``."""
    cb = corner_bimodules(b, e)
    table = tor(cb.corner, cb.be.right_module(), cb.eb.left_module(), bound)
    return list(table.dims)


def check_stratifying(b: Algebra, e: Idempotent, bound: int) -> HypothesisReport:
    """Is ``Be (x)_{eBe} eB -> BeB`` bijective with ``Tor^{eBe}_i(Be, eB) = 0`` for ``1 <= i <= bound``?

    Raises:
        InputError: If ``e`` is zero.
    """
    if e.is_zero:
        raise InputError("stratifying check needs a nonzero idempotent")
    fld = b.field
    cb = corner_bimodules(b, e)
    product = tensor_over(cb.be, cb.eb)
    mu = cb.multiplication(product)
    image_rank = rank(Matrix(fld, mu))
    ideal = two_sided_ideal(b, [e.coords])
    tor_table = tor(cb.corner, cb.be.right_module(), cb.eb.left_module(), bound)
    report = HypothesisReport("stratifying", bound)
    report.verdicts["multiplication_injective"] = image_rank == product.bimodule.dim
    report.verdicts["multiplication_onto_ideal"] = image_rank == ideal.dim
    report.verdicts["tor_vanishing"] = not any(tor_table.dims[1:])
    report.witnesses.update({
        "tensor_dim": product.bimodule.dim,
        "ideal_dim": ideal.dim,
        "multiplication_rank": image_rank,
        "tor_dims": list(tor_table.dims),
    })
    LOGGER.debug("stratifying check for %s: %s", b.name, report.verdicts)
    return report


def quotient_bimodule(pi: AlgebraMap) -> Bimodule:
    """``A`` as a ``B``-bimodule through ``pi``."""
    return Bimodule.regular(pi.target).pullback(pi, pi)


def check_homological_epi(pi: AlgebraMap, bound: int) -> HypothesisReport:
    """Is ``pi`` surjective with ``Tor^B_i(A, A) = 0`` for ``1 <= i <= bound``?"""
    report = HypothesisReport("homological_epimorphism", bound)
    problem = pi.verify()
    report.verdicts["algebra_map"] = problem is None
    report.verdicts["surjectivity"] = pi.is_surjective
    if problem:
        report.witnesses["algebra_map"] = problem
    if not (report.verdicts["algebra_map"] and report.verdicts["surjectivity"]):
        report.verdicts["tor_vanishing"] = False
        return report
    a_bimod = quotient_bimodule(pi)
    table = tor(pi.source, a_bimod.right_module(), a_bimod.left_module(), bound)
    report.verdicts["tor_vanishing"] = not any(table.dims[1:])
    report.witnesses["tor_dims"] = list(table.dims)
    report.witnesses["homological_epi_bound"] = bound
    return report


def check_corner_tor(b: Algebra, e: Idempotent, bound: int, name: str = "corner_tor") -> HypothesisReport:
    report = HypothesisReport(name, bound)
    dims = corner_tor_dims(b, e, bound)
    report.verdicts["tor_vanishing"] = not any(dims[1:])
    report.witnesses["tor_dims"] = dims
    return report


# -- compression to a corner ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CornerCompression:
    """``f -> e f(c_1, ..., c_n) e`` from ``C^n(B, B)`` to ``C^n(eBe, eBe)``."""

    algebra: Algebra
    corner: Algebra
    data: CornerData
    source_coefficients: Bimodule
    target_coefficients: Bimodule

    def __call__(self, f: Cochain) -> Cochain:
        fld = self.algebra.field
        if f.degree < 0:
            return Cochain.zero(self.corner, self.target_coefficients, -1)
        out = f.values
        for _ in range(f.degree):
            out = fld.tensordot(out, self.data.embedding, axes=([1], [1]))
        e = self.data.idempotent.coords
        b = self.algebra
        project = fld.dot(b.left_matrix(e), b.right_matrix(e))[list(self.data.pivots), :]
        values = fld.tensordot(project, out, axes=([1], [0]))
        return Cochain(self.corner, self.target_coefficients, f.degree, values)

    def chain_defect(self, f: Cochain) -> Cochain:
        """``chi(df) - d(chi f)``; zero for every cochain."""
        return self(apply_differential(f)) - apply_differential(self(f))


def _class_matrix(source: CohomologyTable, target: CohomologyTable, n: int,
                  image: Callable[[Cochain], Cochain]) -> np.ndarray:
    fld = source.field
    cols = [target.reduce(image(c.cochain())).cls.coords for c in source.basis(n)]
    if not cols:
        return fld.zeros((target.dim(n), 0))
    return np.stack(cols, axis=1) if target.dim(n) else fld.zeros((0, len(cols)))


def chi_corner(
    b: Algebra,
    e: Idempotent,
    bound: int,
    source: Optional[CohomologyTable] = None,
    target: Optional[CohomologyTable] = None,
) -> GradedMap:
    """Compression ``HH^n(B) -> HH^n(eBe)`` for ``n <= bound``.

    Args:
        b: the algebra.
        e: an idempotent of ``b``.
        bound: the degree bound.
        source: a precomputed ``HH(B)`` table with that bound.
        target: a precomputed ``HH(eBe)`` table; its algebra must be the corner built here
            unless supplied together with ``source`` from an earlier call.

    Raises:
        ChainMapError: If the cochain-level compression fails to commute with the
            differentials on sampled cochains of degree ``<= bound``.
    """
    c, data = corner(b, e)
    source = source if source is not None else cohomology(b, bound=bound)
    if target is None:
        target = cohomology(c, bound=bound)
    else:
        c = target.algebra
    compression = CornerCompression(b, c, data, source.coefficients, target.coefficients)
    problem = verify_chain_map(compression, bound + 1)
    if problem is not None:
        raise ChainMapError(problem)
    mats = tuple(_class_matrix(source, target, n, compression) for n in range(bound + 1))
    LOGGER.debug("compression %s -> %s ranks %s", b.name, c.name,
                  [rank(Matrix(b.field, m)) for m in mats])
    return GradedMap(source, target, mats, "chi_corner", compression)


def verify_chain_map(compression: CornerCompression, bound: int, samples: int = 4, seed: int = 0) -> Optional[str]:
    """None when compression commutes with the differentials on random cochains of degree ``< bound``."""
    rng = np.random.default_rng(seed)
    b = compression.algebra
    for n in range(bound):
        for _ in range(samples):
            f = random_cochain(b, compression.source_coefficients, n, rng)
            if not compression.chain_defect(f).is_zero:
                return f"compression is not a chain map in degree {n}"
    return None


# -- surjections --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SurjectionTransfer:
    """Cochain-level realization of the map induced by ``pi: B -> A``.

    ``pi o f`` is read as a cochain on ``A (x)_B BB (x)_B A`` and pulled back along a
    comparison lift from the bar resolution of ``A``.
    """

    pi: AlgebraMap
    lifting: Any
    target_coefficients: Bimodule
    env_module: ModuleFD

    def __call__(self, f: Cochain) -> Cochain:
        pi = self.pi
        a = pi.target
        fld = a.field
        n = f.degree
        if n < 0:
            return Cochain.zero(a, self.target_coefficients, -1)
        da = a.dim
        pushed = fld.dot(pi.matrix, f.values.reshape(f.values.shape[0], -1))  # (dA, dB^n)
        hom = np.ascontiguousarray(pushed.T).reshape(-1)  # generator-major
        pulled = fld.dot(hom_matrix(self.lifting.images[n], self.env_module), hom)
        values = np.ascontiguousarray(pulled.reshape(da**n, da).T).reshape((da,) + (da,) * n)
        return Cochain(a, self.target_coefficients, n, values)


def k_surjection(
    pi: AlgebraMap,
    bound: int,
    source: Optional[CohomologyTable] = None,
    target: Optional[CohomologyTable] = None,
) -> GradedMap:
    """``k: HH^n(B) -> HH^n(A)`` for ``n <= bound``.

    Raises:
        HypothesisError: If ``pi`` is not a homological epimorphism through degree ``bound + 1``.
    """
    check_homological_epi(pi, bound + 1).require()
    b, a = pi.source, pi.target
    source = source if source is not None else cohomology(b, bound=bound)
    target = target if target is not None else cohomology(a, bound=bound)
    env = enveloping(a)
    induced = bar_resolution(pi, env, bound)
    standard = bar_resolution(AlgebraMap.identity(a), env, bound)
    lifting = lift(a.field.eye(a.dim), standard, induced, bound)
    transfer = SurjectionTransfer(pi, lifting, target.coefficients, induced.module)
    mats = tuple(_class_matrix(source, target, n, transfer) for n in range(bound + 1))
    LOGGER.debug("k for %s -> %s: ranks %s", b.name, a.name, [rank(Matrix(a.field, m)) for m in mats])
    return GradedMap(source, target, mats, "k_surjection", transfer)


# -- one-point extensions ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HappelMaps:
    """Component maps for ``B = R[M]``.

    ``g_r``, ``g_s`` are the compressions to ``R`` and ``S = K``; ``h`` sends
    ``f`` to ``(r_1..r_n, m) -> f(r_1..r_n) m`` in ``Ext_R(M, M)``; ``h_s0`` is the
    degree-zero map ``HH^0(S) -> End_R(M)`` given by the right action.
    """

    extension: TriangularAlgebra
    g_r: GradedMap
    g_s: GradedMap
    h: GradedMap
    h_s0: np.ndarray
    ext: ExtTable

    @property
    def bound(self) -> int:
        return self.g_r.bound

    def g_matrix(self, n: int) -> np.ndarray:
        return np.concatenate([self.g_r.matrix(n), self.g_s.matrix(n)], axis=0)

    def h_matrix(self, n: int) -> np.ndarray:
        """``(h_R, -h_S)`` on ``HH^n(R) + HH^n(S)``."""
        fld = self.g_r.field
        hs = self.h_s0 if n == 0 else fld.zeros((self.ext.dim(n), self.g_s.target.dim(n)))
        return np.concatenate([self.h.matrix(n), fld.neg(hs)], axis=1)


def _module_action_cocycle(m: ModuleFD, f: Cochain) -> np.ndarray:
    """``(r_1..r_n, m_s) -> f(r_1..r_n) m_s`` as a vector of ``Hom_R(P_n, M)``."""
    fld = m.field
    dr = f.values.shape[0]
    flat = f.values.reshape(dr, -1)  # (t, J)
    t = fld.tensordot(flat, m.action, axes=([0], [0]))  # (J, u, s)
    return np.ascontiguousarray(t.transpose(0, 2, 1)).reshape(-1)


def happel_maps(
    r: Algebra,
    m: ModuleFD,
    bound: int,
    tables: Optional[dict[str, CohomologyTable]] = None,
    extension: Optional[TriangularAlgebra] = None,
) -> HappelMaps:
    """Build ``g`` and ``h`` for ``B = R[M]`` to degree ``bound``.

    Args:
        r: the algebra ``R``.
        m: a left R-module.
        bound: the degree bound.
        tables: optional precomputed tables under the keys ``"B"``, ``"R"``, ``"S"``.
        extension: ``one_point_extension(r, m)`` when already built.
    """
    tables = dict(tables or {})
    ext_b = extension if extension is not None else one_point_extension(r, m)
    b = ext_b.algebra
    hb = tables.get("B") or cohomology(b, bound=bound)
    hr = tables.get("R") or cohomology(ext_b.r, bound=bound)
    hs = tables.get("S") or cohomology(ext_b.s, bound=bound)
    g_r = chi_corner(b, ext_b.e, bound, hb, hr)
    g_s = chi_corner(b, ext_b.e_prime, bound, hb, hs)
    fld = r.field
    left = ext_b.m.left_module()
    resolution = module_bar_resolution(ext_b.r, left, bound + 1)
    ext_table = ext_on(resolution, left, bound)
    mats = []
    for n in range(bound + 1):
        cols = [ext_table.reduce(n, _module_action_cocycle(left, c.cochain())) for c in hr.basis(n)]
        mats.append(np.stack(cols, axis=1) if cols and ext_table.dim(n) else fld.zeros((ext_table.dim(n), len(cols))))
    h = GradedMap(hr, ext_table, tuple(mats), "happel_h")
    s_cols = []
    for c in hs.basis(0):
        z = c.cochain().values
        act = ext_b.m.act_right(z)
        s_cols.append(ext_table.reduce(0, np.ascontiguousarray(act.T).reshape(-1)))
    h_s0 = np.stack(s_cols, axis=1) if s_cols and ext_table.dim(0) else fld.zeros((ext_table.dim(0), len(s_cols)))
    LOGGER.debug("happel maps for %s: Ext dims %s", b.name, ext_table.dims)
    return HappelMaps(ext_b, g_r, g_s, h, h_s0, ext_table)


# -- structure preservation -----------------------------------------------------------


def verify_transfer_structure(
    graded: GradedMap,
    bound: Optional[int] = None,
    tensors: Optional[tuple[StructureTensors, StructureTensors]] = None,
    samples: int = 4,
    seed: int = 0,
) -> AxiomReport:
    """Check that ``graded`` preserves unit, cup, bracket and square on basis classes.

    Squares are compared on basis classes and on random combinations.
    """
    src, tgt = graded.source, graded.target
    if not isinstance(tgt, CohomologyTable):
        raise InputError(f"{graded.label} does not land in a cohomology table")
    N = graded.bound if bound is None else min(bound, graded.bound)
    fld = src.field
    ts, tt = tensors if tensors is not None else (structure_tensors(src), structure_tensors(tgt))
    unit = AxiomResult("unit")
    unit.record(fld.equal(fld.dot(graded.matrix(0), ts.unit), tt.unit), {"degree": 0})
    cup_r = AxiomResult("cup")
    br_r = AxiomResult("bracket")
    sq_r = AxiomResult("square")

    def pushed(tensor_src: np.ndarray, out: int) -> np.ndarray:
        return fld.tensordot(tensor_src, graded.matrix(out), axes=([2], [1]))

    def pulled(tensor_tgt: np.ndarray, m: int, n: int) -> np.ndarray:
        t = fld.tensordot(graded.matrix(m).T, tensor_tgt, axes=([1], [0]))  # (i, b, z)
        return fld.tensordot(t, graded.matrix(n), axes=([1], [0])).transpose(0, 2, 1)

    for m in range(N + 1):
        for n in range(N + 1):
            for result, get_s, get_t, out in (
                (cup_r, ts.cup_tensor, tt.cup_tensor, m + n),
                (br_r, ts.bracket_tensor, tt.bracket_tensor, m + n - 1),
            ):
                if not 0 <= out <= N:
                    continue
                s_t, t_t = get_s(m, n), get_t(m, n)
                if s_t is None or t_t is None or s_t.size == 0:
                    continue
                diff = fld.sub(pushed(s_t, out), pulled(t_t, m, n))
                bad = np.argwhere(np.any(diff != 0, axis=2)) if diff.size else np.zeros((0, 2))
                result.instances += s_t.shape[0] * s_t.shape[1]
                if len(bad):
                    result.failures += len(bad)
                    if result.witness is None:
                        result.witness = {"degrees": [m, n], "basis": [int(bad[0][0]), int(bad[0][1])]}
    rng = np.random.default_rng(seed)
    for n in range(2, N + 1, 2):
        if 2 * n - 1 > N:
            break
        pool = [c.coords for c in src.basis(n)]
        pool += [fld.random(rng, src.dim(n)) for _ in range(samples if src.dim(n) else 0)]
        for coords in pool:
            x = src.element(n, coords)
            lhs = graded(src.square(x))
            rhs = tgt.square(graded(x))
            sq_r.record(lhs == rhs, {"degree": n, "coords": fld.format_array(coords)})
    label = f"{graded.label}:{src.algebra.name}->{tgt.algebra.name}"
    return AxiomReport(label, N, [unit, cup_r, br_r, sq_r])
