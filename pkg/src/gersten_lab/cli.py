"""Command-line front end.

Every command builds or loads an algebra, runs one computation and writes a
JSON report (or a plain-text table derived from it). Exit codes: 0 success,
1 a hypothesis was refused, 2 input or usage error, 3 memory budget exceeded.
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import click
import numpy as np

from .core.algebra import Algebra, AlgebraMap, Idempotent, quotient_by_ideal, validate
from .core.builders import (
    E0_BASIS,
    TriangularAlgebra,
    e0_category_algebra,
    e0_one_point_data,
    elementary_abelian_group_algebra,
    one_point_extension,
    path_algebra_a2,
    triangular_algebra,
    upper_triangular_over,
)
from .core.errors import BudgetExceededError, HypothesisError, InputError
from .core.formats import (
    algebra_from_json,
    algebra_to_json,
    bimodule_from_json,
    dump_report,
    load_json,
    module_from_json,
)
from .core.hochschild import (
    DEFAULT_BOUND,
    AxiomResult,
    cohomology,
    fundamental_formula_defect,
    random_cochain,
    verify_gerstenhaber_axioms,
)
from .core.linalg import FieldSpec
from .core.modules import Bimodule, ModuleFD
from .core.resources import DEFAULT_BUDGET_BYTES, MemoryMonitor, ResourceBudget, budget_scope
from .gerst import (
    KINDS,
    GradedSubspace,
    extract_table,
    generation_probe,
    group_algebra_generators,
    ideal_closure,
    induced_bracket_vanishes,
    nilpotent_homogeneous,
    quotient_dims,
)
from .les import buchweitz_window, verify_green_solberg, verify_happel, verify_koenig_nagase
from .transfer import (
    check_corner_tor,
    check_homological_epi,
    check_stratifying,
    chi_corner,
    k_surjection,
    verify_transfer_structure,
)

LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class JobSpec:
    """One invocation: what to compute, on which algebra, and how to report it."""

    command: str
    builder: str
    field: Optional[str] = None
    bound: int = DEFAULT_BOUND
    k_max: int = 8
    budget_mb: int = DEFAULT_BUDGET_BYTES // 2**20
    out: Optional[str] = None
    fmt: str = "json"
    monitor: bool = False

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise InputError(f"degree bound must be non-negative, got {self.bound}")
        if self.budget_mb <= 0:
            raise InputError(f"memory budget must be positive, got {self.budget_mb}")
        if self.k_max < 1:
            raise InputError(f"kmax must be positive, got {self.k_max}")
        if self.fmt not in ("json", "table"):
            raise InputError(f"unknown format {self.fmt!r}")

    def to_json(self) -> dict[str, Any]:
        return {"command": self.command, "builder": self.builder, "field": self.field, "N": self.bound,
                "kmax": self.k_max, "budget_mb": self.budget_mb}


@dataclass(frozen=True, eq=False)
class Source:
    """A built algebra together with whatever presentation its builder knows."""

    algebra: Algebra
    presentation: Optional[TriangularAlgebra] = None
    one_point: Optional[tuple[Algebra, ModuleFD]] = None
    group: Optional[tuple[int, int]] = None
    default_idempotent: Optional[np.ndarray] = None


# -- builders ----------------------------------------------------------------------


def _field(requested: Optional[str], default: str) -> FieldSpec:
    return FieldSpec.parse(requested or default)


def _load_algebra(path: str, fld: Optional[FieldSpec]) -> Algebra:
    a = algebra_from_json(load_json(path))
    if fld is not None and a.field != fld:
        raise InputError(f"{path} is over {a.field.name}, not {fld.name}")
    return a


def _from_triangular(t: TriangularAlgebra, one_point: Optional[tuple[Algebra, ModuleFD]] = None) -> Source:
    return Source(t.algebra, t, one_point, default_idempotent=t.e.coords)


def resolve_builder(spec: str, field_name: Optional[str] = None) -> Source:
    """Turn a builder string into an algebra.

    Recognised forms: ``elemab:p,r``, ``a2``, ``e0``, ``upper:<builder>``,
    ``triangular:<R.json>,<S.json>,<M.json>``, ``ope:<R.json>,<M.json>`` and ``file:<path>``.

    Raises:
        InputError: On an unknown builder or unreadable files.
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "elemab":
        try:
            p, r = (int(x) for x in rest.split(","))
        except ValueError as exc:
            raise InputError(f"expected elemab:p,r, got {spec!r}") from exc
        return Source(elementary_abelian_group_algebra(_field(field_name, f"F{p}"), p, r), group=(p, r))
    if kind == "a2":
        t = path_algebra_a2(_field(field_name, "F2"))
        return _from_triangular(t, (t.r, t.m.left_module()))
    if kind == "e0":
        fld = _field(field_name, "F2")
        data = e0_one_point_data(fld)
        e = fld.zeros(len(E0_BASIS))
        e[0] = fld.scalar(1)
        return Source(e0_category_algebra(fld), None, (data.r, data.m), default_idempotent=e)
    if kind == "upper":
        inner = resolve_builder(rest, field_name)
        return _from_triangular(upper_triangular_over(inner.algebra))
    fld = FieldSpec.parse(field_name) if field_name else None
    if kind == "file":
        return Source(_load_algebra(rest, fld))
    if kind == "triangular":
        paths = rest.split(",")
        if len(paths) != 3:
            raise InputError(f"expected triangular:<R>,<S>,<M>, got {spec!r}")
        r, s = _load_algebra(paths[0], fld), _load_algebra(paths[1], fld)
        m = bimodule_from_json(load_json(paths[2]), r, s)
        return _from_triangular(triangular_algebra(r, s, m))
    if kind == "ope":
        paths = rest.split(",")
        if len(paths) != 2:
            raise InputError(f"expected ope:<R>,<M>, got {spec!r}")
        r = _load_algebra(paths[0], fld)
        m = module_from_json(load_json(paths[1]), r)
        return _from_triangular(one_point_extension(r, m), (r, m))
    raise InputError(f"unknown builder {spec!r}")


def _vector(a: Algebra, text: str, what: str) -> np.ndarray:
    parts = [x for x in text.split(",") if x.strip()]
    if len(parts) != a.dim:
        raise InputError(f"{what} needs {a.dim} coordinates, got {len(parts)}")
    return a.field.array([a.field.parse_scalar(x.strip()) for x in parts])


def pick_idempotent(source: Source, text: Optional[str]) -> Idempotent:
    a = source.algebra
    if text:
        return Idempotent(a, _vector(a, text, "idempotent"))
    if source.default_idempotent is None:
        raise InputError(f"{a.name} has no canonical idempotent; pass --idempotent")
    return Idempotent(a, source.default_idempotent)


def pick_surjection(source: Source, idempotent: Optional[str], ideal: Optional[str]) -> AlgebraMap:
    """``B -> B/(x)`` for ``x`` given by ``--ideal``, else ``B -> B/BeB``."""
    a = source.algebra
    generator = _vector(a, ideal, "ideal generator") if ideal else pick_idempotent(source, idempotent).coords
    return quotient_by_ideal(a, [generator])[1]


# -- output ------------------------------------------------------------------------


def _flatten(prefix: str, value: Any, out: list[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], out)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(value, list):
        out.append(f"{prefix}: {' '.join(str(v) for v in value)}")
    else:
        out.append(f"{prefix}: {value}")


def _les_table(result: dict[str, Any]) -> list[str]:
    rows = result["rows"]
    dim_keys = sorted({k for r in rows for k in r["dims"]})
    rank_keys = sorted({k for r in rows for k in r["ranks"]})
    verdict_keys = sorted({k for r in rows for k in r["verdicts"]})
    header = ["n", *dim_keys, *(f"rk_{k}" for k in rank_keys), *verdict_keys]
    lines = ["  ".join(header)]
    for r in rows:
        cells = [str(r["n"])]
        cells += [str(r["dims"].get(k, "")) for k in dim_keys]
        cells += [str(r["ranks"].get(k, "")) for k in rank_keys]
        cells += ["" if k not in r["verdicts"] else ("ok" if r["verdicts"][k] else "FAIL") for k in verdict_keys]
        lines.append("  ".join(cells))
    rest: list[str] = []
    _flatten("", {k: v for k, v in result.items() if k != "rows"}, rest)
    return lines + rest


def render_table(payload: dict[str, Any]) -> str:
    """Plain-text rendering of a report; derived from the JSON payload only."""
    result = payload.get("result", {})
    lines = [f"# {payload['command']} {payload['job']['builder']}"]
    if isinstance(result, dict) and "degrees" in result:
        lines.append("n  dim")
        lines += [f"{row['n']}  {row['dim']}" for row in result["degrees"]]
        lines.append("dims: " + " ".join(str(row["dim"]) for row in result["degrees"]))
    elif isinstance(result, dict) and "rows" in result:
        lines += _les_table(result)
    else:
        _flatten("", result, lines)
    for key in ("refused", "resources"):
        if key in payload:
            _flatten(key, payload[key], lines)
    return "\n".join(lines) + "\n"


def emit(job: JobSpec, payload: dict[str, Any]) -> None:
    text = dump_report(payload) if job.fmt == "json" else render_table(payload)
    if job.out:
        try:
            Path(job.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {job.out}: {exc.strerror}") from exc
        LOGGER.info("wrote %s", job.out)
    else:
        click.echo(text, nl=False)


def execute(job: JobSpec, compute: Callable[[Source], Any]) -> int:
    """Build the algebra, run ``compute`` under the job's budget and emit the report."""
    source = resolve_builder(job.builder, job.field)
    payload: dict[str, Any] = {"command": job.command, "job": job.to_json(), "algebra": source.algebra.name}
    code = EXIT_OK
    monitor = MemoryMonitor() if job.monitor else None
    try:
        if monitor is not None:
            monitor.start()
        with budget_scope(ResourceBudget.from_megabytes(job.budget_mb)):
            outcome = compute(source)
        if isinstance(outcome, tuple):
            result, code = outcome
        else:
            result = outcome
        payload["result"] = result
    except HypothesisError as exc:
        LOGGER.warning("%s", exc)
        payload["refused"] = {"message": str(exc)}
        if exc.report is not None:
            payload["refused"]["hypothesis"] = exc.report.to_json()
        code = EXIT_REFUSED
    finally:
        if monitor is not None:
            monitor.stop()
    if monitor is not None:
        payload["resources"] = monitor.summary()
    emit(job, payload)
    return code


# -- click plumbing ----------------------------------------------------------------


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def job_options(func: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--builder", "-b", required=True,
                     help="elemab:p,r | a2 | e0 | upper:<builder> | triangular:R,S,M | ope:R,M | file:<path>"),
        click.option("--field", "field_name", default=None, help="F<p> or Q; defaults follow the builder."),
        click.option("-N", "bound", type=int, default=DEFAULT_BOUND, show_default=True, help="Degree bound."),
        click.option("--kmax", "k_max", type=int, default=8, show_default=True, help="Largest power tried."),
        click.option("--budget-mb", type=int, default=DEFAULT_BUDGET_BYTES // 2**20, show_default=True,
                     help="Largest dense matrix allowed, in MiB."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here."),
        click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True),
        click.option("--monitor", is_flag=True, help="Add peak memory to the report (needs psutil)."),
        click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug logging."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def idempotent_option(func: Callable[..., Any]) -> Callable[..., Any]:
    return click.option("--idempotent", "-e", default=None,
                        help="Comma-separated coordinates; defaults to the builder's corner idempotent.")(func)


def _job(ctx: click.Context, params: dict[str, Any]) -> JobSpec:
    _configure_logging(params.pop("verbose", 0))
    return JobSpec(
        command=ctx.info_name or "",
        builder=params["builder"],
        field=params["field_name"],
        bound=params["bound"],
        k_max=params["k_max"],
        budget_mb=params["budget_mb"],
        out=params["out"],
        fmt=params["fmt"],
        monitor=params["monitor"],
    )


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="gersten-lab")
def cli() -> None:
    """Exact Hochschild cohomology and Gerstenhaber structure of finite-dimensional algebras."""


@cli.command("hh")
@job_options
@click.pass_context
def hh_command(ctx: click.Context, **params: Any) -> int:
    """Dimensions of HH^n(A) for n <= N."""
    job = _job(ctx, params)
    return execute(job, lambda s: cohomology(s.algebra, bound=job.bound).to_json())


def fundamental_formula_check(a: Algebra, pairs: int, seed: int = 0, max_degree: int = 3) -> AxiomResult:
    """The cochain identity relating circle, cup and the differential on random pairs."""
    rng = np.random.default_rng(seed)
    regular = Bimodule.regular(a)
    result = AxiomResult("fundamental_formula")
    for k in range(pairs):
        m, n = int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1))
        f, g = random_cochain(a, regular, m, rng), random_cochain(a, regular, n, rng)
        result.record(fundamental_formula_defect(f, g).is_zero, {"pair": k, "degrees": [m, n]})
    return result


@cli.command("gerst-check")
@job_options
@click.option("--samples", type=int, default=8, show_default=True, help="Random combinations per degree.")
@click.option("--pairs", type=int, default=100, show_default=True,
              help="Random cochain pairs for the fundamental formula.")
@click.pass_context
def gerst_check_command(ctx: click.Context, samples: int, pairs: int, **params: Any) -> int:
    """Strict Gerstenhaber axioms on HH^{<=N}(A)."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        report = verify_gerstenhaber_axioms(cohomology(s.algebra, bound=job.bound), samples=samples)
        formula = fundamental_formula_check(s.algebra, pairs)
        out = report.to_json()
        out["fundamental_formula"] = formula.to_json()
        out["passed"] = report.passed and formula.passed
        return out

    return execute(job, compute)


@cli.command("chi")
@job_options
@idempotent_option
@click.option("--structure/--no-structure", default=False, help="Also check unit, cup, bracket and square.")
@click.pass_context
def chi_command(ctx: click.Context, idempotent: Optional[str], structure: bool, **params: Any) -> int:
    """Compression HH^n(B) -> HH^n(eBe)."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        e = pick_idempotent(s, idempotent)
        graded = chi_corner(s.algebra, e, job.bound)
        out = graded.to_json()
        if structure:
            tor = check_corner_tor(s.algebra, e, job.bound)
            out["corner_tor"] = tor.to_json()
            if tor.passed:
                out["structure"] = verify_transfer_structure(graded).to_json()
        return out

    return execute(job, compute)


@cli.command("ksur")
@job_options
@idempotent_option
@click.option("--ideal", default=None, help="Generator of the kernel, comma-separated; defaults to the idempotent.")
@click.option("--structure/--no-structure", default=False, help="Also check unit, cup, bracket and square.")
@click.pass_context
def ksur_command(ctx: click.Context, idempotent: Optional[str], ideal: Optional[str], structure: bool,
                 **params: Any) -> int:
    """Map HH^n(B) -> HH^n(B/I) of a homological epimorphism."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        graded = k_surjection(pick_surjection(s, idempotent, ideal), job.bound)
        out = graded.to_json()
        if structure:
            out["structure"] = verify_transfer_structure(graded).to_json()
        return out

    return execute(job, compute)


@cli.command("happel")
@job_options
@click.pass_context
def happel_command(ctx: click.Context, **params: Any) -> int:
    """Long exact sequence of a one-point extension R[M]."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        if s.one_point is None:
            raise InputError("happel needs a one-point extension builder (a2, e0 or ope:)")
        r, m = s.one_point
        return verify_happel(r, m, job.bound).to_json()

    return execute(job, compute)


@cli.command("green-solberg")
@job_options
@idempotent_option
@click.pass_context
def green_solberg_command(ctx: click.Context, idempotent: Optional[str], **params: Any) -> int:
    """Long exact sequence of a triangular algebra with corner eBe."""
    job = _job(ctx, params)
    return execute(job, lambda s: verify_green_solberg(s.algebra, pick_idempotent(s, idempotent),
                                                       job.bound).to_json())


@cli.command("koenig-nagase")
@job_options
@idempotent_option
@click.pass_context
def koenig_nagase_command(ctx: click.Context, idempotent: Optional[str], **params: Any) -> int:
    """Both long exact sequences of a stratifying ideal BeB."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        e = pick_idempotent(s, idempotent)
        return verify_koenig_nagase(s.algebra, e, job.bound, s.presentation).to_json()

    return execute(job, compute)


@cli.command("buchweitz")
@job_options
@idempotent_option
@click.pass_context
def buchweitz_command(ctx: click.Context, idempotent: Optional[str], **params: Any) -> int:
    """Compression window below the grade of B/BeB."""
    job = _job(ctx, params)
    return execute(job, lambda s: buchweitz_window(s.algebra, pick_idempotent(s, idempotent), job.bound).to_json())


@cli.command("stratifying")
@job_options
@idempotent_option
@click.pass_context
def stratifying_command(ctx: click.Context, idempotent: Optional[str], **params: Any) -> int:
    """Whether e is a stratifying idempotent to degree N."""
    job = _job(ctx, params)

    def compute(s: Source) -> tuple[dict[str, Any], int]:
        report = check_stratifying(s.algebra, pick_idempotent(s, idempotent), job.bound)
        return report.to_json(), EXIT_OK if report.passed else EXIT_REFUSED

    return execute(job, compute)


@cli.command("homepi")
@job_options
@idempotent_option
@click.option("--ideal", default=None, help="Generator of the kernel, comma-separated; defaults to the idempotent.")
@click.pass_context
def homepi_command(ctx: click.Context, idempotent: Optional[str], ideal: Optional[str], **params: Any) -> int:
    """Whether B -> B/I is a homological epimorphism to degree N."""
    job = _job(ctx, params)

    def compute(s: Source) -> tuple[dict[str, Any], int]:
        report = check_homological_epi(pick_surjection(s, idempotent, ideal), job.bound)
        return report.to_json(), EXIT_OK if report.passed else EXIT_REFUSED

    return execute(job, compute)


def _ideal_report(s: Source, job: JobSpec) -> dict[str, Any]:
    coh = cohomology(s.algebra, bound=job.bound)
    table = extract_table(coh)
    nil = nilpotent_homogeneous(table, job.k_max)
    closures = {kind: ideal_closure(table, nil.subspace, kind) for kind in KINDS}
    out: dict[str, Any] = {
        "dims": list(table.dims),
        "nilpotent": nil.to_json(),
        "ideals": {kind: {"dims": c.dims, "quotient_dims": quotient_dims(table, c)} for kind, c in closures.items()},
        "containments": {
            "I_in_WeakG": closures["I"].issubspace(closures["WeakG"]),
            "WeakG_in_FullG": closures["WeakG"].issubspace(closures["FullG"]),
            "LieI_in_FullG": closures["LieI"].issubspace(closures["FullG"]),
        },
        "induced_bracket_zero": induced_bracket_vanishes(table, closures["WeakG"]).to_json(),
    }
    if s.group is not None and job.bound >= 1:
        p, r = s.group
        gens = group_algebra_generators(coh, p, r)
        unit = coh.unit_class()
        out["generator_brackets_delta"] = all(
            coh.bracket(x, y) == (unit if i == j else coh.zero(0))
            for i, x in enumerate(gens.x) for j, y in enumerate(gens.y)
        )
    return out


@cli.command("ideals")
@job_options
@click.pass_context
def ideals_command(ctx: click.Context, **params: Any) -> int:
    """Nilpotent classes and the four ideals they generate."""
    job = _job(ctx, params)
    return execute(job, lambda s: _ideal_report(s, job))


@cli.command("probe")
@job_options
@click.option("--kind", type=click.Choice(list(KINDS)), default="I", show_default=True,
              help="Ideal generated by the nilpotent classes.")
@click.pass_context
def probe_command(ctx: click.Context, kind: str, **params: Any) -> int:
    """New generators per degree of HH^*/ideal (bounded evidence, not a proof)."""
    job = _job(ctx, params)

    def compute(s: Source) -> dict[str, Any]:
        table = extract_table(cohomology(s.algebra, bound=job.bound))
        closure: GradedSubspace = ideal_closure(table, nilpotent_homogeneous(table, job.k_max).subspace, kind)
        out = generation_probe(table, closure).to_json()
        out["kind"] = kind
        return out

    return execute(job, compute)


@cli.command("validate")
@click.option("--in", "path", required=True, type=click.Path(dir_okay=False), help="Algebra JSON to check.")
@click.option("-v", "--verbose", count=True)
def validate_command(path: str, verbose: int) -> int:
    """Associativity and unit laws of an algebra file."""
    _configure_logging(verbose)
    a = algebra_from_json(load_json(path), check=False)
    report = validate(a)
    click.echo(dump_report({"command": "validate", "path": path, "algebra": a.name, "result": report.to_json()}),
               nl=False)
    return EXIT_OK if report.ok else EXIT_INPUT


@cli.command("export")
@click.option("--builder", "-b", required=True, help="Any builder string accepted by the other commands.")
@click.option("--field", "field_name", default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("-v", "--verbose", count=True)
def export_command(builder: str, field_name: Optional[str], out: Optional[str], verbose: int) -> int:
    """Write the algebra JSON of a builder."""
    _configure_logging(verbose)
    text = dump_report(algebra_to_json(resolve_builder(builder, field_name).algebra))
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures onto exit codes."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="gersten-lab",
                          standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT if isinstance(exc, click.UsageError) else exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_REFUSED
    except BudgetExceededError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_BUDGET
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except HypothesisError as exc:
        click.echo(f"refused: {exc}", err=True)
        return EXIT_REFUSED
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
