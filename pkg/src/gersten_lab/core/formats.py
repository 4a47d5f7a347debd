"""JSON documents for algebras, modules, bimodules and reports.

Scalars are written as canonical strings (decimal residues for ``F_p``,
``"n/d"`` for ``Q``) and sparse entries are sorted lexicographically, so the
same object always serializes to the same bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np

from .algebra import Algebra, validate
from .errors import InputError
from .linalg import FieldSpec
from .modules import Bimodule, ModuleFD

LOGGER = logging.getLogger(__name__)


def _require(doc: Any, key: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing key {key!r}")
    return doc[key]


def _int(doc: Any, key: str) -> int:
    value = _require(doc, key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InputError(f"key {key!r} must be a non-negative integer, got {value!r}")
    return value


def _sparse_entries(fld: FieldSpec, arr: np.ndarray) -> list[list[Any]]:
    return [[*(int(i) for i in idx), fld.format_scalar(arr[idx])] for idx in zip(*np.nonzero(arr))]


def _fill_sparse(fld: FieldSpec, shape: tuple[int, ...], entries: Any, key: str) -> np.ndarray:
    out = fld.zeros(shape)
    if not isinstance(entries, list):
        raise InputError(f"key {key!r} must be a list of entries")
    seen: set[tuple[int, ...]] = set()
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != len(shape) + 1:
            raise InputError(f"malformed entry {entry!r} under {key!r}")
        idx = tuple(entry[:-1])
        if not all(isinstance(i, int) and 0 <= i < n for i, n in zip(idx, shape)):
            raise InputError(f"index {list(idx)} out of range under {key!r}")
        if idx in seen:
            raise InputError(f"duplicate entry {list(idx)} under {key!r}")
        seen.add(idx)
        out[idx] = fld.parse_scalar(str(entry[-1]))
    return out


def _vector(fld: FieldSpec, values: Any, length: int, key: str) -> np.ndarray:
    if not isinstance(values, list) or len(values) != length:
        raise InputError(f"key {key!r} must be a list of {length} scalars")
    return fld.array([fld.parse_scalar(str(x)) for x in values]) if length else fld.zeros(0)


def algebra_to_json(a: Algebra) -> dict[str, Any]:
    fld = a.field
    return {
        "field": fld.to_json(),
        "name": a.name,
        "dim": a.dim,
        "basis": list(a.basis_names),
        "unit": [fld.format_scalar(x) for x in a.unit],
        "mul": _sparse_entries(fld, a.mul),
    }


def algebra_from_json(doc: Any, check: bool = True) -> Algebra:
    """Parse an algebra document.

    Args:
        doc: the decoded JSON object.
        check: run :func:`validate` and reject algebras that fail it.

    Raises:
        InputError: On malformed documents or, with ``check``, invalid structure constants.
    """
    fld = FieldSpec.from_json(_require(doc, "field"))
    d = _int(doc, "dim")
    names = doc.get("basis") or [f"e{i}" for i in range(d)]
    if len(names) != d:
        raise InputError(f"key 'basis' has {len(names)} names for dimension {d}")
    unit = _vector(fld, _require(doc, "unit"), d, "unit")
    mul = _fill_sparse(fld, (d, d, d), _require(doc, "mul"), "mul")
    a = Algebra(fld, d, tuple(str(x) for x in names), mul, unit, str(doc.get("name", "A")))
    if check:
        report = validate(a)
        if not report.ok:
            raise InputError(f"invalid algebra: {report.message}")
    return a


def module_to_json(m: ModuleFD) -> dict[str, Any]:
    return {
        "field": m.field.to_json(),
        "algebra_dim": m.algebra.dim,
        "dim": m.dim,
        "action": _sparse_entries(m.field, m.action),
    }


def module_from_json(doc: Any, algebra: Algebra) -> ModuleFD:
    fld = FieldSpec.from_json(_require(doc, "field"))
    if fld != algebra.field:
        raise InputError(f"module over {fld.name} for an algebra over {algebra.field.name}")
    if _int(doc, "algebra_dim") != algebra.dim:
        raise InputError("key 'algebra_dim' does not match the algebra")
    m = _int(doc, "dim")
    module = ModuleFD(algebra, m, _fill_sparse(fld, (algebra.dim, m, m), _require(doc, "action"), "action"))
    problem = module.validate()
    if problem:
        raise InputError(f"invalid module: {problem}")
    return module


def bimodule_to_json(m: Bimodule) -> dict[str, Any]:
    return {
        "field": m.field.to_json(),
        "left_dim": m.left_algebra.dim,
        "right_dim": m.right_algebra.dim,
        "dim": m.dim,
        "left": _sparse_entries(m.field, m.left),
        "right": _sparse_entries(m.field, m.right),
    }


def bimodule_from_json(doc: Any, left: Algebra, right: Algebra) -> Bimodule:
    fld = FieldSpec.from_json(_require(doc, "field"))
    if fld != left.field or fld != right.field:
        raise InputError("bimodule field does not match its algebras")
    if _int(doc, "left_dim") != left.dim or _int(doc, "right_dim") != right.dim:
        raise InputError("keys 'left_dim'/'right_dim' do not match the algebras")
    m = _int(doc, "dim")
    bimod = Bimodule(left, right, m,
                     _fill_sparse(fld, (left.dim, m, m), _require(doc, "left"), "left"),
                     _fill_sparse(fld, (right.dim, m, m), _require(doc, "right"), "right"))
    problem = bimod.validate()
    if problem:
        raise InputError(f"invalid bimodule: {problem}")
    return bimod


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def dump_report(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
