import json
from pathlib import Path
from typing import Any, Callable

import pytest

from gersten_lab.core.algebra import Algebra
from gersten_lab.core.builders import e0_one_point_data
from gersten_lab.core.errors import InputError
from gersten_lab.core.formats import (
    algebra_from_json,
    algebra_to_json,
    bimodule_from_json,
    bimodule_to_json,
    dump_report,
    load_json,
    module_from_json,
    module_to_json,
)
from gersten_lab.core.linalg import FieldSpec
from gersten_lab.core.modules import Bimodule


class TestAlgebraDocuments:
    def test_parse_hand_written(self, algebra_doc: dict[str, Any], cyclic2: Algebra) -> None:
        a = algebra_from_json(algebra_doc)
        assert a.dim == 2
        assert a.field.equal(a.mul, cyclic2.mul)

    def test_export_is_canonical(self, klein: Algebra) -> None:
        doc = algebra_to_json(klein)
        again = algebra_to_json(algebra_from_json(json.loads(json.dumps(doc))))
        assert dump_report(doc) == dump_report(again)
        assert doc["mul"] == sorted(doc["mul"])

    def test_rational_scalars(self, rationals: FieldSpec) -> None:
        doc = {"field": "rationals", "dim": 1, "unit": ["1"], "mul": [[0, 0, 0, "1"]]}
        a = algebra_from_json(doc)
        assert a.basis_names == ("e0",)
        assert algebra_to_json(a)["field"] == "rationals"

    def test_rejects_non_associative(self, broken_doc: dict[str, Any]) -> None:
        with pytest.raises(InputError, match="associative|invalid algebra"):
            algebra_from_json(broken_doc)

    @pytest.mark.parametrize(
        "patch",
        [
            {"dim": -1},
            {"dim": "2"},
            {"unit": ["1"]},
            {"mul": [[0, 0, 5, "1"]]},
            {"mul": [[0, 0, 0, "1"], [0, 0, 0, "1"]]},
            {"field": {"prime": 4}},
            {"basis": ["1"]},
        ],
    )
    def test_malformed(self, algebra_doc: dict[str, Any], patch: dict[str, Any]) -> None:
        with pytest.raises(InputError):
            algebra_from_json({**algebra_doc, **patch})

    def test_missing_key(self, algebra_doc: dict[str, Any]) -> None:
        del algebra_doc["mul"]
        with pytest.raises(InputError, match="mul"):
            algebra_from_json(algebra_doc)


class TestModuleDocuments:
    def test_module_round_trip(self, f2: FieldSpec) -> None:
        data = e0_one_point_data(f2)
        doc = module_to_json(data.m)
        back = module_from_json(doc, data.r)
        assert f2.equal(back.action, data.m.action)

    def test_module_over_wrong_algebra(self, f2: FieldSpec, cyclic2: Algebra) -> None:
        doc = module_to_json(e0_one_point_data(f2).m)
        with pytest.raises(InputError):
            module_from_json(doc, cyclic2)

    def test_bimodule_round_trip(self, cyclic2: Algebra) -> None:
        reg = Bimodule.regular(cyclic2)
        back = bimodule_from_json(bimodule_to_json(reg), cyclic2, cyclic2)
        assert back.validate() is None
        assert cyclic2.field.equal(back.right, reg.right)


class TestFiles:
    def test_load(self, write_json: Callable[[str, Any], Path], algebra_doc: dict[str, Any]) -> None:
        path = write_json("a.json", algebra_doc)
        assert load_json(path) == algebra_doc

    def test_load_missing(self, tmp_path: Path) -> None:
        with pytest.raises(InputError, match="cannot read"):
            load_json(tmp_path / "absent.json")

    def test_load_garbage(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InputError, match="not valid JSON"):
            load_json(path)

    def test_dump_report_is_sorted(self) -> None:
        text = dump_report({"b": 1, "a": [1, 2]})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
