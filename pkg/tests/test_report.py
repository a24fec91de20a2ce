import json

import pytest
from sympy import QQ

from tractorbgg.exact_arith import CoordinateRing
from tractorbgg.linalg import SMat
from tractorbgg.report import Report, serialize


def test_serialize_exact_values():
    K = CoordinateRing(2)
    x, _ = K.gens
    assert serialize(QQ(3, 4)) == "3/4"
    assert serialize(x / 2) == [["1/2", [1, 0]]]
    m = SMat.from_dense([[0, QQ(1, 2)]])
    assert serialize(m) == {"shape": [1, 2], "nnz": 1, "entries": [[0, 1, "1/2"]]}


def test_failure_always_has_witness():
    r = Report("verify", {})
    r.add("a", False)
    r.add("b", True)
    d = r.to_dict()
    assert d["status"] == "fail"
    assert "witness" in d["checks"][0] and "witness" not in d["checks"][1]


def test_duplicate_names_rejected():
    r = Report("verify", {})
    r.add("a", True)
    r.add("a", True)
    with pytest.raises(ValueError):
        r.to_dict()


def test_checks_sorted_and_schema_present():
    r = Report("verify", {"seed": 1})
    r.add("z", True)
    r.add("a", True)
    d = json.loads(r.to_json())
    assert [c["name"] for c in d["checks"]] == ["a", "z"]
    assert d["schema_version"] == 1 and d["tool"] == "tractorbgg"


def test_run_times_callable():
    r = Report("x", {})
    assert r.run("c", lambda: (True, None))
    assert r.checks[0].runtime_ms >= 0
