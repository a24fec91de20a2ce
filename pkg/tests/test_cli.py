import json

import pytest

from tractorbgg.cli import main, parse_seeds


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip_runtime(text):
    d = json.loads(text)
    for c in d["checks"]:
        c.pop("runtime_ms")
    return d


def test_seed_ranges():
    assert parse_seeds("1..5") == [1, 2, 3, 4, 5]
    assert parse_seeds("7") == [7]


def test_spectrum_projective_n4(capsys):
    code, out, _ = run(capsys, "spectrum", "--projective", "-n", "4", "--module", "sym2-std", "-j", "0")
    d = json.loads(out)
    assert code == 0
    assert {e for blk in d["data"]["spectrum"].values() for e in blk} == {"-8", "-5", "0"}


def test_spectrum_grassmann_magnitudes(capsys):
    code, out, _ = run(capsys, "spectrum", "--grassmann", "-q", "3", "-j", "0")
    mags = {abs(int(e)) for blk in json.loads(out)["data"]["spectrum"].values() for e in blk}
    assert code == 0 and mags == {6, 2, 0}


def test_spectrum_projective_j1_contains_v2_block(capsys):
    code, out, _ = run(capsys, "spectrum", "--projective", "-n", "3", "-j", "1")
    assert code == 0
    assert "-4" in json.loads(out)["data"]["spectrum"]["2"]


@pytest.mark.parametrize("argv", [["spectrum", "-n", "99"], ["spectrum", "--module", "bogus"],
                                  ["spectrum", "--projective", "--module", "lambda2-std"],
                                  ["verify", "bogus"], ["verify", "kostant", "--seed", "x..y"],
                                  ["spectrum", "-j", "9"]])
def test_usage_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_prolong_flat(capsys):
    code, out, _ = run(capsys, "prolong", "--builtin", "flat")
    d = json.loads(out)
    assert code == 0 and d["data"]["phi_is_zero"] is True


def test_prolong_random_seed7_matches_closed_form(capsys):
    code, out, _ = run(capsys, "prolong", "--builtin", "projective-random", "-n", "3", "--seed", "7")
    d = json.loads(out)
    assert code == 0
    assert {c["name"]: c["status"] for c in d["checks"]}["prolong.closed_form"] == "pass"


def test_prolong_is_deterministic(capsys):
    a = run(capsys, "prolong", "--builtin", "projective-random", "-n", "2", "--seed", "3")[1]
    b = run(capsys, "prolong", "--builtin", "projective-random", "-n", "2", "--seed", "3")[1]
    assert _strip_runtime(a) == _strip_runtime(b)


def test_malformed_geometry_no_partial_report(capsys, tmp_path):
    f = tmp_path / "g.json"
    f.write_text('{"n": 3, "gamma": [')
    code, out, err = run(capsys, "prolong", "--geometry", str(f))
    assert code == 2 and out == "" and "invalid geometry" in err


def test_geometry_with_trace_rejected(capsys, tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"n": 2, "gamma": [{"a": 0, "b": 0, "c": 0, "poly": [["1", [0, 0]]]}]}))
    code, out, err = run(capsys, "prolong", "--geometry", str(f))
    assert code == 2 and "volume" in err


def test_geometry_file_prolongs(capsys, tmp_path):
    from tractorbgg.geometries import dump_geometry, sample_projective_patch
    f = tmp_path / "g.json"
    f.write_text(dump_geometry(sample_projective_patch(2, 5)))
    code, out, _ = run(capsys, "prolong", "--geometry", str(f), "--format", "table")
    assert code == 0 and "overall: pass" in out


def test_verify_grassmann_reports_display_failures(capsys):
    code, out, _ = run(capsys, "verify", "grassmann", "--seed", "0")
    d = json.loads(out)
    status = {c["name"]: c["status"] for c in d["checks"]}
    assert code == 1
    assert status["grassmann.seed0.phi1_derived"] == "pass"
    assert status["grassmann.seed0.phi1"] == "fail"
