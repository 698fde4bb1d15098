import json
import subprocess
import sys
from pathlib import Path

import pytest

from torusfibre.cli import main

ROOT = Path(__file__).resolve().parent.parent
INST = ROOT / "instances"
GOLDEN = ROOT / "tests" / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_matches_golden(capsys):
    code, out, _ = run(capsys, "reduce", INST / "fixture.json")
    assert code == 0
    assert out == (GOLDEN / "fixture_reduce.json").read_text(encoding="utf-8")


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert run(capsys, "count-fibre", INST / "fixture_deep.json", "--out", target)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torusfibre", "reduce", str(INST / "fixture.json")],
                          capture_output=True, cwd=ROOT)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "fixture_reduce.json").read_bytes()


@pytest.mark.parametrize("name,code", [("fixture", 0), ("gcd_obstruction", 3), ("non_proportional", 4),
                                       ("degenerate", 0)])
def test_reduce_exit_codes(capsys, name, code):
    assert run(capsys, "reduce", INST / f"{name}.json")[0] == code


def test_floor_override_exhausts(capsys):
    code, out, _ = run(capsys, "reduce", INST / "fixture.json", "--floor", "-8")
    assert code == 5 and json.loads(out)["reduction"]["status"] == "FloorExhausted"


def test_count_fibre_json(capsys):
    code, out, _ = run(capsys, "count-fibre", INST / "fixture_deep.json", "--expect-gap")
    assert code == 0
    fibre = json.loads(out)["fibre"]
    assert (fibre["total"], fibre["claimed"], fibre["gap"]) == (1, 2, 1)
    assert fibre["complete"]


def test_expect_gap_fails_on_incomplete_report(capsys):
    code, out, _ = run(capsys, "count-fibre", INST / "fixture.json", "--budget", "10", "--expect-gap")
    assert code == 1 and not json.loads(out)["fibre"]["complete"]


def test_text_report(capsys):
    code, out, _ = run(capsys, "count-fibre", INST / "fixture_deep.json", "--report", "text")
    assert code == 0
    assert "total 1, claimed 2, gap 1" in out and "elapsed" in out


def test_count_fibre_stops_on_gcd_obstruction(capsys):
    code, out, _ = run(capsys, "count-fibre", INST / "gcd_obstruction.json")
    assert code == 3 and json.loads(out)["fibre"] is None


def test_missing_root_of_unity(capsys):
    code, _, err = run(capsys, "count-fibre", INST / "order4_rational.json")
    assert code == 8 and "order 4" in err


def test_field_override_supplies_the_root(capsys):
    code, out, _ = run(capsys, "count-fibre", INST / "order4_rational.json", "--field", "cyclotomic:4")
    assert code == 0 and json.loads(out)["fibre"]["gap"] == 3


@pytest.mark.parametrize("text", ['{"field": ', '[]', '{"field": "rational"}', '{"field": "octonion", "g": {}}'])
def test_malformed_input(capsys, tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text, encoding="utf-8")
    code, out, err = run(capsys, "reduce", p)
    assert code == 2 and out == "" and err.startswith("torusfibre: error:")


def test_missing_file_and_bad_level(capsys, tmp_path):
    assert run(capsys, "reduce", tmp_path / "nope.json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["count-fibre", str(INST / "fixture.json"), "--level", "x/y"])
    assert exc.value.code == 2


def test_selfcheck(capsys):
    code, out, _ = run(capsys, "selfcheck")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "selfcheck", "--corrupt-binomial-cache")
    assert code == 9
    failing = [line for line in out.splitlines() if "FAIL" in line]
    assert len(failing) == 1 and "root" in failing[0]
    # the fault is scoped to that run
    assert run(capsys, "selfcheck")[0] == 0
