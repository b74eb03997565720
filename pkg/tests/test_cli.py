import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cellres.cli import _epsilon_shift, _glue_values, lattice_from_json, parse_vector, InputError
from cellres.lattice import lawrence_lift

from fixture_runner import FIXTURES, fixture_commands, run

COMMANDS = fixture_commands()


@pytest.mark.parametrize("name,args", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_golden(name, args):
    code, out = run(args)
    assert code == 0
    assert out == (FIXTURES / "golden" / f"{name}.out").read_text()


def test_deterministic():
    for name, args in COMMANDS[:4]:
        assert run(args) == run(args)


def test_anderson_verify_fails_with_witness():
    code, out = run(["verify", "--rays", "hirzebruch2.json", "--strat", "anderson", "--grading", "pic_diag.json"])
    assert code == 1
    j = json.loads(out)
    assert j["verdict"] == "FAIL"
    assert j["checks"]["acyclicity"]["witnesses"][0]["degree"] == [1, 0, 1, -1, 0, 0, 0, 1]


def test_timing_flag():
    code, out = run(["verify", "--basis", "p1diag.json", "--shift", "-1/2,0,-1/2,0", "--timing"])
    assert code == 0 and "runtime_seconds" in json.loads(out)


@pytest.mark.parametrize("args,msg", [
    (["resolve", "--embedding", "hirzebruch2_point.json", "--strat", "anderson"], "Lawrence"),
    (["resolve", "--basis", "p1diag.json", "--rays", "hirzebruch2.json"], "exactly one"),
    (["resolve", "--basis", "p1diag.json", "--shift", "1,2"], "expected 4"),
    (["resolve", "--basis", "p1diag.json", "--shift", "a,b,c,d"], "rational"),
    (["resolve", "--basis", "missing.json"], "cannot read"),
    (["resolve", "--rays", "hirzebruch2.json", "--strat", "anderson", "--epsilon", "1"], "not small enough"),
    (["resolve", "--rays", "hirzebruch2.json", "--strat", "lcm"], "--labels"),
    (["resolve", "--rays", "hirzebruch2.json", "--grading", "pic.json"], "columns"),
    (["verify", "--rays", "hirzebruch2.json", "--join-depth", "0"], "join-depth"),
])
def test_errors_exit_2(args, msg, capsys):
    code, _ = run(args)
    assert code == 2
    assert msg in capsys.readouterr().err


def test_bad_schema(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"basis": "x"}')
    assert run(["resolve", "--basis", str(p)])[0] == 2
    assert "basis" in capsys.readouterr().err
    p.write_text("{not json")
    assert run(["info", "--basis", str(p)])[0] == 2


def test_nonex_generators_in_summary():
    code, out = run(["resolve", "--basis", "p1diag.json", "--shift", "-1/2,0,-1/2,0", "--format", "json"])
    s = json.loads(out)["summary"]
    assert s["generators"] == ["1", "y2/y1"] and s["minimal"] is True


def test_closure_nonsat_torsion():
    code, out = run(["closure", "--basis", "nonsat.json"])
    assert code == 0
    assert "saturated: false" in out and "torsion: Z/2" in out


def test_info_nonpointed():
    j = json.loads(run(["info", "--basis", "line.json"])[1])
    assert j["pointed"] is False and j["pointedness_witness"] == [1, 0]


def test_out_file(tmp_path):
    target = tmp_path / "c.json"
    code, out = run(["export", "--rays", "hirzebruch2.json", "--out", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["d"] == 2


def test_lcm_labels(tmp_path):
    labels = tmp_path / "labels.json"
    labels.write_text("[[0, 0, 0, 0]]")
    code, out = run(["resolve", "--basis", "p1diag.json", "--strat", "lcm", "--labels", str(labels)])
    assert code == 0 and "stratification: lcm" in out


def test_epsilon_shift_mirrored():
    L = lawrence_lift([[1, 0], [0, 1], [-1, 2], [0, -1]])
    e = Fraction(1, 100)
    assert _epsilon_shift(L, e, 3) == (0, 0, e, 0, 0, 0, -e, 0)
    with pytest.raises(InputError):
        _epsilon_shift(L, e, 9)


def test_epsilon_default_value():
    a = run(["resolve", "--rays", "hirzebruch2.json", "--strat", "anderson", "--epsilon"])
    b = run(["resolve", "--rays", "hirzebruch2.json", "--strat", "anderson", "--epsilon", "1/100"])
    assert a == b and "counts: [4, 8, 4]" in a[1]


def test_negative_values_glued():
    assert _glue_values(["--shift", "-1/2,0"]) == ["--shift=-1/2,0"]
    assert _glue_values(["--shift", "--x"]) == ["--shift", "--x"]
    assert parse_vector("-1/2, 0") == (Fraction(-1, 2), 0)


def test_lattice_json_modes():
    assert lattice_from_json({"rays": [[1], [-1]]}).n == 4
    assert lattice_from_json({"n": 2, "basis": [[1, 1]]}).d == 1
    with pytest.raises(InputError, match="length"):
        lattice_from_json({"n": 3, "basis": [[1, 1]]})
    with pytest.raises(InputError, match="mode"):
        lattice_from_json({"basis": [[1]]}, "odd")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cellres", "closure", "--basis", "zero.json"],
                       cwd=FIXTURES, capture_output=True, text=True)
    assert r.returncode == 0 and "saturated: true" in r.stdout
