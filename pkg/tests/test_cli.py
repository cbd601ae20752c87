import subprocess
import sys

import pytest

from qstree.cli import main
from qstree.fixtures import fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_fixture_and_file(capsys, tmp_path):
    assert run(capsys, "validate", "ex-basic")[0] == 0
    p = tmp_path / "x.qst"
    p.write_text(fixture_text("ex-n0eq1"))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 0 and out.startswith("ok degree=3")


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.qst"
    p.write_text("qst 1\ndegree 3\nalphabet a\nvertex v color=a\nloop v 2\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 1 and "line 4" in err


def test_unknown_spec(capsys):
    assert run(capsys, "validate", "no-such-thing")[0] == 1


@pytest.mark.parametrize("name", ["ex-basic", "ex-n0eq1", "ex-n0-ne-n1", "mono:4", "sturmian-fib"])
def test_example_reparses(capsys, tmp_path, name):
    code, out, _ = run(capsys, "example", name)
    assert code == 0
    p = tmp_path / "e.qst"
    p.write_text(out)
    assert run(capsys, "validate", str(p))[0] == 0


def test_example_word(capsys):
    code, out, _ = run(capsys, "example", "word:2")
    assert code == 0 and "baaabab" in out


def test_complexity_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "complexity", "ex-basic", "--max-n", "5")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "n,b,specials,increment"
    assert rows[1:] == [f"{n},{n + 3},1,1" for n in range(6)]
    p = tmp_path / "c.csv"
    code, out, _ = run(capsys, "complexity", "ex-basic", "--max-n", "5", "--csv", str(p))
    assert p.read_text().splitlines() == rows
    assert "N0=0" in out and "c=3" in out


def test_balls_and_codes(capsys):
    code, out, _ = run(capsys, "balls", "ex-basic", "-n", "1", "--codes")
    assert code == 0
    assert len(out.splitlines()) == 4
    assert out.count("special=yes") == 1 and "code=(" in out


def test_factor_graph_dot(capsys, tmp_path):
    p = tmp_path / "g.dot"
    code, out, _ = run(capsys, "factor-graph", "ex-n0eq1", "-n", "3", "--dot", str(p))
    assert code == 0 and "case=II" in out
    assert p.read_text().startswith("graph G3 {")


def test_evolve(capsys):
    code, out, _ = run(capsys, "evolve", "ex-n0eq1", "--from", "2", "--to", "7")
    assert code == 0
    assert "2,I-a," in out and "3,II," in out and "n_k=2,4,6" in out


def test_structure_cycle(capsys, tmp_path):
    z = tmp_path / "z.qst"
    code, out, _ = run(capsys, "structure", "ex-n0-ne-n1", "--z-out", str(z))
    assert code == 0
    lines = out.splitlines()
    assert "N0=0" in lines and "N1=1" in lines and "Z=cycle(4)" in lines
    assert "coloring=cyclic" in lines
    assert run(capsys, "validate", str(z))[0] == 0


def test_recurrence_predict(capsys):
    code, out, _ = run(capsys, "recurrence", "ex-basic", "--max-n", "4", "--predict")
    assert code == 0
    assert out.splitlines()[2] == "1,3,3,(2a),,not-attained"


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "mono", "--max-n", "5")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "check", "ex-n0eq1", "--max-n", "6")
    assert code == 0 and "PASS R'' closed form" in out


def test_horizon_error_exit_code(capsys, monkeypatch):
    import qstree.census as census
    monkeypatch.setattr(census, "SUBSTITUTION_DOUBLINGS", 0)
    code, _, err = run(capsys, "complexity", "sturmian-fib", "--max-n", "8")
    assert code == 3 and "horizon" in err


def test_output_is_deterministic(capsys):
    a = run(capsys, "balls", "ex-loops-n0eq1", "-n", "3", "--codes")[1]
    b = run(capsys, "balls", "ex-loops-n0eq1", "-n", "3", "--codes")[1]
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qstree", "structure", "ex-basic"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "Z=single-vertex(loop=3)" in res.stdout
