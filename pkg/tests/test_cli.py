import io

import pytest

from lambdamu.cli import main


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv), out)
    return code, out.getvalue()


def test_sn_omega():
    assert run("sn", r"(\x.x x)(\x.x x)", "--fuel", "50") == (1, "NOT-SN cycle=1\n")


def test_subtype_yes():
    assert run("subtype", "--sort", "c", "nu*nu*om", "nu*om") == (0, "YES\n")


def test_subtype_no_and_cert():
    assert run("subtype", "--sort", "c", "nu*om", "nu*nu*om") == (1, "NO\n")
    code, out = run("subtype", "--sort", "d", "nu", "om -> nu", "--cert")
    assert code == 0 and out == "YES\n(nu-om [nu <= om -> nu])\n"


def test_translate_type():
    code, out = run("translate-type", "p1 -> p2 -> p3", "--sort", "c")
    assert code == 0 and out == "(nu*om -> nu) * (nu*om -> nu) * nu*om\n"


def test_parse_round_trip(monkeypatch):
    code, out = run("parse", r"(\x.x x)   (\y.y)")
    assert code == 0
    assert run("parse", "-", stdin=out, monkeypatch=monkeypatch) == (0, out)
    assert run("sn", "-", stdin=out, monkeypatch=monkeypatch) == (0, "SN 2\n")


def test_parse_error_exit_code(capsys):
    assert run("parse", r"\x.")[0] == 2
    assert "error" in capsys.readouterr().err


def test_usage_error():
    assert run("frobnicate")[0] == 2
    assert run("subtype", "nu", "nu")[0] == 2


def test_normalize():
    code, out = run("normalize", "(mu a.[a]x) y")
    assert code == 0 and out == "Mu @ root => mu a.[a] x y\nmu a.[a] x y\n"
    code, out = run("normalize", r"(\x.x x)(\x.x x)", "--fuel", "3")
    assert code == 1 and out.endswith("UNKNOWN fuel=3\n")


def test_type_len():
    assert run("type-len", "(nu*om) & (nu*nu*om)") == (0, "2\n")


def test_synth_and_check(tmp_path):
    code, out = run("synth", r"(\x.x)(\y.y)")
    assert code == 0
    f = tmp_path / "d.txt"
    f.write_text(out)
    code, out = run("check-deriv", str(f))
    assert code == 0 and out.startswith("VALID |- (\\x.x) (\\y.y) : ")


def test_check_deriv_invalid(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("(Ax {x : nu |- x : om -> nu |})")
    code, out = run("check-deriv", str(f))
    assert code == 1 and out.startswith("INVALID")


def test_synth_unknown():
    assert run("synth", r"(\x.x x)(\x.x x)", "--fuel", "100") == (1, "UNKNOWN stage=Normalizing fuel=100\n")


def test_simple_check_and_translate(tmp_path):
    code, out = run("simple-check", r"\y.mu a.[a] y (\x.mu b.[a] x)", "--type", "((A->B)->A)->A")
    assert code == 0 and out.startswith("(ImplI ")
    f = tmp_path / "sd.txt"
    f.write_text(out)
    code, out = run("translate-deriv", str(f))
    assert code == 0 and out.startswith("(Abs ")
    assert run("simple-check", r"\x.x x", "--type", "A -> A") == (1, "NONE\n")


def test_deterministic():
    assert run("synth", r"\y.mu a.[a] y (\x.mu b.[a] x)") == run("synth", r"\y.mu a.[a] y (\x.mu b.[a] x)")


def test_missing_file():
    assert run("check-deriv", "/nonexistent/file")[0] == 2


@pytest.mark.parametrize("color", ["0", "1"])
def test_color_does_not_change_output(monkeypatch, color):
    monkeypatch.setenv("LMU_COLOR", color)
    assert run("sn", r"\x.x") == (0, "SN 0\n")
