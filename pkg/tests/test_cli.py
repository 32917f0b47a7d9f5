import subprocess
import sys

import pytest

from relhyp import catalog
from relhyp.automata import from_text
from relhyp.cli import main
from relhyp.spec_io import load_alphabet


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_conj_decide_example(capsys):
    rc, out, _ = run(capsys, "conj", "decide", "--group", "F2", "a b a^-1", "b", "--bound", "0")
    assert rc == 0 and out.splitlines()[0] == "conjugate, conjugator=a"
    assert "B=0 (user supplied)" in out


def test_conj_decide_default_bound_and_verify(capsys):
    rc, out, _ = run(capsys, "conj", "decide", "--group", "F2+t", "a t", "t a", "--verify")
    assert rc == 0 and out.startswith("conjugate, conjugator=")
    assert "empirical up to L_max=6" in out
    rc, out, _ = run(capsys, "conj", "decide", "--group", "F2", "a b", "a b^-1")
    assert out.startswith("not conjugate")


def test_lang_geo_auto(capsys, tmp_path):
    path = tmp_path / "f2.dfa"
    rc, out, err = run(capsys, "lang", "geo", "--group", "F2", "--fftp-C", "auto", "--out", str(path))
    assert rc == 0
    assert "series: (1 + z) / (1 - 3*z) ; coeffs: 1, 4, 12, 36" in err
    assert "L_max=8, K_max=8" in err
    A = from_text(path.read_text())
    assert A.n_states == 6


def test_lang_geo_dot_and_fixed_C(capsys):
    rc, out, err = run(capsys, "lang", "geo", "--group", "Z", "--fftp-C", "1", "--format", "dot")
    assert out.startswith("digraph dfa {") and "(1 + z) / (1 - z)" in err and "user supplied" in err


def test_lang_growth(capsys):
    rc, out, _ = run(capsys, "lang", "growth", "--group", "Z2*Z", "--factor-lang", "shortlex", "--terms", "5")
    assert rc == 0 and "(1 + 2*z + z^2) / (1 - 4*z - z^2) ; coeffs: 1, 6, 26, 110, 466, 1974" in out


def test_lang_rel(capsys):
    rc, out, err = run(capsys, "lang", "rel", "--group", "Z2*Z", "--factor-lang", "shortlex")
    X = catalog.z2_star_z()
    A = from_text(out)
    assert A.accepts(X.parse_word("e1 e2 t")) and not A.accepts(X.parse_word("e2 e1 t"))


def test_check_bcd_z2(capsys, tmp_path):
    csv = tmp_path / "r.csv"
    rc, out, _ = run(capsys, "check", "bcd", "--group", "Z2", "--csv", str(csv))
    assert rc == 0 and out.startswith("k=0 (empirical, L_max=8")
    assert csv.read_text().startswith("word,witness,constant")


def test_check_fftp_csv(capsys, tmp_path):
    csv = tmp_path / "f.csv"
    rc, out, _ = run(capsys, "check", "fftp", "--group", "F2", "--max-len", "4", "--csv", str(csv))
    assert out.startswith("fftp K=1 (empirical, L_max=4")
    assert csv.read_text().splitlines()[1] == "a a^-1,,1"


@pytest.mark.parametrize("prop,expect", [("l1", "L1 ok"), ("lforall", "Lforall ok"), ("lexists", "Lexists ok"),
                                         ("biauto", "biauto ok M=")])
def test_check_language_properties(capsys, prop, expect):
    rc, out, _ = run(capsys, "check", prop, "--group", "Z2*Z", "--max-len", "3")
    assert rc == 0 and expect in out and "empirical" in out


def test_check_nsc_and_shortlex_language(capsys):
    rc, out, _ = run(capsys, "check", "nsc", "--group", "F2+t", "--max-len", "5")
    assert out.startswith("B=0 (empirical, L_max=5")
    rc, out, _ = run(capsys, "check", "lforall", "--group", "Z2", "--language", "shortlex", "--max-len", "4")
    assert "Lforall ok M=1" in out


def test_genset_commands(capsys, tmp_path):
    out_path = tmp_path / "z2.json"
    rc, _, _ = run(capsys, "genset", "enlarge-ball", "--group", "Z2", "--m", "2", "--out", str(out_path))
    assert rc == 0 and len(load_alphabet(out_path)) == 12
    rc, out, _ = run(capsys, "genset", "enlarge-parabolic", "--group", "Z2*Z", "--k", "2", "--name", "k2")
    path = tmp_path / "k2.json"
    path.write_text(out)
    assert len(load_alphabet(path, "k2")) == 6 + 8 + 2


def test_ball_build_and_info(capsys, tmp_path):
    rc, out, _ = run(capsys, "ball", "build", "--group", "F2", "--radius", "3", "--cache", str(tmp_path))
    assert "spheres [1, 4, 12, 36]" in out
    rc, out, _ = run(capsys, "ball", "info", "--group", "F2", "--cache", str(tmp_path))
    assert "GWB1 v1, radius 3, 53 elements; alphabet hash matches" in out
    rc, out, _ = run(capsys, "ball", "info", "--group", "Z2", "--radius", "3")
    assert "[1, 4, 8, 12]" in out


def test_conj_bench(capsys, tmp_path):
    csv = tmp_path / "b.csv"
    rc, out, _ = run(capsys, "conj", "bench", "--group", "F2+t", "--sizes", "20,40", "--trials", "2", "--csv", str(csv))
    assert rc == 0 and "log-log exponent" in out
    assert csv.read_text().startswith("n,trial,seconds,conjugate")


@pytest.mark.parametrize("argv,code", [
    (["ball", "info", "--group", "nope"], "schema"),
    (["ball", "info", "--group", "F2", "--cache", "/nonexistent-dir-xyz"], "cache"),
    (["lang", "geo", "--group", "F2", "--fftp-C", "zero"], "precondition"),
    (["lang", "geo", "--group", "F2", "--fftp-C", "0"], "precondition"),
    (["conj", "decide", "--group", "F2", "a", "q"], "alphabet"),
    (["conj", "decide", "--group", "F2", "a", "b", "--bound", "99"], "out-of-range"),
])
def test_error_lines(capsys, argv, code):
    rc, out, err = run(capsys, *argv)
    assert rc == 2
    assert err.startswith(f"error: {code}: ")
    assert len(err.strip().splitlines()) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "relhyp", "conj", "decide", "--group", "F2", "a b", "b a", "--bound", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    head = r.stdout.splitlines()[0]
    assert head.startswith("conjugate, conjugator=")
    X = catalog.free_group()
    c = X.evaluate(X.parse_word(head.split("=", 1)[1]))
    assert X.spec.conjugate(X.evaluate(X.parse_word("a b")), c) == X.evaluate(X.parse_word("b a"))
