import io
import json

import pytest

from twistbook.cli import main
from twistbook.paperlib import NamedFamily, build


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def untimed(text):
    return [{k: v for k, v in d.items() if k != "seconds"} for d in json.loads(text)["details"]]


def test_list():
    code, text = run("list")
    assert code == 0
    assert "thm-ope2" in text and "gplus2-chain" in text


def test_build_writes_bundle(tmp_path):
    path = tmp_path / "f.json"
    code, text = run("build", "thm-ope", "2", "--out", str(path))
    assert code == 0
    assert "page (2,6)" in text
    fam = NamedFamily.from_json(json.loads(path.read_text()))
    assert fam.page.classify().n_boundary == 6


def test_build_planar():
    code, text = run("build", "thm-ope2", "3")
    assert code == 0 and "page (0,8)" in text


@pytest.mark.parametrize("argv", [("build", "thm-ope", "0"), ("build", "nope", "1"),
                                  ("build", "thm-ope", "x"), ("verify", "relation", "nope"),
                                  ("verify", "script", "lantern"), ("verify", "relation", "gplus2-chain"),
                                  ("invariants", "openbook", "/no/such/file.json"), ("frobnicate",)])
def test_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_verify_relation():
    assert run("verify", "relation", "lantern")[0] == 0
    assert run("verify", "relation", "vhm-star")[0] == 0


def test_negative_controls_refute():
    assert run("verify", "relation", "star-wrong-handedness")[0] == 1
    assert run("verify", "relation", "lantern-wrong-handedness")[0] == 1


def test_random_transposition_is_seeded():
    a = run("verify", "relation", "random-transposition", "2", "--seed", "11", "--json")
    b = run("verify", "relation", "random-transposition", "2", "--seed", "11", "--json")
    assert a[0] == b[0] == 1
    assert untimed(a[1]) == untimed(b[1])


def test_verify_script_json():
    code, text = run("verify", "script", "gplus2-chain", "1", "--json")
    rep = json.loads(text)
    assert code == 0 and rep["status"] == "verified"
    d = rep["details"][0]
    assert d["final"] == d["target"]


@pytest.mark.parametrize("name,p", [("vhm", 1), ("thm-ope", 1), ("thm-g+2", 1), ("thm-ope2", 1),
                                    ("thm-ope2", 2)])
def test_verify_theorem(name, p):
    assert run("verify", "theorem", name, str(p))[0] == 0


def test_invariants_openbook():
    assert run("invariants", "openbook", "annulus", "2") == (0, "Z/2\n")
    assert run("invariants", "openbook", "thm-ope", "1") == (0, "Z^3\n")
    assert run("invariants", "openbook", "thm-ope2", "1") == (0, "Z/4\n")


def test_invariants_lefschetz():
    code, text = run("invariants", "lefschetz", "thm-ope2", "1")
    assert code == 0 and text.strip() == "chi=1 h1=Z/2 h2_rank=0"
    code, text = run("invariants", "lefschetz", "thm-ope2", "1", "--json")
    d = json.loads(text)["details"][0]
    assert (d["chi"], d["h1"], d["h2_rank"]) == (1, {"free_rank": 0, "torsion": [2]}, 0)


def test_invariants_from_bundle(tmp_path):
    path = tmp_path / "g.json"
    run("build", "stabilized-g", "1", "--out", str(path))
    assert run("invariants", "openbook", str(path), "--factorization", "phi_hat") == (0, "Z^3\n")
    assert run("invariants", "openbook", str(path), "--factorization", "psi_hat") == (0, "Z^3\n")


def test_invariants_from_cycle_bundle(tmp_path):
    fam = build("thm-ope2", 1)
    data = {"page": fam.page.to_json(),
            "cycles": [fam.curve(n).to_json() for n in fam.factorizations["phi"]]}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(data))
    assert run("invariants", "lefschetz", str(path)) == (0, "chi=1 h1=Z/2 h2_rank=0\n")


def test_output_is_deterministic():
    a = run("verify", "theorem", "thm-ope2", "2", "--json")[1]
    b = run("verify", "theorem", "thm-ope2", "2", "--json")[1]
    assert untimed(a) == untimed(b)
