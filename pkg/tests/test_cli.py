from __future__ import annotations

import json
from pathlib import Path

import pytest

from fbcinv import cli
from fbcinv.bns import SigmaReport
from fbcinv.hnn import Character
from fbcinv.l2 import L2Engine, SupportUndetermined
from fbcinv.polytopes import IntPolytope, VirtualPolytope, polt_equal

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_bns_test_identity_wall(capsys):
    code, out = run(capsys, "bns-test", DATA / "id2.endo", "--phi", "a=1,b=1,t=0")
    assert code == 0
    assert "out" in out.splitlines()[0]
    assert "E = 1 - t" in out


def test_bns_test_json(capsys):
    code, data = run_json(capsys, "bns-test", DATA / "id2.endo", "--phi", "a=1,b=1,t=1")
    assert code == 0
    assert data["membership"] == "in"
    assert Character.from_dict(data["phi"]) == Character((1, 1, 1))


def test_alexander_text_and_json(capsys):
    code, out = run(capsys, "alexander", DATA / "g3.endo")
    assert code == 0 and "Delta = 1 + T + T^2 + A*T - A^2*T" in out
    code, data = run_json(capsys, "alexander", DATA / "g3.endo")
    assert data["b1"] == 2
    P = VirtualPolytope.from_dict(data["polytope"])
    assert P.plus == IntPolytope([(0, 0), (2, 1), (0, 2)])


def test_alexander_norm(capsys):
    code, data = run_json(capsys, "alexander", "@g3", "--phi", "a=0,t=1")
    assert code == 0 and data["norm"] == "2"


def test_abelianize(capsys):
    code, data = run_json(capsys, "abelianize", "@g3")
    assert data["basis"] == ["a", "t"] and data["generators"]["c"] == [1, 0]


def test_fox_matrix(capsys):
    code, out = run(capsys, "fox-matrix", "@ba")
    assert code == 0 and "d g(b) / d a = b" in out


def test_thurston_norm(capsys):
    code, data = run_json(capsys, "thurston-norm", "@g3", "--phi", "a=1/2,t=0")
    assert code == 0 and data["norm"] == "1"


def test_l2_polytope_round_trip(capsys):
    code, data = run_json(capsys, "l2-polytope", DATA / "g3.endo")
    assert code == 0 and data["verified"]
    P = VirtualPolytope.from_dict(data["polytope"])
    assert polt_equal(P, VirtualPolytope.of(IntPolytope([(0, 0), (2, 1), (0, 2)])))


def test_bns_components_round_trip(capsys):
    code, data = run_json(capsys, "bns-components", DATA / "conj2.endo")
    assert code == 0 and data["components"] == 2
    report = SigmaReport.from_dict(data)
    assert sum(not p.inside for p in report.pieces) == 2


def test_upg_polytope(capsys):
    code, data = run_json(capsys, "upg-polytope", DATA / "conj2.endo", DATA / "conj2.cert")
    assert code == 0
    assert data["vectors"] == [[2, 0, 1]]
    assert VirtualPolytope.from_dict(data["polytope"]).plus == \
        IntPolytope([(0, 0, 0), (2, 0, 1)])


def test_upg_sigma(capsys):
    args = ("upg-sigma", DATA / "conj2.endo", DATA / "conj2.cert")
    code, data = run_json(capsys, *args, "--phi", "a=1,b=0,t=-2")
    assert code == 0 and data["membership"] == "out"
    code, data = run_json(capsys, *args, "--phi", "a=1,b=0,t=1")
    assert data["membership"] == "in"
    code, data = run_json(capsys, *args)
    assert data["hyperplanes"] == [[2, 0, 1]]


def test_verify_inequalities(capsys):
    code, data = run_json(capsys, "verify-inequalities", "--maps", "3", "--samples", "5")
    assert code == 0 and data["violations"] == [] and data["maps"] == 3


# -- failures -------------------------------------------------------------------------

def test_missing_file_is_an_input_error(capsys, tmp_path):
    code, data = run_json(capsys, "abelianize", tmp_path / "nope.endo")
    assert code == 2 and data["error"]["kind"] == "input"


def test_bad_word_is_an_input_error(capsys, tmp_path):
    path = tmp_path / "bad.endo"
    path.write_text("rank: 2\na -> a ?\nb -> b\n")
    code, data = run_json(capsys, "fox-matrix", path)
    assert code == 2 and "error" in data


def test_phi_must_fix_t(capsys):
    code, data = run_json(capsys, "thurston-norm", "@g3", "--phi", "a=1")
    assert code == 2 and data["error"]["kind"] == "input"


def test_rejected_certificate_exits_one(capsys):
    code, data = run_json(capsys, "upg-polytope", DATA / "g3.endo", DATA / "id3.cert")
    assert code == 1
    assert data["error"]["kind"] == "math" and data["problems"]


def test_undetermined_exits_one(capsys, monkeypatch):
    def stuck(self, chi):
        raise SupportUndetermined(chi, "no admissible pivot")

    monkeypatch.setattr(L2Engine, "sample", stuck)
    code, data = run_json(capsys, "l2-polytope", "@id2")
    assert code == 1 and data["error"]["kind"] == "undetermined"


def test_text_mode_error(capsys, tmp_path):
    code = cli.main(["abelianize", str(tmp_path / "x.endo")])
    assert code == 2
    assert "error (input)" in capsys.readouterr().err


@pytest.mark.parametrize("flag", [["--max-height", "0"], ["--samples", "-1"]])
def test_bad_limits(capsys, flag):
    code, data = run_json(capsys, "thurston-norm", "@g3", "--phi", "a=1,t=1", *flag)
    assert code == 2
