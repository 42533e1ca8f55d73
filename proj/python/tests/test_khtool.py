import pathlib

import pytest

import khtool

MOVIES = pathlib.Path(__file__).resolve().parents[2] / "data" / "movies"


def test_figure_eight_tables():
    r = khovanov = khtool.homology("4_1", all=True)
    assert r.passed
    q = {(a, b): c for a, b, c in khovanov.data["tables"]["Q"]}
    assert q[(2, 5)] == 1 and q[(-2, -5)] == 1
    assert sum(q.values()) == 6
    assert r.data["jones_hat"] == [[-5, 1], [5, 1]]
    assert "<-5" in r.text


def test_trefoil_torsion():
    r = khtool.homology("3_1", ring="Z")
    assert r.data["torsion"] == [[-2, -7, "2"]]


def test_lee_hopf():
    assert khtool.homology("L2a1", functor="lee").data["dimension"] == 4


def test_jones_and_skein():
    assert khtool.jones("5_2").passed
    assert khtool.skein("PD[X[1,2,3,4],B[1,2,3,4]]").passed


def test_compose():
    r = khtool.compose("6_1")
    assert r.passed and r.data["isomorphic"]


def test_movie_file():
    r = khtool.movie((MOVIES / "kink.txt").read_text())
    assert r.data["verdict"] == "+1"
    assert r.data["degrees"] == [0]


def test_check_suite():
    r = khtool.check("movies", mm=12)
    assert r.passed
    assert r.data[0]["name"] == "movies"


def test_corpus_and_dump():
    names = [n for n, _, _ in khtool.corpus()]
    assert "10_136" in names
    d = khtool.dump("0_1").data
    assert d["formal"] and d["algebraic"]


def test_bad_input():
    with pytest.raises(Exception):
        khtool.homology("no such knot")
