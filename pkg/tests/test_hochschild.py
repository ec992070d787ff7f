from fractions import Fraction

import numpy as np
import pytest

from quiverlag import hochschild as hh
from quiverlag.corpus import QUIVERS, a2tilde, edgeless, jordan, triangle_potential
from quiverlag.dg import ginzburg2, ginzburg3, relative_ginzburg3
from quiverlag.corpus import relative_cases
from quiverlag.quiver import NCPolynomial, Path
from quiverlag.repvar import MatrixRep, chern0, random_rep
from quiverlag.commvar import random_invertible

from oracles import brute_necklaces, commutator_quotient_dim


@pytest.mark.parametrize("q,L,expected", [
    (jordan(("a",)), 3, 4),
    (jordan(("x", "y", "z")), 2, 10),
    (a2tilde(), 2, 3),
    (edgeless(2), 3, 2),
])
def test_hh0_examples(q, L, expected):
    assert hh.hh0_dimension(q, L) == expected


@pytest.mark.parametrize("name", sorted(QUIVERS))
@pytest.mark.parametrize("L", [1, 2, 3])
def test_hh0_against_oracles(name, L):
    q = QUIVERS[name]()
    d = hh.hh0_dimension(q, L)
    assert d == brute_necklaces(q, L) == commutator_quotient_dim(q, L)


@pytest.mark.parametrize("pres", [
    ginzburg2(jordan(("a",))),
    ginzburg2(a2tilde()),
    ginzburg3(a2tilde(), triangle_potential(a2tilde())),
    hh.path_algebra(jordan(("x", "y"))),
], ids=["g2 s1", "g2 a2tilde", "g3 abc", "path s2"])
def test_small_complex_squares_to_zero(pres):
    assert hh.small_hh_complex(pres, 3).d_squared_failures() == []


@pytest.mark.parametrize("name", list(relative_cases()))
def test_small_complex_relative(name):
    c = relative_cases()[name]
    cx = hh.small_hh_complex(relative_ginzburg3(c.q, c.d, c.w), 3)
    assert cx.d_squared_failures() == []


def test_degrees_of_pairs():
    cx = hh.small_hh_complex(ginzburg2(jordan(("a",))), 2)
    key = ("R", "x@0", Path.idempotent("0"))
    assert cx.degree(key) == -2
    assert cx.degree(("R", "a", Path("0", "0", ("a*",)))) == -1
    assert cx.degree(("L", Path("0", "0", ("a", "a*")))) == 0


@pytest.mark.parametrize("name", sorted(QUIVERS))
def test_cy_class_is_cycle(name):
    report = hh.verify_cy_cocycle(QUIVERS[name](), 3)
    assert report.passed and report.in_window


@pytest.mark.parametrize("drop", ["pairs", "loops"])
def test_cy_class_controls(drop):
    report = hh.verify_cy_cocycle(jordan(("a",)), 3, drop=drop)
    assert not report.passed and report.image


def test_cy_class_edgeless_only_loops():
    cls = hh.cy_class(edgeless(2))
    assert len(cls) == 2 and hh.verify_cy_cocycle(edgeless(2)).passed


def test_cy_class_unknown_drop():
    with pytest.raises(ValueError):
        hh.cy_class(jordan(("a",)), drop="half")


def test_chern0_rotation_and_conjugation():
    q = a2tilde()
    rng = np.random.default_rng(3)
    dims = {"1": 2, "2": 3, "3": 2}
    rho = random_rep(q, dims, rng)
    w1 = NCPolynomial.from_words(q, [(1, ("a", "b", "c"))])
    w2 = NCPolynomial.from_words(q, [(1, ("b", "c", "a"))])
    assert chern0(w1, rho) == chern0(w2, rho)
    g, gi = {}, {}
    for v, n in dims.items():
        g[v], gi[v] = random_invertible(n, rng)
    assert chern0(w1, rho.conjugate(g, gi)) == chern0(w1, rho)
    w3 = NCPolynomial.from_words(q, [(1, ("a", "b", "c")), (-1, ("c", "a", "b"))])
    assert chern0(w3, rho) == 0


def test_chern0_jordan_example():
    q = jordan(("a",))
    rho = MatrixRep(q, {"0": 2}, {"a": [[1, 2], [0, 3]]})
    w = NCPolynomial.from_words(q, [(1, ("a", "a"))])
    assert chern0(w, rho) == Fraction(10)


def test_report_rows_csv():
    rows = hh.hh_report_rows({"s1": jordan(("a",))}, [1, 2])
    text = hh.rows_to_csv(rows)
    assert text.splitlines()[0] == "quiver,L,hh0,necklaces,match,cy_cocycle"
    assert all(r["match"] for r in rows)
