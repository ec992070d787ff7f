from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverlag.corpus import QUIVERS, a2tilde, commutator_potential, edgeless, jordan, triangle_potential
from quiverlag.quiver import (
    NCPolynomial, Path, Potential, Quiver, QuiverError, cyclic_derivative, double, frame,
    multiply, necklace_basis, parse_quiver_document, random_potential, sum_commutator_identity_check,
)

from oracles import brute_necklaces


def poly(q, *terms):
    return NCPolynomial.from_words(q, terms)


def test_double_jordan():
    qb = double(jordan(("a",)))
    assert qb.vertices == ("0",)
    assert set(qb.edge_ids) == {"a", "a*"}


def test_double_edgeless_is_identity():
    q = edgeless(3)
    assert double(q) == q


def test_double_a2tilde_reverses():
    qb = double(a2tilde())
    assert len(qb.edges) == 6
    for e in a2tilde().edges:
        s = qb.edge(e.id + "*")
        assert (s.src, s.tgt) == (e.tgt, e.src)


def test_double_rejects_reserved_names():
    with pytest.raises(QuiverError):
        double(Quiver.build(["0"], [("a*", "0", "0")]))


def test_frame_counts():
    q = frame(jordan(("a",)))
    assert len(q.vertices) == 2 and len(q.edges) == 2
    assert frame(Quiver(())) == Quiver(())
    big = frame(a2tilde())
    assert len(big.vertices) == 6 and len(big.edges) == 6


def test_multiply_rules():
    qb = double(jordan(("a",)))
    assert multiply(poly(qb, (1, ("a",))), poly(qb, (1, ("a*",)))) == poly(qb, (1, ("a", "a*")))
    q = edgeless(2)
    e1, e2 = NCPolynomial.unit(q, "1"), NCPolynomial.unit(q, "2")
    assert (e1 * e2).is_zero()
    assert e1 * e1 == e1
    t = a2tilde()
    assert poly(t, (1, ("a",))) * poly(t, (1, ("b",))) == poly(t, (1, ("a", "b")))
    assert (poly(t, (1, ("b",))) * poly(t, (1, ("a",)))).is_zero()


def test_path_rejects_bad_composition():
    with pytest.raises(QuiverError):
        a2tilde().path("b", "a")


def test_cyclic_derivative_examples():
    t = a2tilde()
    w = triangle_potential(t)
    assert cyclic_derivative(w, "a") == poly(t, (1, ("b", "c")))
    s3 = jordan(("x", "y", "z"))
    w = commutator_potential(s3, "x", "y", "z")
    assert cyclic_derivative(w, "z") == poly(s3, (1, ("x", "y")), (-1, ("y", "x")))
    assert cyclic_derivative(w, "y") == poly(s3, (1, ("z", "x")), (-1, ("x", "z")))
    assert cyclic_derivative(triangle_potential(t), "missing").is_zero()


def test_necklace_examples():
    assert len(necklace_basis(jordan(("a",)), 3)) == 4
    assert len(necklace_basis(jordan(("x", "y", "z")), 2)) == 10
    assert len(necklace_basis(a2tilde(), 2)) == 3


@pytest.mark.parametrize("name", sorted(QUIVERS))
@pytest.mark.parametrize("L", [0, 1, 2, 3, 4])
def test_necklaces_match_bruteforce(name, L):
    q = QUIVERS[name]()
    basis = necklace_basis(q, L)
    assert len(basis) == brute_necklaces(q, L)
    words = [n.word for n in basis if n.word]
    for w in words:
        rotations = {w[i:] + w[:i] for i in range(len(w))}
        assert len(rotations & set(words)) == 1


def test_commutator_identity_examples():
    s3 = jordan(("x", "y", "z"))
    assert sum_commutator_identity_check(commutator_potential(s3, "x", "y", "z"))
    assert sum_commutator_identity_check(triangle_potential(a2tilde()))
    assert sum_commutator_identity_check(Potential(s3))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(QUIVERS)), st.integers(0, 10**6))
def test_commutator_identity_random(name, seed):
    q = QUIVERS[name]()
    w = random_potential(q, 5, np.random.default_rng(seed))
    assert sum_commutator_identity_check(w)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_cyclic_derivative_linear(seed):
    rng = np.random.default_rng(seed)
    q = jordan(("x", "y", "z"))
    w1, w2 = random_potential(q, 4, rng), random_potential(q, 4, rng)
    c = Fraction(int(rng.integers(-5, 6)), 3)
    for e in q.edge_ids:
        lhs = cyclic_derivative(w1 + w2.scale(c), e)
        assert lhs == cyclic_derivative(w1, e) + cyclic_derivative(w2, e).scale(c)


def _random_paths(q, rng, k):
    from quiverlag.quiver import paths_up_to
    paths = paths_up_to(q, 3)
    return [paths[int(i)] for i in rng.integers(len(paths), size=k)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_multiply_associative_and_units(seed):
    rng = np.random.default_rng(seed)
    q = double(a2tilde())
    ps = [NCPolynomial(q, {p: Fraction(int(rng.integers(1, 4)))}) for p in _random_paths(q, rng, 3)]
    a, b, c = ps
    assert (a * b) * c == a * (b * c)
    for p in ps:
        (path,) = p.terms
        assert NCPolynomial.unit(q, path.src) * p == p == p * NCPolynomial.unit(q, path.tgt)


def test_potential_rejects_non_cycles():
    t = a2tilde()
    with pytest.raises(QuiverError):
        Potential.from_words(t, [(1, ("a", "b"))])


def test_document_round_trip():
    t = a2tilde()
    w = triangle_potential(t)
    q2, w2 = parse_quiver_document(t.to_document(w))
    assert q2 == t and w2 == Potential(q2, w.terms)


@pytest.mark.parametrize("doc", [
    {"vertices": ["1"], "edges": [{"id": "a", "src": "1", "tgt": "2"}]},
    {"vertices": ["1"], "edges": [{"id": "a", "src": "1", "tgt": "1"}, {"id": "a", "src": "1", "tgt": "1"}]},
    {"edges": []},
])
def test_document_validation(doc):
    with pytest.raises(QuiverError):
        parse_quiver_document(doc)


def test_idempotent_path():
    p = Path.idempotent("v")
    assert len(p) == 0 and p.is_cycle
