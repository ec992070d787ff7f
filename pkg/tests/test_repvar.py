from fractions import Fraction

import numpy as np
import pytest

from quiverlag import exact
from quiverlag import repvar as rv
from quiverlag.commvar import random_invertible
from quiverlag.corpus import a2tilde, commutator_potential, jordan, relative_cases, triangle_potential
from quiverlag.dg import ginzburg2, ginzburg3, relative_ginzburg3
from quiverlag.quiver import NCPolynomial, double, random_potential


def test_evaluate_examples():
    q = a2tilde()
    rho = rv.MatrixRep(q, {"1": 1, "2": 2, "3": 1}, {"a": [[1, 2]], "b": [[1], [1]], "c": [[5]]})
    ab = NCPolynomial.from_words(q, [(1, ("a", "b"))])
    assert rv.evaluate(ab, rho)[0, 0] == 3
    abc = NCPolynomial.from_words(q, [(2, ("a", "b", "c"))])
    assert rv.trace_of(abc, rho) == 30
    assert rv.evaluate(NCPolynomial.unit(q, "2"), rho).shape == (2, 2)


def test_shape_validation():
    with pytest.raises(rv.RepError):
        rv.MatrixRep(jordan(("a",)), {"0": 2}, {"a": [[1, 2, 3]]})
    with pytest.raises(rv.RepError):
        rv.MatrixRep(jordan(("a",)), {"0": -1}, {})
    with pytest.raises(rv.RepError):
        rv.MatrixRep(jordan(("a",)), {}, {})


def test_moment_map_example():
    qb = double(jordan(("a",)))
    rho = rv.MatrixRep(qb, {"0": 2}, {"a": [[0, 1], [0, 0]], "a*": [[0, 0], [1, 0]]})
    mu = rv.moment_map(jordan(("a",)), rho, "0")
    assert (mu == exact.qmatrix([[1, 0], [0, -1]])).all()


def test_moment_map_equivariant():
    q = a2tilde()
    qb = double(q)
    rng = np.random.default_rng(11)
    dims = {"1": 2, "2": 1, "3": 2}
    rho = rv.random_rep(qb, dims, rng)
    g, gi = {}, {}
    for v, n in dims.items():
        g[v], gi[v] = random_invertible(n, rng)
    moved = rho.conjugate(g, gi)
    for v in q.vertices:
        lhs = rv.moment_map(q, moved, v)
        assert exact.is_zero(lhs - g[v] @ rv.moment_map(q, rho, v) @ gi[v])


def test_residual_and_jacobian_regular_semisimple():
    pres = ginzburg2(jordan(("a",)))
    system = rv.truncation_equations(pres)
    x = exact.qmatrix([[1, 0], [0, 2]])
    rho = rv.commuting_pair_rep(x, exact.qzeros((2, 2)))
    assert rv.residual(system, rho) == 0
    assert rv.jacobian(system, rho).shape == (4, 8)
    assert rv.jacobian_rank(system, rho) == 2
    assert rv.local_dimension(system, rho) == 6


def test_residual_recomputed_by_hand():
    pres = ginzburg2(jordan(("a",)))
    system = rv.truncation_equations(pres)
    x = np.array([[1.0, 2.0], [0.0, 1.0]])
    y = np.array([[0.0, 1.0], [3.0, 0.0]])
    rho = rv.commuting_pair_rep(x, y)
    assert rv.residual(system, rho) == pytest.approx(np.linalg.norm(x @ y - y @ x))


def test_jacobian_matches_finite_difference():
    pres = ginzburg2(jordan(("a",)))
    system = rv.truncation_equations(pres)
    rng = np.random.default_rng(5)
    rho = rv.random_rep(double(jordan(("a",))), {"0": 2}, rng, field="float")
    J = rv.jacobian(system, rho)
    h = 1e-6
    cols = []
    for gid in system.variables:
        for idx in np.ndindex(rho[gid].shape):
            plus, minus = rho[gid].copy(), rho[gid].copy()
            plus[idx] += h
            minus[idx] -= h
            fp = np.concatenate([m.ravel() for m in rv.equation_values(system, rho.replace(**{gid: plus}))])
            fm = np.concatenate([m.ravel() for m in rv.equation_values(system, rho.replace(**{gid: minus}))])
            cols.append((fp - fm) / (2 * h))
    assert np.allclose(J, np.array(cols).T, atol=1e-6)


def test_jacobian_rank_needs_solution():
    pres = ginzburg2(jordan(("a",)))
    system = rv.truncation_equations(pres)
    rho = rv.commuting_pair_rep(exact.qmatrix([[0, 1], [0, 0]]), exact.qmatrix([[0, 0], [1, 0]]))
    with pytest.raises(rv.RepError):
        rv.jacobian_rank(system, rho)


def test_duplicated_equation_keeps_rank():
    pres = ginzburg2(jordan(("a",)))
    system = rv.truncation_equations(pres)
    doubled = rv.PolySystem(system.quiver, system.variables, system.equations * 2)
    rho = rv.commuting_pair_rep(exact.qmatrix([[1, 0], [0, 2]]), exact.qzeros((2, 2)))
    assert rv.jacobian_rank(doubled, rho) == rv.jacobian_rank(system, rho)


def test_empty_system():
    pres = ginzburg2(jordan(()))
    system = rv.truncation_equations(pres)
    rho = rv.MatrixRep(double(jordan(())), {"0": 2}, {})
    assert rv.jacobian_rank(system, rho) == 0


def test_truncation_equations_absolute_g3():
    s3 = jordan(("x", "y", "z"))
    system = rv.truncation_equations(ginzburg3(s3, commutator_potential(s3, "x", "y", "z")))
    assert [eq.name for eq in system.equations] == ["x'", "y'", "z'"]
    assert system.variables == ("x", "y", "z")


def test_relative_equation_printing():
    case = relative_cases()["s1-in-s3"]
    pres = relative_ginzburg3(case.q, case.d, case.w)
    lines = rv.format_system(rv.truncation_equations(pres)).splitlines()
    assert lines == ["[x_b, x_c] = x_{a*}", "[x_c, x_a] = 0", "[x_a, x_b] = 0"]
    tri = relative_cases()["a2-in-a2tilde"]
    pres = relative_ginzburg3(tri.q, tri.d, tri.w)
    lines = rv.format_system(rv.truncation_equations(pres)).splitlines()
    assert lines == ["x_b x_c = x_{a*}", "x_c x_a = 0", "x_a x_b = 0"]


def test_redundant_flag_printing():
    tri = relative_cases()["a2-in-a2tilde"]
    pres = relative_ginzburg3(tri.q, tri.d, tri.w)
    text = rv.format_system(rv.truncation_equations(pres), include_redundant=True)
    assert text.count("(follows from the others)") == 2


def test_normalized_equation_set_ignores_sign_and_order():
    q = jordan(("x", "y"))
    p1 = NCPolynomial.from_words(q, [(1, ("x", "y")), (-1, ("y", "x"))])
    assert rv.normalized_equation_set([p1, -p1]) == rv.normalized_equation_set([-p1])


@pytest.mark.parametrize("seed", range(5))
def test_gradient_against_symbolic(seed):
    rng = np.random.default_rng(seed)
    q = jordan(("x", "y"))
    w = random_potential(q, 4, rng)
    rho = rv.random_rep(q, {"0": 2}, rng)
    grad = rv.trace_gradient(w, rho)
    sym = rv.symbolic_gradient(w, rho)
    for e in q.edge_ids:
        assert (grad[e] == sym[e]).all()


def test_gradient_multi_vertex_float():
    q = a2tilde()
    rng = np.random.default_rng(2)
    rho = rv.random_rep(q, {"1": 2, "2": 1, "3": 3}, rng, field="float")
    w = triangle_potential(q)
    grad = rv.trace_gradient(w, rho)
    fd = rv.finite_difference_gradient(w, rho)
    for e in q.edge_ids:
        assert grad[e].shape == rho[e].shape
        assert np.allclose(grad[e], fd[e], rtol=1e-6, atol=1e-8)


def test_tangent_complex_n1():
    q = jordan(("a",))
    rho = rv.commuting_pair_rep(exact.qmatrix([[2]]), exact.qmatrix([[5]]))
    tc = rv.tangent_complex_g2(q, rho)
    assert exact.is_zero(tc.A) and exact.is_zero(tc.B)
    assert tc.composite_is_zero() and tc.self_dual()


@pytest.mark.parametrize("seed", range(4))
def test_tangent_complex_commuting(seed):
    rng = np.random.default_rng(seed)
    x, y = rv.sample_commuting_pair(3, rng)
    tc = rv.tangent_complex_g2(jordan(("a",)), rv.commuting_pair_rep(x, y))
    assert tc.composite_is_zero() and tc.self_dual()


def test_tangent_complex_duality_control():
    rho = rv.commuting_pair_rep(exact.qmatrix([[1, 0], [0, 2]]), exact.qzeros((2, 2)))
    tc = rv.tangent_complex_g2(jordan(("a",)), rho)
    assert not exact.is_zero(tc.B)
    tc.omega = -tc.omega
    assert not tc.self_dual()


def test_tangent_complex_rejects_non_zero():
    rho = rv.commuting_pair_rep(exact.qmatrix([[0, 1], [0, 0]]), exact.qmatrix([[0, 0], [1, 0]]))
    with pytest.raises(rv.RepError):
        rv.tangent_complex_g2(jordan(("a",)), rho)


def test_sample_commuting_pair_commutes():
    rng = np.random.default_rng(9)
    for n in (1, 2, 3, 4):
        x, y = rv.sample_commuting_pair(n, rng)
        assert exact.is_zero(x @ y - y @ x)
