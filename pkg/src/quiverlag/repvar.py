"""Matrix representations, moment maps and truncated equation systems.

Shape convention: an arrow ``e: s -> t`` is represented by an
``n_s x n_t`` matrix, i.e. it acts on row vectors from the right.  Paths are
composed left to right, so a path ``e1 e2 ... ek`` evaluates to the plain
matrix product ``rho(e1) @ rho(e2) @ ... @ rho(ek)``.  This is the
convention under which the relative critical equations of the triangle
quiver read ``x_b x_c = x_{a*}`` with no transposes.

The gauge action of ``g = (g_v)`` is ``rho(e) -> g_s rho(e) g_t^{-1}``; its
infinitesimal form at ``a = (a_v)`` is ``a_s rho(e) - rho(e) a_t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import exact
from .dg import DgPresentation, preprojective_element, redundant_relations
from .quiver import NCPolynomial, Path, Quiver, QuiverError, cyclic_derivative, double, star

RATIONAL = "rational"
FLOAT = "float"


class RepError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixRep:
    quiver: Quiver
    dims: Mapping[str, int]
    matrices: Mapping[str, np.ndarray]
    field: str = RATIONAL

    def __post_init__(self):
        if set(self.dims) != set(self.quiver.vertices):
            raise RepError("dimension vector must cover exactly the quiver's vertices")
        if any(int(n) < 0 for n in self.dims.values()):
            raise RepError("dimensions must be nonnegative")
        if self.field not in (RATIONAL, FLOAT):
            raise RepError(f"unknown field {self.field!r}")
        mats = {}
        for gid, m in self.matrices.items():
            e = self.quiver.edge(gid)
            m = exact.qmatrix(m) if self.field == RATIONAL else np.asarray(m, dtype=float)
            m = m.reshape(self.dims[e.src], self.dims[e.tgt]) if m.size == 0 else m
            if m.shape != (self.dims[e.src], self.dims[e.tgt]):
                raise RepError(
                    f"matrix for {gid!r} has shape {m.shape}, expected "
                    f"{(self.dims[e.src], self.dims[e.tgt])}"
                )
            mats[gid] = m
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "dims", {v: int(n) for v, n in self.dims.items()})

    @property
    def exact(self) -> bool:
        return self.field == RATIONAL

    def zeros(self, r: int, c: int) -> np.ndarray:
        return exact.qzeros((r, c)) if self.exact else np.zeros((r, c))

    def eye(self, n: int) -> np.ndarray:
        return exact.qeye(n) if self.exact else np.eye(n)

    def __getitem__(self, gid: str) -> np.ndarray:
        """Matrix of a generator; generators without a matrix act as zero."""
        if gid in self.matrices:
            return self.matrices[gid]
        e = self.quiver.edge(gid)
        return self.zeros(self.dims[e.src], self.dims[e.tgt])

    def replace(self, **updates: np.ndarray) -> "MatrixRep":
        mats = dict(self.matrices)
        mats.update(updates)
        return MatrixRep(self.quiver, self.dims, mats, self.field)

    def to_float(self) -> "MatrixRep":
        return MatrixRep(self.quiver, self.dims, {k: exact.to_float(v) for k, v in self.matrices.items()}, FLOAT)

    def conjugate(self, g: Mapping[str, np.ndarray], g_inv: Mapping[str, np.ndarray]) -> "MatrixRep":
        """Gauge transform ``rho(e) -> g_s rho(e) g_t^{-1}``."""
        mats = {}
        for gid, m in self.matrices.items():
            e = self.quiver.edge(gid)
            mats[gid] = g[e.src] @ m @ g_inv[e.tgt]
        return MatrixRep(self.quiver, self.dims, mats, self.field)


def random_rep(
    quiver: Quiver, dims: Mapping[str, int], rng, field: str = RATIONAL,
    generators: Sequence[str] | None = None, bound: int = 5,
) -> MatrixRep:
    """Random small-integer (rational) or Gaussian (float) matrices."""
    gens = quiver.edge_ids if generators is None else generators
    mats = {}
    for gid in gens:
        e = quiver.edge(gid)
        shape = (dims[e.src], dims[e.tgt])
        if field == RATIONAL:
            mats[gid] = exact.qmatrix(rng.integers(-bound, bound + 1, size=shape).tolist() if shape[0] * shape[1] else np.zeros(shape))
        else:
            mats[gid] = rng.standard_normal(shape)
    return MatrixRep(quiver, dict(dims), mats, field)


def evaluate_path(path: Path, rho: MatrixRep) -> np.ndarray:
    if not path.arrows:
        return rho.eye(rho.dims[path.src])
    out = rho[path.arrows[0]]
    for a in path.arrows[1:]:
        out = out @ rho[a]
    return out


def evaluate(p: NCPolynomial, rho: MatrixRep) -> np.ndarray:
    """The matrix of ``p`` in ``rho``; all terms must share their endpoints."""
    ends = p.endpoints()
    if len(ends) > 1:
        raise RepError(f"{p} mixes endpoints {sorted(ends)}")
    if not ends:
        raise RepError("cannot infer the shape of the zero polynomial; use evaluate_between")
    (s, t), = ends
    return evaluate_between(p, rho, s, t)


def evaluate_between(p: NCPolynomial, rho: MatrixRep, s: str, t: str) -> np.ndarray:
    out = rho.zeros(rho.dims[s], rho.dims[t])
    for path, c in p.terms.items():
        if (path.src, path.tgt) != (s, t):
            raise RepError(f"term {path.word()} does not run {s} -> {t}")
        coeff = c if rho.exact else float(c)
        out = out + coeff * evaluate_path(path, rho)
    return out


def moment_map(q: Quiver, rho: MatrixRep, v: str) -> np.ndarray:
    """``sum_e e_v (e e* - e* e) e_v`` evaluated in ``rho``."""
    poly = preprojective_element(q, v, rho.quiver)
    return evaluate_between(poly, rho, v, v)


def trace_of(p: NCPolynomial, rho: MatrixRep):
    total = Fraction(0) if rho.exact else 0.0
    for path, c in p.terms.items():
        if not path.is_cycle:
            raise RepError(f"{path.word()} is not a cycle")
        m = evaluate_path(path, rho)
        coeff = c if rho.exact else float(c)
        total = total + coeff * (sum(m[i, i] for i in range(m.shape[0])) if m.shape[0] else 0)
    return total


def chern0(w: NCPolynomial, rho: MatrixRep):
    """``sum_c coeff * tr(rho(c))`` over the cycles of the potential."""
    return trace_of(w, rho)


def trace_gradient(w: NCPolynomial, rho: MatrixRep) -> dict[str, np.ndarray]:
    """Gradient of ``tr(w)`` in the entries of each arrow matrix.

    ``d tr(w) / d rho(e)[i, j] = rho(d_e w)[j, i]``, so the gradient block of
    ``e`` is the transpose of the cyclic derivative's matrix.
    """
    q = rho.quiver
    out = {}
    for e in q.edges:
        de = NCPolynomial(q, cyclic_derivative(NCPolynomial(q, w.terms), e.id).terms)
        out[e.id] = evaluate_between(de, rho, e.tgt, e.src).T
    return out


def finite_difference_gradient(w: NCPolynomial, rho: MatrixRep, h: float = 1e-6) -> dict[str, np.ndarray]:
    base = rho.to_float()
    out = {}
    for e in base.quiver.edges:
        m = base[e.id]
        grad = np.zeros(m.shape)
        for idx in np.ndindex(m.shape):
            plus, minus = m.copy(), m.copy()
            plus[idx] += h
            minus[idx] -= h
            fp = chern0(w, base.replace(**{e.id: plus}))
            fm = chern0(w, base.replace(**{e.id: minus}))
            grad[idx] = (fp - fm) / (2 * h)
        out[e.id] = grad
    return out


def symbolic_gradient(w: NCPolynomial, rho: MatrixRep) -> dict[str, np.ndarray]:
    """Gradient of ``tr(w)`` by symbolic differentiation, evaluated at ``rho``.

    Independent of cyclic derivatives: every matrix entry becomes a sympy
    symbol, the trace is expanded and differentiated entrywise.
    """
    import sympy

    q = rho.quiver
    symbols = {}
    for e in q.edges:
        r, c = rho.dims[e.src], rho.dims[e.tgt]
        symbols[e.id] = sympy.Matrix(r, c, lambda i, j, a=e.id: sympy.Symbol(f"{a}_{i}_{j}"))
    total = sympy.Integer(0)
    for path, c in w.terms.items():
        m = sympy.eye(rho.dims[path.src])
        for a in path.arrows:
            m = m * symbols[a]
        total += sympy.Rational(c.numerator, c.denominator) * m.trace()
    total = sympy.expand(total)
    point = {}
    for e in q.edges:
        vals = rho[e.id]
        for (i, j), v in np.ndenumerate(vals):
            v = exact.frac(v) if rho.exact else v
            point[symbols[e.id][i, j]] = sympy.Rational(v.numerator, v.denominator) if rho.exact else v
    out = {}
    for e in q.edges:
        sym = symbols[e.id]
        grad = np.empty(sym.shape, dtype=object if rho.exact else float)
        for i in range(sym.shape[0]):
            for j in range(sym.shape[1]):
                val = sympy.diff(total, sym[i, j]).subs(point)
                grad[i, j] = Fraction(int(val.p), int(val.q)) if rho.exact else float(val)
        out[e.id] = grad
    return out


# --- equation systems -------------------------------------------------------

@dataclass(frozen=True)
class Equation:
    name: str
    poly: NCPolynomial
    redundant: bool = False
    flip: bool = False  # print -poly (relations of the form e* - d_e W)


@dataclass(frozen=True)
class PolySystem:
    """Matrix equations ``evaluate(poly) = 0`` in the degree-0 generators."""

    quiver: Quiver
    variables: tuple[str, ...]
    equations: tuple[Equation, ...]
    dims: Mapping[str, int] = field(default_factory=dict)

    def essential(self) -> list[Equation]:
        return [eq for eq in self.equations if not eq.redundant]


def truncation_equations(pres: DgPresentation, dims: Mapping[str, int] | None = None) -> PolySystem:
    """One equation ``d(g) = 0`` per degree -1 generator, negative generators set to 0."""
    variables = tuple(g.id for g in pres.generators_of_degree(0))
    redundant = redundant_relations(pres)
    has_duals = any(g.id.endswith("*") for g in pres.generators_of_degree(0))
    eqs = []
    for g in pres.generators_of_degree(-1):
        dg = pres.d(g.id)
        kept = {
            p: c for p, c in dg.terms.items() if all(pres.degree(a) == 0 for a in p.arrows)
        }
        flip = has_duals and g.id.endswith("'")
        eqs.append(Equation(g.id, NCPolynomial(pres.quiver, kept, check=False), g.id in redundant, flip))
    return PolySystem(pres.quiver, variables, tuple(eqs), dict(dims or {}))


def _equation_ends(eq: Equation, q: Quiver) -> tuple[str, str]:
    e = q.edge(eq.name)
    return e.src, e.tgt


def equation_values(system: PolySystem, rho: MatrixRep) -> list[np.ndarray]:
    out = []
    for eq in system.equations:
        s, t = _equation_ends(eq, system.quiver)
        out.append(evaluate_between(eq.poly, rho, s, t))
    return out


def residual_squared(system: PolySystem, rho: MatrixRep):
    total = Fraction(0) if rho.exact else 0.0
    for m in equation_values(system, rho):
        for v in m.flat:
            total = total + v * v
    return total


def residual(system: PolySystem, rho: MatrixRep) -> float:
    """Frobenius norm of all equation values stacked together."""
    return math.sqrt(float(residual_squared(system, rho)))


def jacobian(system: PolySystem, rho: MatrixRep) -> np.ndarray:
    """Linearization in all entries of all variables (row-major blocks)."""
    q = system.quiver
    col_of = {}
    col = 0
    for g in system.variables:
        e = q.edge(g)
        col_of[g] = col
        col += rho.dims[e.src] * rho.dims[e.tgt]
    blocks = []
    for eq in system.equations:
        s, t = _equation_ends(eq, q)
        rows = rho.dims[s] * rho.dims[t]
        jac = exact.qzeros((rows, col)) if rho.exact else np.zeros((rows, col))
        for path, c in eq.poly.terms.items():
            coeff = c if rho.exact else float(c)
            arrows = path.arrows
            for i, a in enumerate(arrows):
                if a not in col_of:
                    continue
                left = evaluate_path(Path(path.src, q.source(a), arrows[:i]), rho)
                right = evaluate_path(Path(q.target(a), path.tgt, arrows[i + 1:]), rho)
                block = np.kron(left, right.T)
                width = block.shape[1]
                jac[:, col_of[a]:col_of[a] + width] = jac[:, col_of[a]:col_of[a] + width] + coeff * block
        blocks.append(jac)
    if not blocks:
        return exact.qzeros((0, col)) if rho.exact else np.zeros((0, col))
    return np.concatenate(blocks, axis=0)


def n_variables(system: PolySystem, rho: MatrixRep) -> int:
    q = system.quiver
    return sum(rho.dims[q.source(g)] * rho.dims[q.target(g)] for g in system.variables)


def jacobian_rank(system: PolySystem, rho: MatrixRep, tol: float = 1e-10, rank_rtol: float = 1e-8) -> int:
    """Rank of the linearization at a solution (exact for rational input)."""
    if rho.exact:
        if residual_squared(system, rho) != 0:
            raise RepError("point does not solve the system")
    elif residual(system, rho) > tol:
        raise RepError("point does not solve the system")
    return exact.matrix_rank(jacobian(system, rho), rank_rtol)


def local_dimension(system: PolySystem, rho: MatrixRep, tol: float = 1e-10) -> int:
    return n_variables(system, rho) - jacobian_rank(system, rho, tol)


def render_word(path: Path) -> str:
    if not path.arrows:
        return "1"
    return " ".join(_var(a) for a in path.arrows)


def _var(a: str) -> str:
    return f"x_{a}" if len(a) == 1 else f"x_{{{a}}}"


def format_equation(eq: Equation) -> str:
    """Human form such as ``[x_b, x_c] = x_{a*}`` or ``x_c x_a = 0``.

    Relations ``d(e') = e* - d_e W`` are printed as ``d_e W = e*``.
    """
    sign = -1 if eq.flip else 1
    terms = {k: sign * v for k, v in eq.poly.terms.items()}
    rhs = "0"
    singles = [(p, c) for p, c in terms.items() if len(p.arrows) == 1 and p.arrows[0].endswith("*")]
    if len(singles) == 1 and abs(singles[0][1]) == 1 and len(terms) > 1:
        if singles[0][1] == 1:
            terms = {k: -v for k, v in terms.items()}
        p, _ = singles[0]
        rhs = _var(p.arrows[0])
        del terms[p]
    elif terms and all(c < 0 for c in terms.values()):
        terms = {k: -v for k, v in terms.items()}
    return f"{_format_lhs(terms)} = {rhs}"


def _format_lhs(terms: Mapping[Path, Fraction]) -> str:
    if not terms:
        return "0"
    if len(terms) == 2:
        (p, a), (q, b) = sorted(terms.items(), key=lambda kv: -kv[1])
        if a == 1 and b == -1 and len(p) == 2 and p.arrows == q.arrows[::-1]:
            return f"[{_var(p.arrows[0])}, {_var(p.arrows[1])}]"
    from .quiver import format_coeff_term
    items = sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return "".join(format_coeff_term(c, render_word(p), i == 0) for i, (p, c) in enumerate(items))


def format_system(system: PolySystem, include_redundant: bool = False) -> str:
    lines = []
    for eq in system.equations:
        if eq.redundant and not include_redundant:
            continue
        tag = "  (follows from the others)" if eq.redundant else ""
        lines.append(f"{format_equation(eq)}{tag}")
    return "\n".join(lines)


def normalized_equation_set(polys) -> set[tuple]:
    """Sign-normalized, order-free fingerprint of a set of relations."""
    out = set()
    for p in polys:
        items = tuple(sorted((path.arrows, c) for path, c in p.terms.items()))
        if not items:
            continue
        neg = tuple(sorted((a, -c) for a, c in items))
        out.add(min(items, neg))
    return out


# --- the three-term complex g -> T Rep(Qbar) -> g* ---------------------------

@dataclass
class TangentComplex:
    """``A: gl -> T`` (gauge directions) and ``B: T -> gl`` (moment map linearization)."""

    gl_basis: list[tuple[str, int, int]]
    t_basis: list[tuple[str, int, int]]
    A: np.ndarray
    B: np.ndarray
    omega: np.ndarray
    pairing: np.ndarray

    def composite(self) -> np.ndarray:
        return self.B @ self.A

    def composite_is_zero(self, tol: float = 0.0) -> bool:
        c = self.composite()
        if c.dtype == object:
            return exact.is_zero(c)
        return bool(np.max(np.abs(c), initial=0.0) <= tol)

    def duality_defect(self) -> np.ndarray:
        """``<B(d), a> - omega(A(a), d)`` for all basis pairs (rows d, cols a)."""
        lhs = self.B.T @ self.pairing
        rhs = (self.A.T @ self.omega).T
        return lhs - rhs

    def self_dual(self, tol: float = 0.0) -> bool:
        d = self.duality_defect()
        if d.dtype == object:
            return exact.is_zero(d)
        return bool(np.max(np.abs(d), initial=0.0) <= tol)


def tangent_complex_g2(q: Quiver, rho: MatrixRep, tol: float = 1e-10) -> TangentComplex:
    """Linear maps of ``gl_n -> T Rep(Qbar, n) -> gl_n`` at a zero of the moment map."""
    for v in q.vertices:
        mu = moment_map(q, rho, v)
        bad = (not exact.is_zero(mu)) if rho.exact else (np.max(np.abs(mu), initial=0.0) > tol)
        if bad:
            raise RepError(f"moment map does not vanish at vertex {v!r}")
    qbar = rho.quiver
    dims = rho.dims
    gl_basis = [(v, i, j) for v in q.vertices for i in range(dims[v]) for j in range(dims[v])]
    arrows = [e.id for e in q.edges] + [star(e.id) for e in q.edges]
    t_basis = [
        (a, i, j) for a in arrows
        for i in range(dims[qbar.source(a)]) for j in range(dims[qbar.target(a)])
    ]
    t_index = {b: k for k, b in enumerate(t_basis)}
    g_index = {b: k for k, b in enumerate(gl_basis)}
    zero = Fraction(0) if rho.exact else 0.0
    one = Fraction(1) if rho.exact else 1.0

    def unit(n, i, j):
        m = rho.zeros(n, n)
        m[i, j] = one
        return m

    def new(r, c):
        return exact.qzeros((r, c)) if rho.exact else np.zeros((r, c))

    A = new(len(t_basis), len(gl_basis))
    for col, (v, i, j) in enumerate(gl_basis):
        a = unit(dims[v], i, j)
        for arrow in arrows:
            s, t = qbar.source(arrow), qbar.target(arrow)
            m = rho[arrow]
            val = (a @ m if s == v else rho.zeros(*m.shape)) - (m @ a if t == v else rho.zeros(*m.shape))
            for idx in np.ndindex(val.shape):
                if val[idx] != zero:
                    A[t_index[(arrow, *idx)], col] = val[idx]

    B = new(len(gl_basis), len(t_basis))
    for col, (arrow, i, j) in enumerate(t_basis):
        s, t = qbar.source(arrow), qbar.target(arrow)
        delta = rho.zeros(dims[s], dims[t])
        delta[i, j] = one
        base = arrow[:-1] if arrow.endswith("*") else arrow
        e = q.edge(base)
        contrib: dict[str, np.ndarray] = {}
        if arrow == base:
            # d(e e* - e* e) with e varied
            contrib[e.src] = delta @ rho[star(base)]
            contrib[e.tgt] = contrib.get(e.tgt, rho.zeros(dims[e.tgt], dims[e.tgt])) - rho[star(base)] @ delta
        else:
            contrib[e.src] = rho[base] @ delta
            contrib[e.tgt] = contrib.get(e.tgt, rho.zeros(dims[e.tgt], dims[e.tgt])) - delta @ rho[base]
        for v, m in contrib.items():
            for idx in np.ndindex(m.shape):
                if m[idx] != zero:
                    B[g_index[(v, *idx)], col] = B[g_index[(v, *idx)], col] + m[idx]

    omega = new(len(t_basis), len(t_basis))
    for e in q.edges:
        s, t = e.src, e.tgt
        for i in range(dims[s]):
            for j in range(dims[t]):
                u = t_index[(e.id, i, j)]
                w = t_index[(star(e.id), j, i)]
                omega[u, w] = one   # tr(u_e v_e*)
                omega[w, u] = -one  # -tr(u_e* v_e)
    pairing = new(len(gl_basis), len(gl_basis))
    for (v, i, j), k in g_index.items():
        pairing[k, g_index[(v, j, i)]] = one  # <X, a> = tr(a X)
    return TangentComplex(gl_basis, t_basis, A, B, omega, pairing)


def commuting_pair_rep(x: np.ndarray, xs: np.ndarray) -> MatrixRep:
    """A point of ``Rep(S1bar, n)`` with ``a -> x`` and ``a* -> x*``."""
    from .corpus import jordan
    n = x.shape[0]
    field = RATIONAL if x.dtype == object else FLOAT
    return MatrixRep(double(jordan(("a",))), {"0": n}, {"a": x, "a*": xs}, field)


def sample_commuting_pair(n: int, rng, bound: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Exact commuting pair ``(x, y)`` with ``y`` a random element of the centralizer of ``x``.

    ``x`` is drawn in one of three flavours so that non-regular centralizers
    appear too: a random integer matrix, a conjugated Jordan-type matrix, or a
    conjugated scalar-plus-block matrix.
    """
    from .commvar import centralizer_basis, random_invertible

    flavour = int(rng.integers(3))
    if flavour == 0:
        x = exact.qmatrix(rng.integers(-bound, bound + 1, size=(n, n)).tolist())
    else:
        base = exact.qzeros((n, n))
        eig = [Fraction(int(rng.integers(-2, 3))) for _ in range(n)]
        if flavour == 2:
            eig = [eig[0]] * n
        for i in range(n):
            base[i, i] = eig[i]
            if i + 1 < n and eig[i] == eig[i + 1] and rng.integers(2):
                base[i, i + 1] = Fraction(1)
        g, g_inv = random_invertible(n, rng)
        x = g @ base @ g_inv
    basis = centralizer_basis(x)
    y = exact.qzeros((n, n))
    for b in basis:
        y = y + Fraction(int(rng.integers(-bound, bound + 1))) * b
    return x, y


__all__ = [
    "MatrixRep", "RepError", "RATIONAL", "FLOAT", "random_rep", "evaluate", "evaluate_between",
    "evaluate_path", "moment_map", "chern0", "trace_gradient", "finite_difference_gradient", "symbolic_gradient",
    "Equation", "PolySystem", "truncation_equations", "residual", "residual_squared", "jacobian",
    "jacobian_rank", "local_dimension", "format_equation", "format_system",
    "normalized_equation_set", "TangentComplex", "tangent_complex_g2", "commuting_pair_rep",
    "sample_commuting_pair", "QuiverError",
]
