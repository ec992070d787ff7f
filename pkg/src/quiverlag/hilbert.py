"""Framed Jordan-quiver data ``(x, x*, v, v*)``, stability and the saturation ``L_n``.

Matrices act on column vectors: ``v`` is a vector in ``k^n``, ``v*`` a
covector, and the framed moment map is ``[x, x*] + v v*``.  Exact input
(Fraction object arrays) is handled exactly; float input uses
SVD thresholds and eigenvalue clustering.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np
import sympy
from scipy.linalg import schur

from . import exact
from .commvar import (
    Partition, check_partition, format_partition, jordan_block, lambda_membership,
    partitions_of, random_invertible, distinct_rationals,
)


class UnsupportedInput(ValueError):
    """Exact computation impossible for this input (e.g. irrational eigenvalues)."""


class PreconditionError(ValueError):
    pass


def _is_exact(*arrays) -> bool:
    """Fraction (object) and integer arrays are exact; floats are not."""
    return all(np.asarray(a).dtype == object or np.asarray(a).dtype.kind in "iub" for a in arrays)


def _vector(v, exact_mode: bool) -> np.ndarray:
    arr = np.asarray(v, dtype=object if exact_mode else float).reshape(-1)
    if exact_mode:
        return np.array([exact.frac(a) for a in arr], dtype=object)
    return arr


@dataclass(frozen=True)
class ADHMDatum:
    x: np.ndarray
    xs: np.ndarray
    v: np.ndarray
    vs: np.ndarray
    field: str = "rational"

    def __post_init__(self):
        ex = self.field == "rational"
        x = exact.qmatrix(self.x) if ex else np.asarray(self.x, dtype=float)
        xs = exact.qmatrix(self.xs) if ex else np.asarray(self.xs, dtype=float)
        n = x.shape[0]
        v, vs = _vector(self.v, ex), _vector(self.vs, ex)
        if x.shape != (n, n) or xs.shape != (n, n) or v.shape != (n,) or vs.shape != (n,):
            raise ValueError("inconsistent sizes in framed datum")
        for name, val in (("x", x), ("xs", xs), ("v", v), ("vs", vs)):
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def exact(self) -> bool:
        return self.field == "rational"

    def norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(exact.to_float(a) ** 2)) for a in (self.x, self.xs, self.v, self.vs))))


# --- stability and moment map -------------------------------------------------

def stability_check(x, xs, v, tol: float = 1e-8) -> bool:
    """Does ``k<x, x*> v`` fill the whole space?

    The span is grown by applying ``x`` and ``x*`` to the newest vectors until
    it stops growing; a round without growth means the span is invariant, so
    at most ``n`` rounds are needed.
    """
    n = np.asarray(x).shape[0]
    if _is_exact(x, xs, v):
        x, xs = exact.qmatrix(x), exact.qmatrix(xs)
        basis = exact.RowBasis(n)
        fresh = [_vector(v, True)] if basis.add(_vector(v, True)) else []
        while fresh and basis.dim < n:
            nxt = []
            for w in fresh:
                for m in (x, xs):
                    u = m @ w
                    if basis.add(u):
                        nxt.append(u)
            fresh = nxt
        return basis.dim == n
    x, xs, v = (np.asarray(a, dtype=complex) for a in (x, xs, v))
    scale = max(1.0, np.linalg.norm(x), np.linalg.norm(xs), np.linalg.norm(v))
    q = np.zeros((n, 0), dtype=complex)

    def push(w):
        nonlocal q
        w = w - q @ (q.conj().T @ w)
        w = w - q @ (q.conj().T @ w)
        nrm = np.linalg.norm(w)
        if nrm > tol * scale:
            q = np.concatenate([q, (w / nrm).reshape(-1, 1)], axis=1)
            return True
        return False

    fresh = [v.reshape(-1)] if push(v.reshape(-1)) else []
    while fresh and q.shape[1] < n:
        nxt = []
        for w in fresh:
            for m in (x, xs):
                u = m @ w
                if push(u):
                    nxt.append(q[:, -1])
        fresh = nxt
    return q.shape[1] == n


def framed_moment(d: ADHMDatum) -> np.ndarray:
    """``[x, x*] + v v*``."""
    return d.x @ d.xs - d.xs @ d.x + np.outer(d.v, d.vs)


def _max_abs(a) -> float:
    return float(np.max(np.abs(exact.to_float(a)), initial=0.0))


def stable_zero_fiber_check(d: ADHMDatum, tol: float = 1e-8) -> bool:
    """On stable points of the zero fiber, ``v*`` must vanish."""
    mu = framed_moment(d)
    if not exact.is_zero(mu) if d.exact else _max_abs(mu) > tol:
        raise PreconditionError("moment map does not vanish")
    if not stability_check(d.x, d.xs, d.v, tol):
        raise PreconditionError("datum is not stable")
    return float(np.linalg.norm(exact.to_float(d.vs))) <= tol * (1 + d.norm())


def project_to_zero_fiber(d: ADHMDatum) -> ADHMDatum:
    """One Gauss-Newton step towards ``[x, x*] + v v* = 0`` (minimum-norm correction)."""
    n = d.n
    x, xs, v, vs = (exact.to_float(a).astype(float) for a in (d.x, d.xs, d.v, d.vs))
    eye = np.eye(n)
    # d mu = [dx, xs] + [x, dxs] + dv vs + v dvs, row-major vectorization
    jx = np.kron(eye, xs.T) - np.kron(xs, eye)
    jxs = np.kron(x, eye) - np.kron(eye, x.T)
    jv = np.zeros((n * n, n))
    jvs = np.zeros((n * n, n))
    for i in range(n):
        for j in range(n):
            jv[i * n + j, i] = vs[j]
            jvs[i * n + j, j] = v[i]
    jac = np.concatenate([jx, jxs, jv, jvs], axis=1)
    mu = (x @ xs - xs @ x + np.outer(v, vs)).ravel()
    step, *_ = np.linalg.lstsq(jac, -mu, rcond=None)
    nn = n * n
    return ADHMDatum(
        x + step[:nn].reshape(n, n), xs + step[nn:2 * nn].reshape(n, n),
        v + step[2 * nn:2 * nn + n], vs + step[2 * nn + n:], field="float",
    )


# --- joint spectra ------------------------------------------------------------

@dataclass(frozen=True)
class PlanePointMultiset:
    points: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.points)

    def counter(self) -> Counter:
        return Counter(self.points)


def _sym(m: np.ndarray) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in row] for row in exact.qmatrix(m)])


def rational_eigenvalues(m: np.ndarray) -> dict[Fraction, int]:
    """Eigenvalues with algebraic multiplicity; irrational spectra are unsupported."""
    lam = sympy.Symbol("lam")
    poly = _sym(m).charpoly(lam).as_expr()
    _, factors = sympy.factor_list(poly, lam)
    out: dict[Fraction, int] = {}
    for f, mult in factors:
        p = sympy.Poly(f, lam)
        if p.degree() != 1:
            raise UnsupportedInput("matrix has eigenvalues outside the rationals")
        a, b = p.all_coeffs()
        root = -sympy.Rational(b) / sympy.Rational(a)
        out[Fraction(int(root.p), int(root.q))] = out.get(Fraction(int(root.p), int(root.q)), 0) + mult
    return out


def generalized_eigenspace(x: np.ndarray, alpha, mult: int) -> np.ndarray:
    n = x.shape[0]
    shifted = exact.qmatrix(x) - exact.qeye(n) * exact.frac(alpha)
    power = exact.qeye(n)
    for _ in range(mult):
        power = power @ shifted
    basis = exact.nullspace(power)
    return exact.qmatrix(np.array(basis, dtype=object).T) if basis else exact.qzeros((n, 0))


def restrict(m: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix of ``m`` on the invariant subspace spanned by the columns of ``basis``."""
    k = basis.shape[1]
    out = exact.qzeros((k, k))
    image = m @ basis
    for j in range(k):
        sol = exact.solve(basis, image[:, j])
        if sol is None:
            raise ValueError("subspace is not invariant")
        out[:, j] = sol
    return out


def _commute_check(x, xs, tol) -> None:
    c = x @ xs - xs @ x
    if _is_exact(x, xs):
        if not exact.is_zero(c):
            raise ValueError("x and x* do not commute")
    elif _max_abs(c) > tol * max(1.0, _max_abs(x), _max_abs(xs)):
        raise ValueError("x and x* do not commute")


def hilbert_chow(x, xs, tol: float = 1e-8, seed: int = 0) -> PlanePointMultiset:
    """Joint spectrum of a commuting pair, with multiplicities."""
    _commute_check(x, xs, tol)
    rng = np.random.default_rng(seed)
    if _is_exact(x, xs):
        try:
            return _hilbert_chow_exact(exact.qmatrix(x), exact.qmatrix(xs), rng)
        except UnsupportedInput:
            pass
    return _hilbert_chow_float(exact.to_float(x).astype(complex), exact.to_float(xs).astype(complex), tol, rng)


def _hilbert_chow_exact(x, xs, rng) -> PlanePointMultiset:
    n = x.shape[0]
    for _ in range(10):
        beta = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 7)))
        c = x + xs * beta
        pts = []
        ok = True
        for gamma, m in sorted(rational_eigenvalues(c).items()):
            basis = generalized_eigenspace(c, gamma, m)
            rx, rxs = restrict(x, basis), restrict(xs, basis)
            a = sum(rx[i, i] for i in range(m)) / m
            b = sum(rxs[i, i] for i in range(m)) / m
            nil = rx - exact.qeye(m) * a
            if not exact.is_zero(np.linalg.matrix_power(nil, m) if m else nil):
                ok = False  # the combination merged two joint eigenvalues
                break
            pts += [(a, b)] * m
        if ok and len(pts) == n:
            return PlanePointMultiset(tuple(sorted(pts)))
    raise UnsupportedInput("no separating combination found")


def _hilbert_chow_float(x, xs, tol, rng) -> PlanePointMultiset:
    n = x.shape[0]
    angle = rng.uniform(0.3, 1.2)
    c = np.cos(angle) * x + np.sin(angle) * xs
    eig = np.linalg.eigvals(c)
    scale = max(1.0, float(np.max(np.abs(eig), initial=0.0)))
    gap = max(tol, 1e-6) ** (1.0 / max(n, 1)) * scale
    clusters: list[list[complex]] = []
    for z in sorted(eig, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            if abs(cl[0] - z) <= gap:
                cl.append(z)
                break
        else:
            clusters.append([z])
    pts = []
    for cl in clusters:
        center = np.mean(cl)
        m = len(cl)
        _, z, _ = schur(c, output="complex", sort=lambda w, c0=center: abs(w - c0) <= gap)
        zm = z[:, :m]
        a = np.trace(zm.conj().T @ x @ zm) / m
        b = np.trace(zm.conj().T @ xs @ zm) / m
        pts += [(_clean(a), _clean(b))] * m
    return PlanePointMultiset(tuple(sorted(pts, key=lambda p: (np.real(p[0]), np.real(p[1])))))


def _clean(z: complex):
    return float(z.real) if abs(z.imag) <= 1e-9 * max(1.0, abs(z)) else complex(z)


def stratum_test(pts: PlanePointMultiset, lam: Sequence[int], tol: float = 1e-8) -> bool:
    """Group equal first coordinates: sizes must be ``lam`` and each group's ``b`` sum must vanish."""
    lam = check_partition(sorted(lam, reverse=True))
    groups: list[list[tuple]] = []
    for p in pts.points:
        for g in groups:
            if _close(g[0][0], p[0], tol):
                g.append(p)
                break
        else:
            groups.append([p])
    sizes = tuple(sorted((len(g) for g in groups), reverse=True))
    if sizes != lam:
        return False
    return all(_close(sum(b for _, b in g), 0, tol * len(g)) for g in groups)


def _close(a, b, tol) -> bool:
    if isinstance(a, Fraction) and isinstance(b, (Fraction, int)):
        return a == b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)))


# --- memberships --------------------------------------------------------------

def lambda_n1_membership(x, xs, v) -> bool:
    """``x*`` in ``[g_x, g_x]`` and ``v`` cyclic for ``k[x, x*]``."""
    if not _is_exact(x, xs, v):
        raise UnsupportedInput("membership tests need exact input")
    return lambda_membership(x, xs) and stability_check(x, xs, v)


def saturation_membership(x, xs, v) -> bool:
    """Commuting, stable, and ``tr(x*) = 0`` on each generalized eigenspace of ``x``."""
    if not _is_exact(x, xs, v):
        raise UnsupportedInput("membership tests need exact input")
    x, xs = exact.qmatrix(x), exact.qmatrix(xs)
    if not exact.is_zero(x @ xs - xs @ x):
        return False
    if not stability_check(x, xs, v):
        return False
    for alpha, m in rational_eigenvalues(x).items():
        basis = generalized_eigenspace(x, alpha, m)
        r = restrict(xs, basis)
        if sum(r[i, i] for i in range(r.shape[0])) != 0:
            return False
    return True


# --- nested partitions and the components of L_n ------------------------------

NestedPartition = tuple[Partition, ...]


def nested_partitions(n: int) -> list[NestedPartition]:
    """Multisets of partitions whose sizes form a partition of ``n``.

    Blocks of equal size are interchangeable, so each entry lists them in a
    canonical (sorted) order.
    """
    out = []
    for lam in partitions_of(n):
        counts = Counter(lam)
        choices = []
        for size in sorted(counts, reverse=True):
            choices.append(list(combinations_with_replacement(partitions_of(size), counts[size])))
        for pick in product(*choices):
            out.append(tuple(p for group in pick for p in group))
    return out


def nested_partitions_bruteforce(n: int) -> set[NestedPartition]:
    """Independent count: all size-decreasing tuples, identified up to reordering."""
    out: set[NestedPartition] = set()

    def grow(prefix: tuple, remaining: int, cap: int):
        if remaining == 0:
            out.add(tuple(sorted(prefix, key=lambda mu: (-sum(mu), tuple(-k for k in mu)))))
            return
        for size in range(min(cap, remaining), 0, -1):
            for mu in partitions_of(size):
                grow(prefix + (mu,), remaining - size, size)

    grow((), n, n)
    return out


def nested_lambda(nested: NestedPartition) -> Partition:
    return tuple(sorted((sum(mu) for mu in nested), reverse=True))


def format_nested(nested: NestedPartition) -> str:
    return "(" + ",".join(format_partition(mu) for mu in nested) + ")"


@dataclass
class ComponentSample:
    nested: NestedPartition
    datum: ADHMDatum
    frame: list[tuple[np.ndarray, np.ndarray, np.ndarray]]
    alphas: tuple[Fraction, ...]
    spectra: tuple[tuple[Fraction, ...], ...] = field(default=())

    @property
    def lam(self) -> Partition:
        return nested_lambda(self.nested)


def _traceless_spectrum(sizes: Sequence[int], rng, attempts: int = 50) -> list[Fraction]:
    """Pairwise distinct ``b_j`` with ``sum_j sizes[j] b_j = 0``."""
    if len(sizes) == 1:
        return [Fraction(0)]
    for _ in range(attempts):
        head = distinct_rationals(len(sizes) - 1, rng)
        last = -sum(s * b for s, b in zip(sizes, head)) / sizes[-1]
        bs = head + [last]
        if len(set(bs)) == len(bs):
            return bs
    raise PreconditionError(f"could not draw a distinct traceless spectrum for sizes {sizes}")


def sample_component(nested: Sequence[Sequence[int]], seed: int = 0, rng=None) -> ComponentSample:
    """Point of the component ``L_mu`` of the saturation, plus a tangent frame.

    Chart: on the ``k``-th generalized eigenspace ``x = alpha_k + J`` with
    ``J`` nilpotent of type ``mu^k``; on each Jordan block ``j`` of it
    ``x* = b_kj + (polynomial in the block without constant term)`` with the
    ``b_kj`` pairwise distinct and ``sum_j |block j| b_kj = 0``; ``v`` is the
    sum of the cyclic vectors of the blocks.  Everything is then conjugated by
    a random unimodular ``g``.
    """
    nested = tuple(check_partition(mu) for mu in nested)
    if any(sum(a) < sum(b) for a, b in zip(nested, nested[1:])):
        raise ValueError("nested partition sizes must be weakly decreasing")
    rng = np.random.default_rng(seed) if rng is None else rng
    n = sum(sum(mu) for mu in nested)
    alphas = distinct_rationals(len(nested), rng)
    x0, xs0 = exact.qzeros((n, n)), exact.qzeros((n, n))
    v0 = np.array([Fraction(0)] * n, dtype=object)
    ges_slices, block_slices, spectra = [], [], []
    off = 0
    for k, mu in enumerate(nested):
        start = off
        bs = _traceless_spectrum(mu, rng)
        spectra.append(tuple(bs))
        for j, s in enumerate(mu):
            sl = slice(off, off + s)
            x0[sl, sl] = jordan_block(alphas[k], s)
            nil = jordan_block(0, s)
            block = exact.qeye(s) * bs[j]
            power = exact.qeye(s)
            for _ in range(1, s):
                power = power @ nil
                block = block + power * Fraction(int(rng.integers(-3, 4)))
            xs0[sl, sl] = block
            v0[off + s - 1] = Fraction(1)
            block_slices.append((k, j, sl, s))
            off += s
        ges_slices.append(slice(start, off))
    g, g_inv = random_invertible(n, rng)

    def conj(m):
        return g @ m @ g_inv

    x, xs, v = conj(x0), conj(xs0), g @ v0
    zero_m = exact.qzeros((n, n))
    zero_v = np.array([Fraction(0)] * n, dtype=object)
    frame: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    for sl in ges_slices:
        p = exact.qzeros((n, n))
        p[sl, sl] = exact.qeye(sl.stop - sl.start)
        frame.append((conj(p), zero_m, zero_v))
    by_ges: dict[int, list] = {}
    for k, j, sl, s in block_slices:
        by_ges.setdefault(k, []).append((sl, s))
    for blocks in by_ges.values():
        for (sl1, s1), (sl2, s2) in zip(blocks, blocks[1:]):
            d = exact.qzeros((n, n))
            d[sl1, sl1] = exact.qeye(s1) * s2
            d[sl2, sl2] = exact.qeye(s2) * (-s1)
            frame.append((zero_m, conj(d), zero_v))
    for _, _, sl, s in block_slices:
        nil = jordan_block(0, s)
        power = exact.qeye(s)
        for _ in range(1, s):
            power = power @ nil
            d = exact.qzeros((n, n))
            d[sl, sl] = power
            frame.append((zero_m, conj(d), zero_v))
    for i in range(n):
        e = zero_v.copy()
        e[i] = Fraction(1)
        frame.append((zero_m, zero_m, e))
    for i in range(n):
        for j in range(n):
            a = exact.qzeros((n, n))
            a[i, j] = Fraction(1)
            frame.append((a @ x - x @ a, a @ xs - xs @ a, a @ v))
    datum = ADHMDatum(x, xs, v, zero_v, field="rational")
    return ComponentSample(nested, datum, frame, tuple(alphas), tuple(spectra))


def upstairs_rank(sample: ComponentSample, rtol: float = 1e-8) -> int:
    rows = [list(dx.flat) + list(dxs.flat) + list(dv) for dx, dxs, dv in sample.frame]
    return exact.matrix_rank(np.array(rows, dtype=object), rtol)


def component_rows(max_n: int, seed: int, samples: int = 1) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(1, max_n + 1):
        for nested in nested_partitions(n):
            for s in range(samples):
                sample = sample_component(nested, rng=rng)
                d = sample.datum
                sat = saturation_membership(d.x, d.xs, d.v)
                stratum = stratum_test(hilbert_chow(d.x, d.xs, seed=seed), sample.lam)
                rank = upstairs_rank(sample)
                rows.append({
                    "n": n, "nested": format_nested(nested), "sample": s, "saturation": sat,
                    "stratum": format_partition(sample.lam), "in_stratum": stratum,
                    "rank": rank, "expected": n + n * n, "quotient_dim": rank - n * n,
                    "pass": sat and stratum and rank == n + n * n,
                })
    return rows
