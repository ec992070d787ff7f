"""Centralizers, commutator subspaces and the components of ``Lambda_n``.

``Lambda_n`` is the set of pairs ``(x, t)`` of ``n x n`` matrices with
``t`` in the commutator space ``[g_x, g_x]`` of the centralizer ``g_x``.
Matrices act on column vectors; a Jordan block of size ``k`` has ones on
the superdiagonal, so the last basis vector is cyclic.

All subspace computations are exact over the rationals.  Vectorization is
row-major throughout: ``vec(y)[i*n + j] = y[i, j]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares
from sympy.utilities.iterables import partitions as _sympy_partitions

from . import exact

Partition = tuple[int, ...]


# --- partitions ---------------------------------------------------------------

def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` as weakly decreasing tuples, largest first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [()]
    out = []
    for p in _sympy_partitions(n):
        out.append(tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True)))
    return sorted(out, reverse=True)


def check_partition(lam: Sequence[int]) -> Partition:
    lam = tuple(int(k) for k in lam)
    if any(k <= 0 for k in lam):
        raise ValueError(f"partition {lam} has a nonpositive part")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"partition {lam} is not weakly decreasing")
    return lam


def conjugate(lam: Sequence[int]) -> Partition:
    lam = check_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for k in lam if k > j) for j in range(lam[0]))


def format_partition(lam: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in lam) + ")"


def parse_partition(text: str) -> Partition:
    body = text.strip().strip("()[]")
    if not body:
        return ()
    return check_partition(sorted((int(t) for t in body.replace(" ", "").split(",") if t), reverse=True))


@dataclass(frozen=True)
class JordanSpec:
    """Eigenvalue / nilpotent-type pairs with pairwise distinct eigenvalues."""

    blocks: tuple[tuple[Fraction, Partition], ...]

    def __post_init__(self):
        blocks = tuple((exact.frac(a), check_partition(lam)) for a, lam in self.blocks)
        alphas = [a for a, _ in blocks]
        if len(set(alphas)) != len(alphas):
            raise ValueError("eigenvalues of a Jordan spec must be distinct")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def nilpotent(cls, lam: Sequence[int]) -> "JordanSpec":
        return cls(((Fraction(0), tuple(lam)),))

    @property
    def n(self) -> int:
        return sum(sum(lam) for _, lam in self.blocks)

    @property
    def predicted_codim(self) -> int:
        return sum(lam[0] for _, lam in self.blocks if lam)

    def label(self) -> str:
        return " + ".join(f"{a}:{format_partition(lam)}" for a, lam in self.blocks)


# --- matrices -----------------------------------------------------------------

def jordan_block(alpha, k: int) -> np.ndarray:
    m = exact.qzeros((k, k))
    for i in range(k):
        m[i, i] = exact.frac(alpha)
        if i + 1 < k:
            m[i, i + 1] = Fraction(1)
    return m


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = exact.qzeros((n, n))
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def jordan_matrix(spec: JordanSpec | Sequence[int]) -> np.ndarray:
    """Block-diagonal Jordan matrix; a bare partition means eigenvalue 0."""
    if not isinstance(spec, JordanSpec):
        spec = JordanSpec.nilpotent(spec)
    return block_diag([jordan_block(a, k) for a, lam in spec.blocks for k in lam])


def unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    m = exact.qzeros((n, n))
    m[i, j] = Fraction(1)
    return m


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def vec(m: np.ndarray) -> list:
    return list(np.asarray(m).flat)


def unvec(v: Sequence, n: int) -> np.ndarray:
    return exact.qmatrix(np.asarray(list(v), dtype=object).reshape(n, n))


def ad_matrix(x: np.ndarray) -> np.ndarray:
    """Matrix of ``y -> xy - yx`` in row-major coordinates."""
    n = x.shape[0]
    eye = exact.qeye(n)
    return np.kron(x, eye) - np.kron(eye, x.T)


def random_invertible(n: int, rng, bound: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Unimodular integer matrix ``L U`` and its (integer) inverse."""
    lower, upper = exact.qeye(n), exact.qeye(n)
    for i in range(n):
        for j in range(n):
            if i > j:
                lower[i, j] = Fraction(int(rng.integers(-bound, bound + 1)))
            elif i < j:
                upper[i, j] = Fraction(int(rng.integers(-bound, bound + 1)))
    g = lower @ upper
    return g, exact.inverse(g)


# --- centralizers and commutator spaces ---------------------------------------

def centralizer_basis(x: np.ndarray) -> list[np.ndarray]:
    x = exact.qmatrix(x)
    n = x.shape[0]
    if x.shape != (n, n):
        raise ValueError("x must be square")
    return [unvec(v, n) for v in exact.nullspace(ad_matrix(x))]


def commutator_space(x: np.ndarray, centralizer: list[np.ndarray] | None = None) -> list[np.ndarray]:
    """Basis of the span of ``[b_i, b_j]`` over a centralizer basis."""
    x = exact.qmatrix(x)
    n = x.shape[0]
    cent = centralizer_basis(x) if centralizer is None else centralizer
    # [g_x, g_x] lies in the traceless part of g_x, which has dimension dim g_x - 1
    ceiling = max(len(cent) - 1, 0)
    basis = exact.RowBasis(n * n)
    for a, b in combinations(cent, 2):
        if basis.dim >= ceiling:
            break
        basis.add(vec(bracket(a, b)))
    return [unvec(v, n) for v in basis.vectors()]


def in_span(basis: Sequence[np.ndarray], m: np.ndarray) -> bool:
    if not basis:
        return exact.is_zero(m)
    rb = exact.RowBasis(m.size)
    rb.extend(vec(b) for b in basis)
    return rb.contains(vec(exact.qmatrix(m)))


@dataclass(frozen=True)
class CodimResult:
    spec: JordanSpec
    centralizer_dim: int
    commutator_dim: int
    predicted: int

    @property
    def codim(self) -> int:
        return self.centralizer_dim - self.commutator_dim

    @property
    def verdict(self) -> bool:
        return self.codim == self.predicted

    def __bool__(self) -> bool:
        return self.verdict

    def row(self) -> dict:
        return {
            "spec": self.spec.label(), "n": self.spec.n, "centralizer_dim": self.centralizer_dim,
            "commutator_dim": self.commutator_dim, "predicted_codim": self.predicted,
            "verdict": self.verdict,
        }


def codim_result(spec: JordanSpec) -> CodimResult:
    x = jordan_matrix(spec)
    cent = centralizer_basis(x)
    comm = commutator_space(x, cent)
    return CodimResult(spec, len(cent), len(comm), spec.predicted_codim)


def codim_theorem_check(spec: JordanSpec) -> bool:
    return codim_result(spec).verdict


def single_eigenvalue_specs(n: int) -> list[JordanSpec]:
    return [JordanSpec.nilpotent(lam) for lam in partitions_of(n)]


def two_eigenvalue_specs(max_n: int, alphas=(Fraction(0), Fraction(1))) -> list[JordanSpec]:
    out = []
    for n1 in range(1, max_n):
        for n2 in range(1, max_n - n1 + 1):
            for l1 in partitions_of(n1):
                for l2 in partitions_of(n2):
                    out.append(JordanSpec(((alphas[0], l1), (alphas[1], l2))))
    return out


@dataclass(frozen=True)
class CommutatorSetResult:
    verdict: str  # "equal" or "inconclusive"
    residuals: tuple[float, ...]
    space_dim: int

    def __bool__(self) -> bool:
        return self.verdict == "equal"


def solve_commutator(cent: Sequence[np.ndarray], target: np.ndarray, rng, restarts: int = 8,
                     tol: float = 1e-8) -> tuple[float, np.ndarray | None, np.ndarray | None]:
    """Least-squares search for ``y, z`` in ``span(cent)`` with ``[y, z] = target``."""
    basis = np.array([exact.to_float(b) for b in cent])
    t = exact.to_float(target)
    if not np.any(t):
        zero = np.zeros_like(t)
        return 0.0, zero, zero
    scale = np.linalg.norm(t)
    t = t / scale
    d = len(cent)

    def unpack(p):
        y = np.tensordot(p[:d], basis, axes=1)
        z = np.tensordot(p[d:], basis, axes=1)
        return y, z

    def fun(p):
        y, z = unpack(p)
        return (y @ z - z @ y - t).ravel()

    best = (np.inf, None, None)
    for _ in range(restarts):
        p0 = rng.standard_normal(2 * d)
        sol = least_squares(fun, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        res = float(np.linalg.norm(fun(sol.x))) * scale
        if res < best[0]:
            y, z = unpack(sol.x)
            best = (res, y * np.sqrt(scale), z * np.sqrt(scale))
        if res <= tol:
            break
    return best


def commutator_set_equals_span(x: np.ndarray, trials: int = 20, seed: int = 0, tol: float = 1e-8) -> CommutatorSetResult:
    """Certify random elements of ``[g_x, g_x]`` as single commutators.

    Failure to converge is reported as ``"inconclusive"``, never as a
    counterexample: the solver is local and incomplete.
    """
    rng = np.random.default_rng(seed)
    cent = centralizer_basis(x)
    space = commutator_space(x, cent)
    if not space:
        return CommutatorSetResult("equal", (), 0)
    residuals = []
    for _ in range(trials):
        t = exact.qzeros(space[0].shape)
        for b in space:
            t = t + Fraction(int(rng.integers(-3, 4))) * b
        res, _, _ = solve_commutator(cent, t, rng, tol=tol)
        residuals.append(float(res))
    verdict = "equal" if all(r <= tol for r in residuals) else "inconclusive"
    return CommutatorSetResult(verdict, tuple(residuals), len(space))


def lambda_membership(x: np.ndarray, t: np.ndarray) -> bool:
    """Is ``t`` in the commutator space of the centralizer of ``x``?"""
    x, t = exact.qmatrix(x), exact.qmatrix(t)
    if x.shape != t.shape or x.shape[0] != x.shape[1]:
        raise ValueError("x and t must be square of the same size")
    return in_span(commutator_space(x), t)


# --- the components Lambda_mu -------------------------------------------------

@dataclass
class LambdaSample:
    mu: Partition
    x: np.ndarray
    t: np.ndarray
    frame: list[tuple[np.ndarray, np.ndarray]]
    eigenvalues: tuple[Fraction, ...]
    g: np.ndarray = field(repr=False, default=None)


def distinct_rationals(k: int, rng, pool: int = 12) -> list[Fraction]:
    """``k`` distinct rationals, distinct by construction (sampling without replacement)."""
    nums = rng.choice(np.arange(-pool, pool + 1), size=k, replace=False)
    den = int(rng.integers(1, 4))
    return [Fraction(int(a), den) for a in nums]


def _traceless_block_basis(k: int) -> list[np.ndarray]:
    out = []
    for i in range(k):
        for j in range(k):
            if i != j:
                out.append(unit_matrix(k, i, j))
    for i in range(k - 1):
        out.append(unit_matrix(k, i, i) - unit_matrix(k, i + 1, i + 1))
    return out


def _embed(block: np.ndarray, offset: int, n: int) -> np.ndarray:
    out = exact.qzeros((n, n))
    k = block.shape[0]
    out[offset:offset + k, offset:offset + k] = block
    return out


def sample_lambda_mu(mu: Sequence[int], seed: int = 0, rng=None) -> LambdaSample:
    """Point of ``Lambda_mu`` from the chart ``GL_n x_L {(sum z_k id, y) : y in [l, l]}``.

    The frame contains the eigenvalue shifts, a basis of ``[l, l]`` and the
    ``n^2`` infinitesimal conjugations ``([A, x], [A, t])``.
    """
    mu = check_partition(mu)
    n = sum(mu)
    rng = np.random.default_rng(seed) if rng is None else rng
    z = distinct_rationals(len(mu), rng)
    g, g_inv = random_invertible(n, rng)
    diag_blocks, y_blocks, offsets = [], [], []
    off = 0
    for zk, k in zip(z, mu):
        diag_blocks.append(jordan_block(zk, 1) if k == 1 else exact.qeye(k) * zk)
        y = exact.qmatrix(rng.integers(-3, 4, size=(k, k)).tolist())
        y[k - 1, k - 1] = y[k - 1, k - 1] - sum(y[i, i] for i in range(k))
        y_blocks.append(y)
        offsets.append(off)
        off += k
    d = block_diag(diag_blocks)
    y = block_diag(y_blocks)
    x = g @ d @ g_inv
    t = g @ y @ g_inv
    zero = exact.qzeros((n, n))
    frame: list[tuple[np.ndarray, np.ndarray]] = []
    for k, o in zip(mu, offsets):
        frame.append((g @ _embed(exact.qeye(k), o, n) @ g_inv, zero))
    for k, o in zip(mu, offsets):
        for b in _traceless_block_basis(k):
            frame.append((zero, g @ _embed(b, o, n) @ g_inv))
    for i in range(n):
        for j in range(n):
            a = unit_matrix(n, i, j)
            frame.append((bracket(a, x), bracket(a, t)))
    return LambdaSample(mu, x, t, frame, tuple(z), g)


def frame_rank(frame: Sequence[tuple[np.ndarray, ...]], rtol: float = 1e-8) -> int:
    rows = [sum((vec(m) for m in tangent), []) for tangent in frame]
    if not rows:
        return 0
    arr = np.array(rows, dtype=object)
    if all(isinstance(v, Fraction) for v in arr.flat):
        return exact.rank(arr)
    return exact.numeric_rank(arr.astype(float), rtol)


def pairing(u: tuple[np.ndarray, np.ndarray], v: tuple[np.ndarray, np.ndarray]):
    """``tr(dx dt' - dt dx')`` for tangent vectors ``u = (dx, dt)``, ``v = (dx', dt')``."""
    (dx, dt), (dx2, dt2) = u, v
    return np.trace(dx @ dt2 - dt @ dx2)


def isotropy_check(frame: Sequence[tuple[np.ndarray, np.ndarray]]) -> float:
    """Largest ``|omega(u, v)|`` over all pairs of frame vectors."""
    worst = 0.0
    for i, u in enumerate(frame):
        for v in frame[i + 1:]:
            worst = max(worst, abs(float(pairing(u, v))))
    return worst


def component_rows(max_n: int, samples: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(1, max_n + 1):
        for mu in partitions_of(n):
            for s in range(samples):
                sample = sample_lambda_mu(mu, rng=rng)
                rank = frame_rank(sample.frame)
                iso = isotropy_check(sample.frame)
                member = lambda_membership(sample.x, sample.t)
                rows.append({
                    "n": n, "mu": format_partition(mu), "sample": s, "rank": rank,
                    "expected": n * n, "max_isotropy": iso, "member": member,
                    "pass": rank == n * n and iso <= 1e-8 and member,
                })
    return rows


# --- degeneration -------------------------------------------------------------

def degeneration_xeps(lam: Sequence[int], eps) -> np.ndarray:
    """Diagonalizable deformation of ``jordan_matrix(lam)`` in the Jordan basis.

    Each Jordan block of size ``k`` gets diagonal ``0, eps, ..., (k-1) eps``.
    Grouping basis vectors by level (position inside their block) turns this
    into the level-block form: diagonal blocks ``j eps id`` and inclusion maps
    just above the diagonal.
    """
    lam = check_partition(lam)
    eps = exact.frac(eps)
    if eps == 0:
        raise ValueError("eps must be nonzero")
    x = jordan_matrix(lam)
    i = 0
    for k in lam:
        for level in range(k):
            x[i + level, i + level] = level * eps
        i += k
    return x


def truncated_exp(a: np.ndarray, terms: int) -> np.ndarray:
    """``sum_{k < terms} a^k / k!``; exact for nilpotent ``a`` of index ``<= terms``."""
    n = a.shape[0]
    out = exact.qeye(n)
    power = exact.qeye(n)
    fact = 1
    for k in range(1, terms):
        power = power @ a
        fact *= k
        out = out + power * Fraction(1, fact)
    return out


def intertwining_holds(lam: Sequence[int], eps) -> bool:
    """``x(eps) exp(x/eps) = exp(x/eps) (x(eps) - x)`` exactly."""
    lam = check_partition(lam)
    eps = exact.frac(eps)
    x = jordan_matrix(lam)
    xe = degeneration_xeps(lam, eps)
    ex = truncated_exp(x * (1 / eps), sum(lam) + 1)
    return exact.is_zero(xe @ ex - ex @ (xe - x))


def minimal_polynomial_certificate(lam: Sequence[int], eps) -> bool:
    """``prod_{j < lam_1} (x(eps) - j eps) = 0``: squarefree, hence diagonalizable."""
    lam = check_partition(lam)
    eps = exact.frac(eps)
    xe = degeneration_xeps(lam, eps)
    n = xe.shape[0]
    prod = exact.qeye(n)
    for j in range(lam[0] if lam else 0):
        prod = prod @ (xe - exact.qeye(n) * (j * eps))
    return exact.is_zero(prod)


def distance_to_span(basis: Sequence[np.ndarray], y: np.ndarray) -> float:
    yv = exact.to_float(y).ravel()
    if not basis:
        return float(np.linalg.norm(yv))
    a = np.array([exact.to_float(b).ravel() for b in basis]).T
    coef, *_ = np.linalg.lstsq(a, yv, rcond=None)
    return float(np.linalg.norm(a @ coef - yv))


def degeneration_distances(lam: Sequence[int], y: np.ndarray, eps_values: Iterable) -> list[tuple[Fraction, float]]:
    """Distance from ``y`` to ``[g_{x(eps)}, g_{x(eps)}]`` for shrinking ``eps``.

    For ``y`` in the commutator space of ``jordan_matrix(lam)`` the distances
    tend to zero, which witnesses ``(x, y)`` in the closure of ``Lambda_mu``
    with ``mu`` the conjugate partition.
    """
    out = []
    for eps in eps_values:
        xe = degeneration_xeps(lam, eps)
        out.append((exact.frac(eps), distance_to_span(commutator_space(xe), y)))
    return out
