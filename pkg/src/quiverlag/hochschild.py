"""Length-truncated small complex computing Hochschild homology.

For a semi-free presentation ``B`` with generator bimodule ``M`` the complex
is the cone of

    beta: M (x)_{B^e} B --> B_cyc,   g (x) p  |->  g p - (-1)^{|g||p|} p g,

where ``B_cyc`` is spanned by the cycles of ``B`` and ``M (x)_{B^e} B`` by
pairs ``g (x) p`` with ``p`` a path closing ``g`` into a cycle.  A pair sits
in total degree ``|g| + |p| - 1``.  The internal differential of the pair
term is the one induced on one-forms, ``d(Dg) = D(dg)``, with ``D`` the
universal derivation; a one-form ``A Dh C (x) p`` is rotated to
``Dh (x) C p A`` with the Koszul sign of moving ``A`` to the back.

Everything is truncated at cycle length ``L`` (a pair ``g (x) p`` has
length ``1 + |p|``).  The differential itself is computed without
truncation, so ``D^2`` can be checked on every basis element.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import exact
from .dg import DgPresentation, GradedGenerator, ginzburg2, leibniz_extend, vertex_loop
from .quiver import NCPolynomial, Path, Quiver, cycles_up_to, necklace_basis, paths_up_to, star
from .repvar import chern0  # noqa: F401  (re-exported: trace pairing with representations)

Vector = dict  # basis key -> Fraction


def path_algebra(q: Quiver) -> DgPresentation:
    """``kQ`` as a presentation concentrated in degree 0."""
    gens = [GradedGenerator(e.id, e.src, e.tgt, 0) for e in q.edges]
    return DgPresentation(q.vertices, gens, {}, name=f"k{','.join(q.edge_ids) or 'Q'}")


def _cat(src: str, tgt: str, *parts: tuple[str, ...]) -> Path:
    word = tuple(a for part in parts for a in part)
    return Path(src, tgt, word) if word else Path.idempotent(src)


def _add(acc: Vector, key, c) -> None:
    v = acc.get(key, Fraction(0)) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class SmallHHComplex:
    """Basis, degrees and differential of the truncated small complex."""

    def __init__(self, pres: DgPresentation, max_length: int):
        if max_length < 1:
            raise ValueError("max_length must be at least 1")
        self.pres = pres
        self.max_length = max_length
        q = pres.quiver
        loops = [("L", c) for c in cycles_up_to(q, max_length)]
        pairs = []
        for g in pres.generators:
            for p in paths_up_to(q, max_length - 1, src=g.tgt):
                if p.tgt == g.src:
                    pairs.append(("R", g.id, p))
        self.basis: list[tuple] = loops + pairs
        self.index = {k: i for i, k in enumerate(self.basis)}
        self._cache: dict[tuple, Vector] = {}

    # -- grading ------------------------------------------------------------
    def length(self, key) -> int:
        return len(key[1]) if key[0] == "L" else 1 + len(key[2])

    def degree(self, key) -> int:
        if key[0] == "L":
            return self.pres.path_degree(key[1])
        return self.pres.degree(key[1]) + self.pres.path_degree(key[2]) - 1

    def in_window(self, key) -> bool:
        return self.length(key) <= self.max_length

    def of_degree(self, k: int) -> list[tuple]:
        return [b for b in self.basis if self.degree(b) == k]

    # -- differential -------------------------------------------------------
    def beta(self, gid: str, p: Path) -> Vector:
        pres = self.pres
        g = pres.generator(gid)
        out: Vector = {}
        _add(out, ("L", _cat(g.src, g.src, (gid,), p.arrows)), Fraction(1))
        sign = -1 if (g.degree * pres.path_degree(p)) % 2 else 1
        _add(out, ("L", _cat(g.tgt, g.tgt, p.arrows, (gid,))), Fraction(-sign))
        return out

    def delta(self, gid: str, p: Path) -> Vector:
        """Internal differential of ``g (x) p``."""
        pres = self.pres
        q = pres.quiver
        deg = pres.degree
        out: Vector = {}
        p_deg = pres.path_degree(p)
        for mid, c in pres.d(gid).terms.items():
            arrows = mid.arrows
            for i, h in enumerate(arrows):
                before, after = arrows[:i], arrows[i + 1:]
                a_deg = sum(deg(a) for a in before)
                rest = deg(h) + sum(deg(a) for a in after) + p_deg
                sign = -1 if (a_deg * rest) % 2 else 1
                closing = _cat(q.target(h), q.source(h), after, p.arrows, before)
                _add(out, ("R", h, closing), sign * c)
        if p.arrows:
            dp = leibniz_extend(pres, NCPolynomial(q, {p: Fraction(1)}, check=False))
            s = -1 if deg(gid) % 2 else 1
            for path, c in dp.terms.items():
                _add(out, ("R", gid, path), s * c)
        return out

    def differential(self, key) -> Vector:
        """Total differential: ``d_B`` on cycles, ``beta - delta`` on pairs."""
        if key in self._cache:
            return self._cache[key]
        out: Vector = {}
        if key[0] == "L":
            path = key[1]
            if path.arrows:
                dp = leibniz_extend(self.pres, NCPolynomial(self.pres.quiver, {path: Fraction(1)}, check=False))
                for p, c in dp.terms.items():
                    _add(out, ("L", p), c)
        else:
            for k, c in self.beta(key[1], key[2]).items():
                _add(out, k, c)
            for k, c in self.delta(key[1], key[2]).items():
                _add(out, k, -c)
        self._cache[key] = out
        return out

    def apply(self, vec: Mapping) -> Vector:
        out: Vector = {}
        for k, c in vec.items():
            for k2, c2 in self.differential(k).items():
                _add(out, k2, c * c2)
        return out

    def d_squared_failures(self) -> list[tuple]:
        return [b for b in self.basis if self.apply(self.differential(b))]

    def leaks(self, vec: Mapping) -> list[tuple]:
        return [k for k in vec if not self.in_window(k)]

    # -- linear algebra -----------------------------------------------------
    def rank_of_images(self, sources: Iterable[tuple]) -> int:
        cols = {k: i for i, k in enumerate(self.basis)}
        basis = exact.RowBasis(len(self.basis))
        for b in sources:
            img = self.differential(b)
            if any(k not in cols for k in img):
                raise ValueError(f"image of {format_key(b)} leaves the window")
            row = [Fraction(0)] * len(self.basis)
            for k, c in img.items():
                row[cols[k]] = c
            basis.add(row)
        return basis.dim


def small_hh_complex(pres: DgPresentation, max_length: int) -> SmallHHComplex:
    return SmallHHComplex(pres, max_length)


def hh0_dimension(q: Quiver, max_length: int) -> int:
    """``dim HH_0(kQ)`` in cycle lengths ``<= max_length``."""
    cx = SmallHHComplex(path_algebra(q), max_length)
    return len(cx.of_degree(0)) - cx.rank_of_images(cx.of_degree(-1))


def necklace_count(q: Quiver, max_length: int) -> int:
    return len(necklace_basis(q, max_length))


def cy_class(q: Quiver, drop: str | None = None) -> Vector:
    """``sum_e e (x) e*  -  sum_v x@v`` in the complex of ``ginzburg2(q)``.

    ``drop="pairs"`` or ``drop="loops"`` removes one half (negative controls).
    """
    if drop not in (None, "pairs", "loops"):
        raise ValueError(f"unknown drop mode {drop!r}")
    out: Vector = {}
    if drop != "pairs":
        for e in q.edges:
            _add(out, ("R", e.id, Path(e.tgt, e.src, (star(e.id),))), Fraction(1))
    if drop != "loops":
        for v in q.vertices:
            _add(out, ("L", Path(v, v, (vertex_loop(v),))), Fraction(-1))
    return out


@dataclass(frozen=True)
class CocycleReport:
    passed: bool
    image: Mapping = field(default_factory=dict)
    in_window: bool = True

    def __bool__(self) -> bool:
        return self.passed


def verify_cy_cocycle(q: Quiver, max_length: int = 3, drop: str | None = None) -> CocycleReport:
    """Is the degree -1 class a cycle of the small complex of ``ginzburg2(q)``?"""
    cx = SmallHHComplex(ginzburg2(q), max_length)
    cls = cy_class(q, drop)
    inside = all(cx.in_window(k) for k in cls)
    image = cx.apply(cls)
    return CocycleReport(inside and not image, image, inside)


def format_key(key) -> str:
    if key[0] == "L":
        return key[1].word()
    return f"{key[1]} (x) {key[2].word()}"


def format_vector(vec: Mapping) -> str:
    from .quiver import format_coeff_term
    if not vec:
        return "0"
    items = sorted(vec.items(), key=lambda kv: (kv[0][0], format_key(kv[0])))
    return "".join(format_coeff_term(c, format_key(k), i == 0) for i, (k, c) in enumerate(items))


def hh_report_rows(quivers: Mapping[str, Quiver], lengths: Iterable[int], cocycle_length: int = 3) -> list[dict]:
    rows = []
    for name, q in quivers.items():
        verdict = verify_cy_cocycle(q, cocycle_length).passed
        for L in lengths:
            hh0 = hh0_dimension(q, L)
            neck = necklace_count(q, L)
            rows.append({
                "quiver": name, "L": L, "hh0": hh0, "necklaces": neck,
                "match": hh0 == neck, "cy_cocycle": verdict,
            })
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
