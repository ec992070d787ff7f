"""Semi-free graded quiver algebras with a differential.

A :class:`DgPresentation` is a quiver of graded generators over a fixed set
of vertices together with the value of the differential on each generator.
The differential is extended to products by the Koszul rule

    d(pq) = d(p) q + (-1)^{deg p} p d(q),

which is the sign convention under which every constructor below squares
to zero.

Generator names: an arrow ``e`` of ``Q`` keeps its name, its dual is
``e*``, the degree -1 partner of ``e`` is ``e'``, the degree -1 loop at a
vertex ``v`` is ``x@v`` and the degree -2 loop is ``x'@v``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .quiver import (
    LOOP, PRIME, RESERVED, Edge, NCPolynomial, Path, Quiver, QuiverError,
    cyclic_derivative, double, format_polynomial, star,
)


class PresentationError(ValueError):
    pass


def prime(eid: str) -> str:
    return eid + PRIME


def vertex_loop(v: str) -> str:
    return f"x{LOOP}{v}"


def vertex_loop2(v: str) -> str:
    return f"x{PRIME}{LOOP}{v}"


@dataclass(frozen=True)
class GradedGenerator:
    id: str
    src: str
    tgt: str
    degree: int


@dataclass(frozen=True)
class DSquaredReport:
    passed: bool
    failures: Mapping[str, NCPolynomial] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


class DgPresentation:
    """Graded generators over vertex idempotents plus a differential."""

    def __init__(
        self,
        vertices: Iterable[str],
        generators: Iterable[GradedGenerator],
        differential: Mapping[str, Iterable[tuple[object, tuple[str, ...] | str]]] | None = None,
        name: str = "",
    ):
        self.name = name
        self.generators = tuple(generators)
        self.quiver = Quiver(tuple(vertices), tuple(Edge(g.id, g.src, g.tgt) for g in self.generators))
        self._deg = {}
        for g in self.generators:
            if g.degree > 0:
                raise PresentationError(f"generator {g.id!r} has positive degree")
            self._deg[g.id] = g.degree
        self._d: dict[str, NCPolynomial] = {}
        for g in self.generators:
            spec = (differential or {}).get(g.id)
            poly = self._coerce(g, spec)
            if g.degree == 0 and not poly.is_zero():
                raise PresentationError(f"degree-0 generator {g.id!r} must be closed")
            if not poly.is_zero():
                deg = self.homogeneous_degree(poly)
                if deg != g.degree + 1:
                    raise PresentationError(
                        f"d({g.id}) has degree {deg}, expected {g.degree + 1}"
                    )
                if poly.endpoints() != {(g.src, g.tgt)}:
                    raise PresentationError(f"d({g.id}) does not run {g.src} -> {g.tgt}")
            self._d[g.id] = poly

    def _coerce(self, g: GradedGenerator, spec) -> NCPolynomial:
        if spec is None:
            return NCPolynomial.zero(self.quiver)
        if isinstance(spec, NCPolynomial):
            return NCPolynomial(self.quiver, spec.terms)
        acc: dict[Path, Fraction] = {}
        for c, word in spec:
            p = Path.idempotent(word) if isinstance(word, str) else self.quiver.path(*word)
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        return NCPolynomial(self.quiver, acc)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def generator(self, gid: str) -> GradedGenerator:
        for g in self.generators:
            if g.id == gid:
                return g
        raise KeyError(gid)

    def degree(self, gid: str) -> int:
        return self._deg[gid]

    def generators_of_degree(self, deg: int) -> list[GradedGenerator]:
        return [g for g in self.generators if g.degree == deg]

    def path_degree(self, path: Path) -> int:
        return sum(self._deg[a] for a in path.arrows)

    def homogeneous_degree(self, poly: NCPolynomial) -> int | None:
        """Common degree of all terms; ``None`` for the zero polynomial."""
        degs = {self.path_degree(p) for p in poly.terms}
        if len(degs) > 1:
            raise PresentationError(f"{poly} is not homogeneous")
        return degs.pop() if degs else None

    def d(self, gid: str) -> NCPolynomial:
        return self._d[gid]

    @property
    def differential(self) -> Mapping[str, NCPolynomial]:
        return dict(self._d)

    def gen(self, *word: str) -> NCPolynomial:
        return NCPolynomial.from_arrows(self.quiver, *word)

    def unit(self, v: str) -> NCPolynomial:
        return NCPolynomial.unit(self.quiver, v)

    def lift(self, poly: NCPolynomial) -> NCPolynomial:
        """Re-home a polynomial written in a subquiver of the generator quiver."""
        return NCPolynomial(self.quiver, poly.terms)

    def __repr__(self) -> str:
        return f"DgPresentation({self.name or '?'}, {len(self.generators)} generators)"


# --- constructors -----------------------------------------------------------

def _check_names(q: Quiver) -> None:
    for e in q.edges:
        if any(m in e.id for m in RESERVED):
            raise QuiverError(f"edge id {e.id!r} uses a reserved marker")
    for v in q.vertices:
        if any(m in v for m in (PRIME, LOOP)):
            raise QuiverError(f"vertex id {v!r} uses a reserved marker")


def _bracket(e: str, other: str, src: str, tgt: str, v: str) -> list[tuple[int, tuple[str, ...]]]:
    """Terms of ``e_v (e other - other e) e_v`` for an arrow ``e: src -> tgt``."""
    terms = []
    if src == v:
        terms.append((1, (e, other)))
    if tgt == v:
        terms.append((-1, (other, e)))
    return terms


def _poly_terms(poly: NCPolynomial, sign=1) -> list[tuple[Fraction, tuple[str, ...] | str]]:
    return [(sign * c, p.arrows if p.arrows else p.src) for p, c in poly.terms.items()]


def ginzburg2(q: Quiver) -> DgPresentation:
    """Degree-0 arrows of the double plus a degree -1 loop per vertex."""
    _check_names(q)
    qbar = double(q)
    gens = [GradedGenerator(e.id, e.src, e.tgt, 0) for e in qbar.edges]
    diff = {}
    for v in q.vertices:
        gens.append(GradedGenerator(vertex_loop(v), v, v, -1))
        terms = []
        for e in q.edges:
            terms += _bracket(e.id, star(e.id), e.src, e.tgt, v)
        diff[vertex_loop(v)] = terms
    return DgPresentation(q.vertices, gens, diff, name=f"G2({_name(q)})")


def ginzburg3(q: Quiver, w: NCPolynomial | None = None) -> DgPresentation:
    """Arrows in degree 0, reversed partners ``e'`` in -1, loops ``x'@v`` in -2."""
    _check_names(q)
    gens = [GradedGenerator(e.id, e.src, e.tgt, 0) for e in q.edges]
    gens += [GradedGenerator(prime(e.id), e.tgt, e.src, -1) for e in q.edges]
    gens += [GradedGenerator(vertex_loop2(v), v, v, -2) for v in q.vertices]
    diff = {}
    for e in q.edges:
        if w is not None:
            diff[prime(e.id)] = _poly_terms(cyclic_derivative(_rehome(w, q), e.id))
    for v in q.vertices:
        terms = []
        for e in q.edges:
            terms += _bracket(e.id, prime(e.id), e.src, e.tgt, v)
        diff[vertex_loop2(v)] = terms
    return DgPresentation(q.vertices, gens, diff, name=f"G3({_name(q)})")


def _check_sub(d: Quiver, q: Quiver) -> None:
    if not d.is_subquiver_of(q):
        raise PresentationError("D is not a subquiver of Q")


def relative_ginzburg2(d: Quiver, q: Quiver) -> DgPresentation:
    """Push-out of ``G2(kD) <- kD -> kQ``."""
    _check_names(q)
    _check_sub(d, q)
    gens = [GradedGenerator(e.id, e.src, e.tgt, 0) for e in q.edges]
    gens += [GradedGenerator(star(e.id), e.tgt, e.src, 0) for e in d.edges]
    diff = {}
    for v in d.vertices:
        gens.append(GradedGenerator(vertex_loop(v), v, v, -1))
        terms = []
        for e in d.edges:
            terms += _bracket(e.id, star(e.id), e.src, e.tgt, v)
        diff[vertex_loop(v)] = terms
    return DgPresentation(q.vertices, gens, diff, name=f"G2({_name(d)}<={_name(q)})")


def relative_ginzburg3(q: Quiver, d: Quiver, w: NCPolynomial | None = None) -> DgPresentation:
    """Relative deformed completion for ``D <= Q`` with potential ``w``.

    Degree 0: E(Q) and E(D*).  Degree -1: ``e'`` for e in E(Q) and a loop
    ``x@v`` for v in V(D).  Degree -2: a loop ``x'@v`` for every v in V(Q).
    """
    _check_names(q)
    _check_sub(d, q)
    in_d_vertices = set(d.vertices)
    in_d_edges = {e.id for e in d.edges}
    gens = [GradedGenerator(e.id, e.src, e.tgt, 0) for e in q.edges]
    gens += [GradedGenerator(star(e.id), e.tgt, e.src, 0) for e in d.edges]
    gens += [GradedGenerator(prime(e.id), e.tgt, e.src, -1) for e in q.edges]
    gens += [GradedGenerator(vertex_loop(v), v, v, -1) for v in d.vertices]
    gens += [GradedGenerator(vertex_loop2(v), v, v, -2) for v in q.vertices]
    wq = _rehome(w, q) if w is not None else None
    diff: dict[str, list] = {}
    for e in q.edges:
        terms = []
        if e.id in in_d_edges:
            terms.append((1, (star(e.id),)))
        if wq is not None:
            terms += _poly_terms(cyclic_derivative(wq, e.id), sign=-1)
        diff[prime(e.id)] = terms
    for v in d.vertices:
        terms = []
        for e in d.edges:
            terms += _bracket(e.id, star(e.id), e.src, e.tgt, v)
        diff[vertex_loop(v)] = terms
    for v in q.vertices:
        terms = [(1, (vertex_loop(v),))] if v in in_d_vertices else []
        for e in q.edges:
            terms += [(-c, word) for c, word in _bracket(e.id, prime(e.id), e.src, e.tgt, v)]
        diff[vertex_loop2(v)] = terms
    return DgPresentation(q.vertices, gens, diff, name=f"G3({_name(q)}|{_name(d)})")


def empty_subquiver(q: Quiver, keep_vertices: bool = True) -> Quiver:
    """The edgeless subquiver used for the ``D = empty`` case.

    ``keep_vertices=True`` keeps every vertex (the contractible pairs
    ``(x@v, x'@v)`` then appear); ``False`` takes no vertices at all.
    """
    return Quiver(q.vertices if keep_vertices else ())


def _rehome(w: NCPolynomial, q: Quiver) -> NCPolynomial:
    if w.quiver == q:
        return w
    return NCPolynomial(q, w.terms)


def _name(q: Quiver) -> str:
    return ",".join(q.edge_ids) or "{" + ",".join(q.vertices) + "}"


# --- differential -----------------------------------------------------------

def leibniz_extend(pres: DgPresentation, p: NCPolynomial) -> NCPolynomial:
    """Apply the differential to a homogeneous polynomial in the generators."""
    p = pres.lift(p) if p.quiver is not pres.quiver else p
    pres.homogeneous_degree(p)
    acc: dict[Path, Fraction] = {}
    for path, c in p.terms.items():
        arrows = path.arrows
        sign = 1
        for i, a in enumerate(arrows):
            da = pres.d(a)
            if not da.is_zero():
                for mid, cm in da.terms.items():
                    word = arrows[:i] + mid.arrows + arrows[i + 1:]
                    if word:
                        key = Path(path.src, path.tgt, word)
                    else:
                        key = Path.idempotent(path.src)
                    acc[key] = acc.get(key, Fraction(0)) + sign * c * cm
            if pres.degree(a) % 2:
                sign = -sign
    return NCPolynomial(pres.quiver, acc, check=False)


def check_d_squared(pres: DgPresentation) -> DSquaredReport:
    failures = {}
    for g in pres.generators:
        dd = leibniz_extend(pres, pres.d(g.id))
        if not dd.is_zero():
            failures[g.id] = dd
    return DSquaredReport(not failures, failures)


def h0_relations(pres: DgPresentation) -> list[NCPolynomial]:
    """Images of the degree -1 generators: the relations of H^0."""
    if any(g.degree > 0 for g in pres.generators):
        raise PresentationError("presentation has positive-degree generators")
    return [pres.d(g.id) for g in pres.generators_of_degree(-1)]


def preprojective_element(q: Quiver, v: str, ambient: Quiver) -> NCPolynomial:
    """``sum_e e_v (e e* - e* e) e_v`` as an element of ``ambient``."""
    terms = []
    for e in q.edges:
        terms += _bracket(e.id, star(e.id), e.src, e.tgt, v)
    return NCPolynomial.from_words(ambient, terms)


def redundant_relations(pres: DgPresentation) -> set[str]:
    """Degree -1 generators whose relation follows from the others in H^0.

    If some degree -2 generator ``h`` has ``d(h) = c g + (terms without g)``
    with every other term linear in the remaining degree -1 generators, then
    ``d(d(h)) = 0`` writes ``c d(g)`` inside the ideal of the other
    relations.  Typical case: the vertex loops ``x@v`` of the relative
    completions.
    """
    out: set[str] = set()
    used: set[str] = set()
    for h in pres.generators_of_degree(-2):
        dh = pres.d(h.id)
        for path in dh.terms:
            if len(path.arrows) != 1:
                continue
            g = path.arrows[0]
            if g in out or g in used or pres.degree(g) != -1:
                continue
            support = {a for q in dh.terms if q != path for a in q.arrows if pres.degree(a) == -1}
            if g in support or support & out:
                continue
            out.add(g)
            used |= support
            break
    return out


# --- text and document forms ------------------------------------------------

def format_table(pres: DgPresentation) -> str:
    rows = [("generator", "degree", "src", "tgt", "differential")]
    for g in pres.generators:
        rows.append((g.id, str(g.degree), g.src, g.tgt, format_polynomial(pres.d(g.id))))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [f"# {pres.name}"] if pres.name else []
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(4)) + "  " + r[4])
    return "\n".join(lines)


def to_document(pres: DgPresentation) -> dict:
    diff = {}
    for g in pres.generators:
        terms = []
        for p, c in pres.d(g.id).sorted_terms():
            item = {"coeff": str(c), "word": list(p.arrows)}
            if not p.arrows:
                item["vertex"] = p.src
            terms.append(item)
        diff[g.id] = terms
    return {
        "name": pres.name,
        "vertices": list(pres.vertices),
        "generators": [
            {"id": g.id, "src": g.src, "tgt": g.tgt, "degree": g.degree} for g in pres.generators
        ],
        "differential": diff,
    }


def from_document(doc: Mapping | str) -> DgPresentation:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        gens = [
            GradedGenerator(str(g["id"]), str(g["src"]), str(g["tgt"]), int(g["degree"]))
            for g in doc["generators"]
        ]
        diff = {}
        for gid, terms in doc.get("differential", {}).items():
            diff[gid] = [
                (Fraction(t["coeff"]), tuple(t["word"]) if t["word"] else t["vertex"])
                for t in terms
            ]
        return DgPresentation(doc["vertices"], gens, diff, name=doc.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (PresentationError, QuiverError)):
            raise
        raise PresentationError(f"malformed presentation document: {exc}") from None


def presentations_equal(a: DgPresentation, b: DgPresentation) -> bool:
    if set(a.generators) != set(b.generators) or set(a.vertices) != set(b.vertices):
        return False
    return all(a.d(g.id).terms == b.d(g.id).terms for g in a.generators)
