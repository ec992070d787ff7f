"""Quivers, paths and the free path algebra over the rationals.

Composition convention: paths are read left to right.  The product ``p*q``
of two paths is "p then q" and is nonzero only when ``target(p) ==
source(q)``.  With this convention the cyclic derivative of ``abc`` along
``a`` is ``bc`` (a path from target(a) back to source(a)), and the
preprojective element of an arrow ``e: s -> t`` is ``e e* - e* e``, whose
first term is a loop at ``s`` and second a loop at ``t``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

STAR = "*"
PRIME = "'"
LOOP = "@"
RESERVED = (STAR, PRIME, LOOP)


class QuiverError(ValueError):
    """Raised for malformed quivers, paths or quiver documents."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _index: Mapping[str, Edge] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        verts = set(self.vertices)
        index = {}
        for e in self.edges:
            if e.id in index:
                raise QuiverError(f"duplicate edge id {e.id!r}")
            if e.src not in verts or e.tgt not in verts:
                raise QuiverError(f"edge {e.id!r} has an undeclared endpoint")
            index[e.id] = e
        object.__setattr__(self, "_index", MappingProxyType(index))

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[tuple[str, str, str]] = ()) -> "Quiver":
        return cls(tuple(vertices), tuple(Edge(str(i), str(s), str(t)) for i, s, t in edges))

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, eid: str) -> Edge:
        try:
            return self._index[eid]
        except KeyError:
            raise QuiverError(f"unknown edge {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._index

    def source(self, eid: str) -> str:
        return self.edge(eid).src

    def target(self, eid: str) -> str:
        return self.edge(eid).tgt

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def is_subquiver_of(self, other: "Quiver") -> bool:
        if not set(self.vertices) <= set(other.vertices):
            return False
        return all(other.has_edge(e.id) and other.edge(e.id) == e for e in self.edges)

    def with_edges(self, extra: Iterable[Edge]) -> "Quiver":
        return Quiver(self.vertices, self.edges + tuple(extra))

    def path(self, *eids: str) -> "Path":
        if not eids:
            raise QuiverError("use Path.idempotent for length-0 paths")
        for a, b in zip(eids, eids[1:]):
            if self.target(a) != self.source(b):
                raise QuiverError(f"{a!r} and {b!r} are not composable")
        return Path(self.source(eids[0]), self.target(eids[-1]), tuple(eids))

    def to_document(self, potential: "NCPolynomial | None" = None) -> dict:
        doc = {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges],
        }
        if potential is not None:
            doc["potential"] = [
                {"coeff": str(c), "cycle": list(p.arrows)} for p, c in potential.sorted_terms()
            ]
        return doc


@dataclass(frozen=True, order=True)
class Path:
    """A path ``src -> tgt``; ``arrows == ()`` is the idempotent at ``src``."""

    src: str
    tgt: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def idempotent(cls, v: str) -> "Path":
        return cls(v, v, ())

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_cycle(self) -> bool:
        return self.src == self.tgt

    def then(self, other: "Path") -> "Path | None":
        if self.tgt != other.src:
            return None
        return Path(self.src, other.tgt, self.arrows + other.arrows)

    def word(self) -> str:
        return " ".join(self.arrows) if self.arrows else f"e_{self.src}"


def _check_path(quiver: Quiver, p: Path) -> None:
    if not p.arrows:
        if p.src != p.tgt or p.src not in quiver.vertices:
            raise QuiverError(f"invalid idempotent path {p}")
        return
    cur = p.src
    for a in p.arrows:
        e = quiver.edge(a)
        if e.src != cur:
            raise QuiverError(f"path {p.arrows} is not composable at {a!r}")
        cur = e.tgt
    if cur != p.tgt:
        raise QuiverError(f"path {p.arrows} does not end at {p.tgt!r}")


class NCPolynomial:
    """Finite rational combination of paths in a fixed quiver."""

    __slots__ = ("quiver", "_terms")

    def __init__(self, quiver: Quiver, terms: Mapping[Path, object] | None = None, *, check: bool = True):
        self.quiver = quiver
        clean: dict[Path, Fraction] = {}
        for p, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if check:
                _check_path(quiver, p)
            clean[p] = clean.get(p, Fraction(0)) + c
            if clean[p] == 0:
                del clean[p]
        self._terms = clean

    @classmethod
    def zero(cls, quiver: Quiver) -> "NCPolynomial":
        return cls(quiver)

    @classmethod
    def from_arrows(cls, quiver: Quiver, *eids: str, coeff=1) -> "NCPolynomial":
        return cls(quiver, {quiver.path(*eids): coeff})

    @classmethod
    def unit(cls, quiver: Quiver, v: str) -> "NCPolynomial":
        return cls(quiver, {Path.idempotent(v): 1})

    @classmethod
    def from_words(cls, quiver: Quiver, terms: Iterable[tuple[object, Sequence[str]]]) -> "NCPolynomial":
        acc: dict[Path, Fraction] = {}
        for c, word in terms:
            p = quiver.path(*word)
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        return cls(quiver, acc)

    @property
    def terms(self) -> Mapping[Path, Fraction]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Path, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _same(self, other: "NCPolynomial") -> None:
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise QuiverError("polynomials live in different quivers")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        acc = dict(self._terms)
        for p, c in other._terms.items():
            acc[p] = acc.get(p, Fraction(0)) + c
        return NCPolynomial(self.quiver, acc, check=False)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial(self.quiver, {p: -c for p, c in self._terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NCPolynomial":
        c = Fraction(c)
        return NCPolynomial(self.quiver, {p: c * v for p, v in self._terms.items()}, check=False)

    def __mul__(self, other):
        if not isinstance(other, NCPolynomial):
            return self.scale(other)
        self._same(other)
        acc: dict[Path, Fraction] = {}
        for p, a in self._terms.items():
            for q, b in other._terms.items():
                pq = p.then(q)
                if pq is not None:
                    acc[pq] = acc.get(pq, Fraction(0)) + a * b
        return NCPolynomial(self.quiver, acc, check=False)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self._terms == other._terms and (self.quiver is other.quiver or self.quiver == other.quiver)

    __hash__ = None

    def localize(self, left: str | None = None, right: str | None = None) -> "NCPolynomial":
        """``e_left * self * e_right``; ``None`` leaves that side untouched."""
        return NCPolynomial(
            self.quiver,
            {
                p: c
                for p, c in self._terms.items()
                if (left is None or p.src == left) and (right is None or p.tgt == right)
            },
            check=False,
        )

    def endpoints(self) -> set[tuple[str, str]]:
        return {(p.src, p.tgt) for p in self._terms}

    def max_length(self) -> int:
        return max((len(p) for p in self._terms), default=0)

    def __repr__(self) -> str:
        return f"NCPolynomial({self})"

    def __str__(self) -> str:
        return format_polynomial(self)


def format_coeff_term(c: Fraction, word: str, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    body = word if mag == 1 else f"{mag}*{word}" if word else str(mag)
    if first:
        return f"{sign}{body}"
    return f" {sign} {body}"


def format_polynomial(p: NCPolynomial, render=None) -> str:
    if p.is_zero():
        return "0"
    render = render or (lambda path: path.word())
    out = []
    for i, (path, c) in enumerate(p.sorted_terms()):
        out.append(format_coeff_term(c, render(path), i == 0))
    return "".join(out)


class Potential(NCPolynomial):
    """A combination of cycles of length at least one."""

    __slots__ = ()

    def __init__(self, quiver: Quiver, terms: Mapping[Path, object] | None = None, *, check: bool = True):
        super().__init__(quiver, terms, check=check)
        for p in self._terms:
            if not p.is_cycle or len(p) == 0:
                raise QuiverError(f"potential term {p.word()!r} is not a cycle of positive length")

    @classmethod
    def of(cls, poly: NCPolynomial) -> "Potential":
        return cls(poly.quiver, poly.terms, check=False)

    @classmethod
    def from_words(cls, quiver, terms) -> "Potential":
        return cls.of(NCPolynomial.from_words(quiver, terms))


def star(eid: str) -> str:
    return eid + STAR


def double(q: Quiver) -> Quiver:
    """The doubled quiver: every arrow ``e: s -> t`` gains ``e*: t -> s``."""
    for e in q.edges:
        if e.id.endswith(STAR) or any(m in e.id for m in RESERVED):
            raise QuiverError(f"edge id {e.id!r} uses a reserved marker")
    return q.with_edges(Edge(star(e.id), e.tgt, e.src) for e in q.edges)


def frame_vertex(v: str) -> str:
    return f"{v}+"


def frame_edge(v: str) -> str:
    return f"v{v}"


def frame(q: Quiver) -> Quiver:
    """Add a framing vertex ``v+`` and an arrow ``v+ -> v`` for every vertex."""
    verts = q.vertices + tuple(frame_vertex(v) for v in q.vertices)
    extra = tuple(Edge(frame_edge(v), frame_vertex(v), v) for v in q.vertices)
    return Quiver(verts, q.edges + extra)


def multiply(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    return p * q


def cyclic_derivative(w: NCPolynomial, eid: str) -> NCPolynomial:
    """Remove each occurrence of ``eid`` from the cycles of ``w`` and read on.

    For ``c = f1 ... fL`` with ``fi == eid`` the contribution is
    ``f(i+1) ... fL f1 ... f(i-1)``, a path from ``target(eid)`` to
    ``source(eid)``.
    """
    q = w.quiver
    acc: dict[Path, Fraction] = {}
    if not q.has_edge(eid):
        return NCPolynomial.zero(q)
    tgt = q.target(eid)
    for path, c in w.terms.items():
        arrows = path.arrows
        for i, a in enumerate(arrows):
            if a != eid:
                continue
            rest = arrows[i + 1:] + arrows[:i]
            p = Path(tgt, q.source(eid), rest) if rest else Path.idempotent(tgt)
            acc[p] = acc.get(p, Fraction(0)) + c
    return NCPolynomial(q, acc, check=False)


@dataclass(frozen=True, order=True)
class Necklace:
    """Cyclic word up to rotation; ``word == ()`` stands for a vertex."""

    vertex: str
    word: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return " ".join(self.word) if self.word else f"e_{self.vertex}"


def canonical_rotation(word: Sequence[str]) -> tuple[str, ...]:
    word = tuple(word)
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def necklace_of(quiver: Quiver, path: Path) -> Necklace:
    if not path.is_cycle:
        raise QuiverError(f"{path.word()!r} is not a cycle")
    if not path.arrows:
        return Necklace(path.src, ())
    word = canonical_rotation(path.arrows)
    return Necklace(quiver.source(word[0]), word)


def paths_up_to(q: Quiver, length: int, src: str | None = None) -> list[Path]:
    """All paths of length ``<= length`` (idempotents included)."""
    starts = [src] if src is not None else list(q.vertices)
    out = [Path.idempotent(v) for v in starts]
    frontier = list(out)
    for _ in range(length):
        nxt = []
        for p in frontier:
            for e in q.out_edges(p.tgt):
                nxt.append(Path(p.src, e.tgt, p.arrows + (e.id,)))
        out.extend(nxt)
        frontier = nxt
    return out


def cycles_up_to(q: Quiver, length: int) -> list[Path]:
    return [p for p in paths_up_to(q, length) if p.is_cycle]


def necklace_basis(q: Quiver, max_length: int) -> list[Necklace]:
    if max_length < 0:
        raise QuiverError("max_length must be nonnegative")
    seen = {necklace_of(q, c) for c in cycles_up_to(q, max_length)}
    return sorted(seen, key=lambda n: (len(n), n))


def commutator_sum(w: NCPolynomial) -> NCPolynomial:
    """``sum_e (e * d_e W - d_e W * e)`` over the arrows of the ambient quiver."""
    q = w.quiver
    total = NCPolynomial.zero(q)
    for e in q.edges:
        de = cyclic_derivative(w, e.id)
        if de.is_zero():
            continue
        ep = NCPolynomial.from_arrows(q, e.id)
        total = total + ep * de - de * ep
    return total


def sum_commutator_identity_check(w: NCPolynomial) -> bool:
    return commutator_sum(w).is_zero()


def random_potential(q: Quiver, max_length: int, rng, n_terms: int = 4, max_coeff: int = 5) -> Potential:
    """Random rational combination of cycles of length ``1..max_length``."""
    cycles = [c for c in cycles_up_to(q, max_length) if len(c) > 0]
    if not cycles:
        return Potential(q)
    acc: dict[Path, Fraction] = {}
    for _ in range(n_terms):
        c = cycles[int(rng.integers(len(cycles)))]
        num = int(rng.integers(-max_coeff, max_coeff + 1)) or 1
        den = int(rng.integers(1, max_coeff + 1))
        acc[c] = acc.get(c, Fraction(0)) + Fraction(num, den)
    return Potential(q, acc, check=False)


def parse_quiver_document(doc: Mapping | str) -> tuple[Quiver, Potential | None]:
    """Parse ``{"vertices", "edges", optional "potential"}`` into a quiver."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        vertices = [str(v) for v in doc["vertices"]]
        edges = [(str(e["id"]), str(e["src"]), str(e["tgt"])) for e in doc.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise QuiverError(f"malformed quiver document: {exc}") from None
    q = Quiver.build(vertices, edges)
    pot = None
    if doc.get("potential") is not None:
        terms = []
        for t in doc["potential"]:
            try:
                terms.append((Fraction(str(t["coeff"])), [str(a) for a in t["cycle"]]))
            except (KeyError, ValueError, ZeroDivisionError) as exc:
                raise QuiverError(f"malformed potential term {t!r}: {exc}") from None
        if any(not word for _, word in terms):
            raise QuiverError("potential cycles must have positive length")
        pot = Potential.from_words(q, terms)
    return q, pot


__all__ = [
    "Edge", "Quiver", "Path", "NCPolynomial", "Potential", "Necklace", "QuiverError",
    "STAR", "PRIME", "LOOP", "star", "double", "frame", "frame_vertex", "frame_edge",
    "multiply", "cyclic_derivative", "necklace_basis", "necklace_of", "canonical_rotation",
    "paths_up_to", "cycles_up_to", "commutator_sum", "sum_commutator_identity_check",
    "random_potential", "parse_quiver_document", "format_polynomial",
]
