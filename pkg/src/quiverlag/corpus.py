"""Named quivers, potentials and nested pairs used by tests and the CLI."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path as FilePath

from .quiver import NCPolynomial, Potential, Quiver, frame, frame_vertex, parse_quiver_document


def jordan(letters=("a",)) -> Quiver:
    """One vertex ``0`` with one loop per letter (``S_g`` for g loops)."""
    return Quiver.build(["0"], [(a, "0", "0") for a in letters])


def a2tilde() -> Quiver:
    return Quiver.build(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])


def a2() -> Quiver:
    return Quiver.build(["1", "2"], [("a", "1", "2")])


def edgeless(k: int) -> Quiver:
    return Quiver.build([str(i) for i in range(1, k + 1)])


def commutator_potential(q: Quiver, x: str, y: str, z: str) -> Potential:
    """``[x, y] z = xyz - yxz``."""
    return Potential.from_words(q, [(1, (x, y, z)), (-1, (y, x, z))])


def triangle_potential(q: Quiver) -> Potential:
    return Potential.from_words(q, [(1, ("a", "b", "c"))])


QUIVERS = {
    "s1": lambda: jordan(("a",)),
    "s2": lambda: jordan(("a", "b")),
    "s3": lambda: jordan(("x", "y", "z")),
    "s3abc": lambda: jordan(("a", "b", "c")),
    "a2": a2,
    "a2tilde": a2tilde,
    "s1+": lambda: frame(jordan(("a",))),
    "s3+": lambda: frame(jordan(("x", "y", "z"))),
}


def potential_for(name: str, q: Quiver) -> Potential:
    if name in ("0", "zero"):
        return Potential(q)
    if name == "abc":
        return triangle_potential(q)
    if name == "xyz-commutator":
        return commutator_potential(q, "x", "y", "z")
    if name == "abc-commutator":
        return commutator_potential(q, "a", "b", "c")
    raise KeyError(f"unknown potential {name!r}")


@dataclass(frozen=True)
class RelativeCase:
    name: str
    q: Quiver
    d: Quiver
    w: Potential


def _sub(q: Quiver, vertices, edge_ids) -> Quiver:
    return Quiver(tuple(vertices), tuple(q.edge(e) for e in edge_ids))


def relative_cases() -> dict[str, RelativeCase]:
    at = a2tilde()
    s3 = jordan(("a", "b", "c"))
    s3x = jordan(("x", "y", "z"))
    s3p = frame(s3x)
    return {
        "a2-in-a2tilde": RelativeCase("a2-in-a2tilde", at, _sub(at, ["1", "2"], ["a"]), triangle_potential(at)),
        "s1-in-s3": RelativeCase("s1-in-s3", s3, _sub(s3, ["0"], ["a"]), commutator_potential(s3, "a", "b", "c")),
        "s1x-in-s3": RelativeCase("s1x-in-s3", s3x, _sub(s3x, ["0"], ["x"]), commutator_potential(s3x, "x", "y", "z")),
        "s1+-in-s3+": RelativeCase(
            "s1+-in-s3+", s3p, _sub(s3p, ["0", frame_vertex("0")], ["x", "v0"]),
            commutator_potential(s3p, "x", "y", "z"),
        ),
    }


# truncated relative equations of the two standard cases, as (equation lhs, rhs) pairs of words; rhs None means 0
EXPECTED_TRUNCATIONS = {
    "a2-in-a2tilde": [
        ([(1, ("b", "c"))], "a*"),
        ([(1, ("c", "a"))], None),
        ([(1, ("a", "b"))], None),
    ],
    "s1-in-s3": [
        ([(1, ("b", "c")), (-1, ("c", "b"))], "a*"),
        ([(1, ("c", "a")), (-1, ("a", "c"))], None),
        ([(1, ("a", "b")), (-1, ("b", "a"))], None),
    ],
}


def expected_truncation_polys(name: str, ambient: Quiver) -> list[NCPolynomial]:
    """The printed equations as polynomials ``lhs - rhs``."""
    out = []
    for lhs, rhs in EXPECTED_TRUNCATIONS[name]:
        terms = list(lhs)
        if rhs is not None:
            terms.append((-1, (rhs,)))
        out.append(NCPolynomial.from_words(ambient, terms))
    return out


def corpus_quivers() -> dict[str, Quiver]:
    return {name: make() for name, make in QUIVERS.items()}


def load_quiver(spec: str) -> tuple[Quiver, Potential | None]:
    """A corpus name or a path to a quiver JSON document."""
    if spec in QUIVERS:
        return QUIVERS[spec](), None
    path = FilePath(spec)
    if not path.exists():
        bundled = FilePath(__file__).parent / "quivers" / path.name
        if bundled.exists():
            path = bundled
    return parse_quiver_document(path.read_text(encoding="utf-8"))
