"""Command line driver: ``quiverlag <group> <command> [options]``.

Every command prints a short header (command line and seed) followed by a
CSV or aligned-text table.  Exit status is 0 when every check passes, 1 when
some check fails and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from json import JSONDecodeError
from pathlib import Path as FilePath

import numpy as np

from . import commvar, corpus, dg, exact, hilbert, hochschild, repvar
from .quiver import Quiver, QuiverError, double, random_potential, sum_commutator_identity_check


class InputError(ValueError):
    pass


@dataclass
class Report:
    title: str
    seed: int
    rows: list[dict] = field(default_factory=list)
    passed: bool = True
    text: str | None = None  # free-form body replacing the table

    def render(self, fmt: str, argv: list[str]) -> str:
        head = [f"# {self.title}", f"# command: {' '.join(argv)}", f"# seed: {self.seed}"]
        if self.text is not None:
            body = self.text.rstrip("\n") + "\n"
        elif fmt == "csv":
            body = _csv(self.rows)
        else:
            body = _aligned(self.rows)
        tail = f"# result: {'PASS' if self.passed else 'FAIL'}\n"
        return "\n".join(head) + "\n" + body + tail


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(dict.fromkeys(k for r in rows for k in r))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k, "")) for k in keys})
    return buf.getvalue()


def _aligned(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(dict.fromkeys(k for r in rows for k in r))
    table = [keys] + [[_cell(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(keys))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in table)


# --- input helpers ------------------------------------------------------------

def _quiver(spec: str) -> tuple[Quiver, object]:
    try:
        return corpus.load_quiver(spec)
    except FileNotFoundError:
        raise InputError(f"no corpus quiver or file named {spec!r}") from None
    except (JSONDecodeError, QuiverError) as exc:
        raise InputError(f"malformed quiver document {spec!r}: {exc}") from None


def _potential(q: Quiver, name: str | None, from_file):
    if name is None or name == "file":
        return from_file if from_file is not None else corpus.potential_for("0", q)
    try:
        return corpus.potential_for(name, q)
    except KeyError as exc:
        raise InputError(str(exc)) from None
    except QuiverError as exc:
        raise InputError(f"potential {name!r} does not fit this quiver: {exc}") from None


def _relative_case(name: str) -> corpus.RelativeCase:
    cases = corpus.relative_cases()
    if name not in cases:
        raise InputError(f"unknown relative case {name!r}; choose from {', '.join(cases)}")
    return cases[name]


def _partition(text: str) -> tuple[int, ...]:
    try:
        return commvar.parse_partition(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _nested(text: str) -> tuple[tuple[int, ...], ...]:
    """``"2,1;1"`` means ((2,1),(1))."""
    try:
        return tuple(commvar.parse_partition(part) for part in text.split(";"))
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- dg -------------------------------------------------------------------------

def _build(args) -> dg.DgPresentation:
    if args.rel:
        case = _relative_case(args.rel)
        w = case.w if args.potential is None else _potential(case.q, args.potential, None)
        return dg.relative_ginzburg3(case.q, case.d, w) if args.kind != "rel2" else dg.relative_ginzburg2(case.d, case.q)
    q, from_file = _quiver(args.quiver)
    w = _potential(q, args.potential, from_file)
    if args.kind == "g2":
        return dg.ginzburg2(q)
    if args.kind == "g3":
        return dg.ginzburg3(q, w)
    sub = dg.empty_subquiver(q, keep_vertices=not args.drop_vertices)
    if args.kind == "rel2":
        return dg.relative_ginzburg2(sub, q)
    return dg.relative_ginzburg3(q, sub, w)


def cmd_dg_build(args) -> Report:
    pres = _build(args)
    ok = dg.check_d_squared(pres).passed
    text = json.dumps(dg.to_document(pres), indent=2) if args.document else dg.format_table(pres)
    return Report(f"dg build {pres.name}", args.seed, passed=ok, text=text)


def check_corpus() -> list[dict]:
    """d^2 = 0 for every constructor over the named corpus."""
    rows = []
    quivers = corpus.corpus_quivers()
    pots = {"a2tilde": ["0", "abc"], "s3": ["0", "xyz-commutator"], "s3+": ["0", "xyz-commutator"],
            "s3abc": ["0", "abc-commutator"]}

    def add(case, kind, pres):
        rows.append({"case": case, "kind": kind, "generators": len(pres.generators),
                     "pass": dg.check_d_squared(pres).passed})

    for name, q in quivers.items():
        add(name, "ginzburg2", dg.ginzburg2(q))
        for p in pots.get(name, ["0"]):
            add(f"{name} W={p}", "ginzburg3", dg.ginzburg3(q, corpus.potential_for(p, q)))
        for keep in (True, False):
            tag = "keep" if keep else "drop"
            sub = dg.empty_subquiver(q, keep_vertices=keep)
            add(f"{name} D=empty({tag})", "relative_ginzburg2", dg.relative_ginzburg2(sub, q))
            for p in pots.get(name, ["0"]):
                add(f"{name} D=empty({tag}) W={p}", "relative_ginzburg3",
                    dg.relative_ginzburg3(q, sub, corpus.potential_for(p, q)))
    for name, case in corpus.relative_cases().items():
        add(name, "relative_ginzburg2", dg.relative_ginzburg2(case.d, case.q))
        add(f"{name} W=0", "relative_ginzburg3", dg.relative_ginzburg3(case.q, case.d, None))
        add(f"{name} W=std", "relative_ginzburg3", dg.relative_ginzburg3(case.q, case.d, case.w))
    return rows


def cmd_dg_check(args) -> Report:
    if args.corpus:
        rows = check_corpus()
    else:
        pres = _build(args)
        report = dg.check_d_squared(pres)
        rows = [{"case": pres.name, "kind": args.kind, "generators": len(pres.generators), "pass": report.passed}]
        rows += [{"case": pres.name, "kind": f"d^2({g}) = {v}", "generators": "", "pass": False}
                 for g, v in report.failures.items()]
    return Report("dg check", args.seed, rows, all(r["pass"] for r in rows))


def h0_rows(quivers: dict[str, Quiver]) -> list[dict]:
    rows = []
    for name, q in quivers.items():
        pres = dg.ginzburg2(q)
        rels = dg.h0_relations(pres)
        loops = {g.id for g in pres.generators_of_degree(-1)}
        same = loops == {dg.vertex_loop(v) for v in q.vertices} and all(
            pres.d(dg.vertex_loop(v)) == pres.lift(dg.preprojective_element(q, v, double(q)))
            for v in q.vertices
        )
        rows.append({"quiver": name, "vertices": len(q.vertices), "relations": len(rels), "pass": same})
    return rows


def cmd_dg_h0(args) -> Report:
    if args.corpus:
        quivers = corpus.corpus_quivers()
    else:
        quivers = {args.quiver: _quiver(args.quiver)[0]}
    rows = h0_rows(quivers)
    return Report("dg h0", args.seed, rows, all(r["pass"] for r in rows))


def trunc_rows(names: list[str]) -> tuple[list[dict], str]:
    rows, lines = [], []
    for name in names:
        case = _relative_case(name)
        pres = dg.relative_ginzburg3(case.q, case.d, case.w)
        system = repvar.truncation_equations(pres)
        lines.append(f"# {name}")
        lines.append(repvar.format_system(system))
        match = ""
        if name in corpus.EXPECTED_TRUNCATIONS:
            got = repvar.normalized_equation_set(e.poly for e in system.essential())
            want = repvar.normalized_equation_set(corpus.expected_truncation_polys(name, pres.quiver))
            match = got == want
        for eq in system.equations:
            rows.append({"case": name, "generator": eq.name, "equation": repvar.format_equation(eq),
                         "redundant": eq.redundant, "matches_expected": match})
    return rows, "\n".join(lines)


def cmd_dg_trunc(args) -> Report:
    names = args.rel or list(corpus.EXPECTED_TRUNCATIONS)
    rows, text = trunc_rows(names)
    ok = all(r["matches_expected"] is not False for r in rows)
    return Report("dg trunc", args.seed, rows, ok, text=text if args.print else None)


def cyclic_rows(count: int, max_length: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for name, q in corpus.corpus_quivers().items():
        ok = 0
        for _ in range(count):
            w = random_potential(q, max_length, rng)
            ok += sum_commutator_identity_check(w)
        rows.append({"quiver": name, "potentials": count, "identity_holds": ok, "pass": ok == count})
    return rows


def cmd_dg_cyclic(args) -> Report:
    rows = cyclic_rows(args.count, args.max_length, args.seed)
    return Report("dg cyclic", args.seed, rows, all(r["pass"] for r in rows))


# --- hh -------------------------------------------------------------------------

def _hh_quivers(args) -> dict[str, Quiver]:
    if args.corpus or not args.quiver:
        return corpus.corpus_quivers()
    return {args.quiver: _quiver(args.quiver)[0]}


def cmd_hh_smallcomplex(args) -> Report:
    q, from_file = _quiver(args.quiver)
    kinds = {"kq": hochschild.path_algebra, "g2": dg.ginzburg2,
             "g3": lambda q: dg.ginzburg3(q, _potential(q, args.potential, from_file))}
    pres = kinds[args.kind](q)
    cx = hochschild.small_hh_complex(pres, args.L)
    bad = cx.d_squared_failures()
    degs = sorted({cx.degree(b) for b in cx.basis}, reverse=True)
    rows = [{"degree": k, "cycles": sum(1 for b in cx.of_degree(k) if b[0] == "L"),
             "pairs": sum(1 for b in cx.of_degree(k) if b[0] == "R")} for k in degs]
    rows.append({"degree": "d^2 failures", "cycles": len(bad), "pairs": ""})
    return Report(f"hh smallcomplex {pres.name} L={args.L}", args.seed, rows, not bad)


def cmd_hh_cocycle(args) -> Report:
    rows = []
    for name, q in _hh_quivers(args).items():
        full = hochschild.verify_cy_cocycle(q, args.L).passed
        no_pairs = hochschild.verify_cy_cocycle(q, args.L, "pairs").passed
        no_loops = hochschild.verify_cy_cocycle(q, args.L, "loops").passed
        rows.append({"quiver": name, "L": args.L, "cocycle": full, "without_pairs": no_pairs,
                     "without_loops": no_loops, "pass": full and not no_pairs and not no_loops})
    return Report("hh cy-cocycle", args.seed, rows, all(r["pass"] for r in rows))


def cmd_hh_h0dim(args) -> Report:
    rows = []
    for name, q in _hh_quivers(args).items():
        for L in range(1, args.max_L + 1):
            hh0 = hochschild.hh0_dimension(q, L)
            neck = hochschild.necklace_count(q, L)
            rows.append({"quiver": name, "L": L, "hh0": hh0, "necklaces": neck, "pass": hh0 == neck})
    return Report("hh h0dim", args.seed, rows, all(r["pass"] for r in rows))


# --- lambda ---------------------------------------------------------------------

def codim_rows(ns: list[int], two: bool, max_two: int) -> list[dict]:
    specs = [s for n in ns for s in commvar.single_eigenvalue_specs(n)]
    if two:
        specs += commvar.two_eigenvalue_specs(max_two)
    return [commvar.codim_result(s).row() for s in specs]


def cmd_lambda_codim(args) -> Report:
    ns = [args.n] if args.n else list(range(1, args.max_n + 1))
    rows = codim_rows(ns, args.two_eigenvalues, max(ns))
    return Report("lambda codim", args.seed, rows, all(r["verdict"] for r in rows))


def cmd_lambda_components(args) -> Report:
    rows = commvar.component_rows(args.max_n, args.samples, args.seed)
    ok = all(r["rank"] == r["expected"] and r["max_isotropy"] <= args.tol and r["member"] for r in rows)
    return Report("lambda components", args.seed, rows, ok)


def cmd_lambda_isotropy(args) -> Report:
    rng = np.random.default_rng(args.seed)
    mus = [_partition(args.mu)] if args.mu else [m for n in range(1, args.max_n + 1) for m in commvar.partitions_of(n)]
    rows = []
    for mu in mus:
        for s in range(args.samples):
            sample = commvar.sample_lambda_mu(mu, rng=rng)
            frame = sample.frame if args.field == "rational" else [
                (exact.to_float(a), exact.to_float(b)) for a, b in sample.frame]
            iso = commvar.isotropy_check(frame)
            rows.append({"mu": commvar.format_partition(mu), "sample": s, "max_isotropy": iso, "pass": iso <= args.tol})
    return Report("lambda isotropy", args.seed, rows, all(r["pass"] for r in rows))


def cmd_lambda_degeneration(args) -> Report:
    lam = _partition(args.partition)
    try:
        eps = Fraction(args.eps)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad eps {args.eps!r}") from None
    if eps == 0:
        raise InputError("eps must be nonzero")
    x = commvar.jordan_matrix(lam)
    space = commvar.commutator_space(x)
    rng = np.random.default_rng(args.seed)
    y = exact.qzeros(x.shape)
    for b in space:
        y = y + Fraction(int(rng.integers(-3, 4))) * b
    intertwines = commvar.intertwining_holds(lam, eps)
    squarefree = commvar.minimal_polynomial_certificate(lam, eps)
    rows = [{"eps": str(eps), "check": "intertwining", "value": intertwines},
            {"eps": str(eps), "check": "squarefree minimal polynomial", "value": squarefree}]
    dists = commvar.degeneration_distances(lam, y, [eps / 10 ** k for k in range(4)])
    for e, d in dists:
        rows.append({"eps": str(e), "check": "distance of y to [g_x(eps), g_x(eps)]", "value": d})
    shrinking = all(b[1] <= a[1] + 1e-12 for a, b in zip(dists, dists[1:]))
    return Report(f"lambda degeneration {commvar.format_partition(lam)}", args.seed, rows,
                  intertwines and squarefree and shrinking)


# --- hilbert --------------------------------------------------------------------

def _nested_list(args) -> list:
    if getattr(args, "nested", None):
        return [_nested(args.nested)]
    return [m for n in range(1, args.max_n + 1) for m in hilbert.nested_partitions(n)]


def cmd_hilbert_stability(args) -> Report:
    rng = np.random.default_rng(args.seed)
    rows = []
    for nested in _nested_list(args):
        s = hilbert.sample_component(nested, rng=rng)
        d = s.datum
        g, g_inv = commvar.random_invertible(d.n, rng)
        direct = hilbert.stability_check(d.x, d.xs, d.v)
        moved = hilbert.stability_check(g @ d.x @ g_inv, g @ d.xs @ g_inv, g @ d.v)
        floated = hilbert.stability_check(exact.to_float(d.x), exact.to_float(d.xs), exact.to_float(d.v), args.tol)
        killed = hilbert.stability_check(d.x, d.xs, d.v * 0)
        rows.append({"nested": hilbert.format_nested(nested), "stable": direct, "conjugated": moved,
                     "float": floated, "v=0": killed, "pass": direct and moved and floated and not killed})
    return Report("hilbert stability", args.seed, rows, all(r["pass"] for r in rows))


def cmd_hilbert_strata(args) -> Report:
    rng = np.random.default_rng(args.seed)
    rows = []
    for nested in _nested_list(args):
        s = hilbert.sample_component(nested, rng=rng)
        d = s.datum
        pts = hilbert.hilbert_chow(d.x, d.xs, seed=args.seed)
        fpts = hilbert.hilbert_chow(exact.to_float(d.x), exact.to_float(d.xs), tol=args.tol, seed=args.seed)
        ok = hilbert.stratum_test(pts, s.lam)
        fok = hilbert.stratum_test(fpts, s.lam, tol=1e-6)
        rows.append({"nested": hilbert.format_nested(nested), "lambda": commvar.format_partition(s.lam),
                     "points": " ".join(f"({a},{b})" for a, b in pts.points), "exact": ok,
                     "float_heuristic": fok, "pass": ok and fok})
    return Report("hilbert strata", args.seed, rows, all(r["pass"] for r in rows))


def count_rows(max_n: int) -> list[dict]:
    rows = []
    for n in range(1, max_n + 1):
        a = len(hilbert.nested_partitions(n))
        b = len(hilbert.nested_partitions_bruteforce(n))
        rows.append({"n": n, "nested_partitions": a, "brute_force": b, "pass": a == b})
    return rows


def cmd_hilbert_components(args) -> Report:
    rows = hilbert.component_rows(args.max_n, args.seed, args.samples)
    if args.count_up_to:
        rows += count_rows(args.count_up_to)
    return Report("hilbert components", args.seed, rows, all(r["pass"] for r in rows))


def cmd_hilbert_count(args) -> Report:
    rows = count_rows(args.max_n)
    return Report("hilbert count-nested", args.seed, rows, all(r["pass"] for r in rows))


# --- repvar ---------------------------------------------------------------------

def _dims(q: Quiver, n: int, spec: str | None) -> dict[str, int]:
    if not spec:
        return {v: n for v in q.vertices}
    try:
        pairs = dict(item.split("=") for item in spec.split(","))
        dims = {v: int(pairs.get(v, n)) for v in q.vertices}
    except ValueError:
        raise InputError(f"bad dimension vector {spec!r}; use v=n,w=m") from None
    return dims


def cmd_repvar_moment(args) -> Report:
    q, _ = _quiver(args.quiver)
    rng = np.random.default_rng(args.seed)
    rho = repvar.random_rep(double(q), _dims(q, args.n, args.dims), rng, args.field)
    rows = []
    total = Fraction(0) if rho.exact else 0.0
    for v in q.vertices:
        mu = repvar.moment_map(q, rho, v)
        tr = sum(mu[i, i] for i in range(mu.shape[0])) if mu.shape[0] else 0
        total = total + tr
        rows.append({"vertex": v, "matrix": json.dumps([[str(a) for a in row] for row in mu]), "trace": str(tr)})
    ok = total == 0 if rho.exact else abs(total) <= args.tol
    rows.append({"vertex": "sum", "matrix": "", "trace": str(total)})
    return Report(f"repvar moment {args.quiver}", args.seed, rows, ok)


def tangent_rows(max_n: int, samples: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    q = corpus.jordan(("a",))
    rows = []
    for n in range(1, max_n + 1):
        for s in range(samples):
            x, y = repvar.sample_commuting_pair(n, rng)
            tc = repvar.tangent_complex_g2(q, repvar.commuting_pair_rep(x, y))
            comp, dual = tc.composite_is_zero(), tc.self_dual()
            rows.append({"n": n, "sample": s, "BA=0": comp, "self_dual": dual, "pass": comp and dual})
    return rows


def cmd_repvar_tangent(args) -> Report:
    rows = tangent_rows(args.max_n, args.samples, args.seed)
    return Report("repvar tangent", args.seed, rows, all(r["pass"] for r in rows))


def cmd_repvar_jacobian(args) -> Report:
    """Linearization of the truncated critical equations at commuting triples."""
    q3 = corpus.jordan(("x", "y", "z"))
    pres = dg.ginzburg3(q3, corpus.potential_for("xyz-commutator", q3))
    system = repvar.truncation_equations(pres)
    rng = np.random.default_rng(args.seed)
    rows = []
    for s in range(args.samples):
        x, y = repvar.sample_commuting_pair(args.n, rng)
        cent = commvar.centralizer_basis(x)
        z = y @ y - x  # commutes with x and y since [x, y] = 0
        rho = repvar.MatrixRep(pres.quiver, {"0": args.n}, {"x": x, "y": y, "z": z})
        res = repvar.residual(system, rho)
        if res:
            rows.append({"sample": s, "residual": res, "rank": "", "local_dim": "", "centralizer_dim": len(cent), "pass": False})
            continue
        rank = repvar.jacobian_rank(system, rho)
        rows.append({"sample": s, "residual": res, "rank": rank,
                     "local_dim": repvar.n_variables(system, rho) - rank,
                     "centralizer_dim": len(cent), "pass": True})
    return Report(f"repvar jacobian n={args.n}", args.seed, rows, all(r["pass"] for r in rows))


def gradient_rows(max_n: int, seed: int, rel_tol: float = 1e-6) -> list[dict]:
    rng = np.random.default_rng(seed)
    cases = [("a2tilde", "abc"), ("s3", "xyz-commutator")]
    rows = []
    for qname, wname in cases:
        q = corpus.QUIVERS[qname]()
        w = corpus.potential_for(wname, q)
        for n in range(1, max_n + 1):
            dims = {v: n for v in q.vertices}
            rho_f = repvar.random_rep(q, dims, rng, "float")
            g = repvar.trace_gradient(w, rho_f)
            fd = repvar.finite_difference_gradient(w, rho_f)
            scale = max(1.0, max(float(np.max(np.abs(g[k]), initial=0.0)) for k in g))
            err = max(float(np.max(np.abs(g[k] - fd[k]), initial=0.0)) for k in g) / scale
            rho_q = repvar.random_rep(q, dims, rng, "rational")
            gq = repvar.trace_gradient(w, rho_q)
            sym = repvar.symbolic_gradient(w, rho_q)
            same = all(exact.is_zero(gq[k] - sym[k]) for k in gq)
            rows.append({"quiver": qname, "W": wname, "n": n, "fd_rel_error": err, "exact_match": same,
                         "pass": err <= rel_tol and same})
    return rows


def cmd_repvar_gradient(args) -> Report:
    rows = gradient_rows(args.max_n, args.seed)
    return Report("repvar gradient", args.seed, rows, all(r["pass"] for r in rows))


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--field", choices=["rational", "float"], default="rational")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=["csv", "txt"], default="csv")

    parser = argparse.ArgumentParser(prog="quiverlag", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def presentation_args(p):
        p.add_argument("--quiver", default="s1", help="corpus name or JSON quiver file")
        p.add_argument("--potential", default=None, help="0, abc, xyz-commutator, abc-commutator or file")
        p.add_argument("--kind", choices=["g2", "g3", "rel2", "rel3"], default="g3")
        p.add_argument("--rel", default=None, help="named relative case (overrides --quiver)")
        p.add_argument("--drop-vertices", action="store_true",
                       help="with rel2/rel3 on --quiver: use the empty subquiver without vertices")

    g = groups.add_parser("dg", help="dg presentations").add_subparsers(dest="command", required=True)
    p = leaf(g, "build", cmd_dg_build, "print a presentation")
    presentation_args(p)
    p.add_argument("--document", action="store_true", help="emit the JSON document instead of the table")
    p = leaf(g, "check", cmd_dg_check, "check d^2 = 0")
    presentation_args(p)
    p.add_argument("--corpus", action="store_true", help="every constructor over the named corpus")
    p = leaf(g, "h0", cmd_dg_h0, "compare H^0 relations with the preprojective relations")
    p.add_argument("--quiver", default="s1")
    p.add_argument("--corpus", action="store_true")
    p = leaf(g, "trunc", cmd_dg_trunc, "truncated critical equations of relative cases")
    p.add_argument("--rel", action="append", help="relative case name (repeatable)")
    p.add_argument("--print", action="store_true", help="print the equations instead of the table")
    p = leaf(g, "cyclic", cmd_dg_cyclic, "sum of [e, d_e W] over random potentials")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--max-length", type=int, default=5)

    g = groups.add_parser("hh", help="small Hochschild complex").add_subparsers(dest="command", required=True)
    p = leaf(g, "smallcomplex", cmd_hh_smallcomplex, "basis sizes and D^2 check")
    p.add_argument("--quiver", default="s1")
    p.add_argument("--potential", default=None)
    p.add_argument("--kind", choices=["kq", "g2", "g3"], default="g2")
    p.add_argument("--L", type=int, default=3)
    p = leaf(g, "cy-cocycle", cmd_hh_cocycle, "CY class and its two negative controls")
    p.add_argument("--quiver", default=None)
    p.add_argument("--corpus", action="store_true")
    p.add_argument("--L", type=int, default=3)
    p = leaf(g, "h0dim", cmd_hh_h0dim, "HH_0 of kQ against necklace counts")
    p.add_argument("--quiver", default=None)
    p.add_argument("--corpus", action="store_true")
    p.add_argument("--max-L", type=int, default=4)

    g = groups.add_parser("lambda", help="commuting variety components").add_subparsers(dest="command", required=True)
    p = leaf(g, "codim", cmd_lambda_codim, "codimension of [g_x, g_x] in g_x")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--two-eigenvalues", action="store_true")
    p = leaf(g, "components", cmd_lambda_components, "tangent rank and isotropy of Lambda_mu")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--samples", type=int, default=5)
    p = leaf(g, "isotropy", cmd_lambda_isotropy, "isotropy of sampled frames")
    p.add_argument("--mu", default=None)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--samples", type=int, default=5)
    p = leaf(g, "degeneration", cmd_lambda_degeneration, "x(eps) certificates and distance witness")
    p.add_argument("--partition", default="3,1")
    p.add_argument("--eps", default="1/2")

    g = groups.add_parser("hilbert", help="framed data and the saturation").add_subparsers(dest="command", required=True)
    for name, func, text in (("stability", cmd_hilbert_stability, "stability of sampled points"),
                             ("strata", cmd_hilbert_strata, "joint spectra against predicted strata"),
                             ("components", cmd_hilbert_components, "membership, strata and tangent ranks")):
        p = leaf(g, name, func, text)
        p.add_argument("--max-n", type=int, default=4)
        p.add_argument("--nested", default=None, help='e.g. "2,1;1"')
        p.add_argument("--samples", type=int, default=1)
        if name == "components":
            p.add_argument("--count-up-to", type=int, default=8)
    p = leaf(g, "count-nested", cmd_hilbert_count, "nested partition counts against brute force")
    p.add_argument("--max-n", type=int, default=8)

    g = groups.add_parser("repvar", help="representation varieties").add_subparsers(dest="command", required=True)
    p = leaf(g, "moment", cmd_repvar_moment, "moment map of a random representation of the double")
    p.add_argument("--quiver", default="s1")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dims", default=None, help="per-vertex dimensions, v=n,w=m")
    p = leaf(g, "tangent", cmd_repvar_tangent, "B A = 0 and self-duality on commuting pairs")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--samples", type=int, default=10)
    p = leaf(g, "jacobian", cmd_repvar_jacobian, "Jacobian rank of the critical equations")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=3)
    p = leaf(g, "gradient", cmd_repvar_gradient, "gradient of tr W against finite differences and sympy")
    p.add_argument("--max-n", type=int, default=3)
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str, str | None]:
    """Parse, execute and render; returns (exit code, text, output path)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (InputError, QuiverError, dg.PresentationError, hilbert.UnsupportedInput,
            hilbert.PreconditionError, repvar.RepError) as exc:
        return 2, f"error: {exc}\n", None
    return (0 if report.passed else 1), report.render(args.format, ["quiverlag", *argv]), args.out


def main(argv: list[str] | None = None) -> int:
    try:
        code, text, out = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    if code == 2:
        sys.stderr.write(text)
    elif out:
        FilePath(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
