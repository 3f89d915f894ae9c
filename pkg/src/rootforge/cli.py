"""Command line front end.

    rootforge invariants <expr> [--spinc LABEL] [--cross-check] [--strict] [--json FILE]
    rootforge root <expr> [--format dot|ascii] [--hfi]
    rootforge sum-table <expr>... [--max-len L]

Expressions: brieskorn(a1,...,an), seifert(e0; a1/b1, ...), graph(path.json),
-atom for a reversed orientation, sum(term, term, ...).
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from . import errors
from .connected_sum import (
    OrientedSummand,
    SumSpec,
    independence_certificate,
    mixed_sum_invariants,
    sum_correction_terms,
)
from .graded_root import (
    SymmetricGradedRoot,
    hfi_root_diagram,
    monotone_params,
    monotone_subroot,
    root_correction_terms,
)
from .iota_complex import involutive_invariants, standard_complex
from .lattice import d_invariant, graded_root_from_plumbing
from .plumbing import (
    brieskorn_graph,
    check_almost_rational,
    neumann_siebenmann,
    seifert_graph,
    self_conjugate_spinc,
    tree_from_json,
)

# ------------------------------------------------------------------ AST


@dataclass(frozen=True)
class Brieskorn:
    exponents: Tuple[int, ...]

    def __str__(self):
        return "brieskorn(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True)
class Seifert:
    e0: int
    fibers: Tuple[Tuple[int, int], ...]

    def __str__(self):
        return f"seifert({self.e0}; " + ", ".join(f"{a}/{b}" for a, b in self.fibers) + ")"


@dataclass(frozen=True)
class Graph:
    path: str

    def __str__(self):
        return f"graph({self.path})"


@dataclass(frozen=True)
class Neg:
    term: Union[Brieskorn, Seifert, Graph]

    def __str__(self):
        return f"-{self.term}"


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Union[Brieskorn, Seifert, Graph, Neg], ...]

    def __str__(self):
        return "sum(" + ", ".join(map(str, self.terms)) + ")"


ATOMS = (Brieskorn, Seifert, Graph)

# --------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        return line, col

    def fail(self, expected):
        line, col = self.where()
        raise errors.ExpressionSyntaxError(line, col, expected, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.fail(repr(ch))
        self.pos += 1

    def word(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def integer(self):
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.fail("an integer")
        return int(self.text[start:self.pos])

    def parse(self):
        expr = self.expr()
        if self.peek():
            self.fail("end of input")
        return expr

    def expr(self):
        self.skip()
        save = self.pos
        name = self.word()
        if name == "sum":
            self.expect("(")
            terms = [self.term()]
            while self.peek() == ",":
                self.pos += 1
                terms.append(self.term())
            self.expect(")")
            return Sum(tuple(terms))
        self.pos = save
        return self.term()

    def term(self):
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.atom())
        return self.atom()

    def atom(self):
        self.skip()
        start = self.pos
        name = self.word()
        if name == "brieskorn":
            self.expect("(")
            nums = [self.integer()]
            while self.peek() == ",":
                self.pos += 1
                nums.append(self.integer())
            self.expect(")")
            return Brieskorn(tuple(nums))
        if name == "seifert":
            self.expect("(")
            e0 = self.integer()
            self.expect(";")
            fibers = [self.fraction()]
            while self.peek() == ",":
                self.pos += 1
                fibers.append(self.fraction())
            self.expect(")")
            return Seifert(e0, tuple(fibers))
        if name == "graph":
            self.expect("(")
            self.skip()
            quoted = self.peek() in "\"'"
            if quoted:
                q = self.text[self.pos]
                self.pos += 1
                end = self.text.find(q, self.pos)
                if end < 0:
                    self.pos = len(self.text)
                    self.fail("closing quote")
                path = self.text[self.pos:end]
                self.pos = end + 1
            else:
                start_p = self.pos
                while self.pos < len(self.text) and self.text[self.pos] not in "),":
                    self.pos += 1
                path = self.text[start_p:self.pos].strip()
            if not path:
                self.fail("a file path")
            self.expect(")")
            return Graph(path)
        self.pos = start
        self.fail("brieskorn, seifert or graph")

    def fraction(self):
        a = self.integer()
        self.expect("/")
        b = self.integer()
        return (a, b)


def parse_expression(text):
    return _Parser(text).parse()


# -------------------------------------------------------------- helpers


def fmt(x):
    """Exact rational as "p/q" (or "p" when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_tree(obj):
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, dict):
        return {str(k): _fmt_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fmt_tree(v) for v in obj]
    return obj


def tree_of(atom):
    if isinstance(atom, Brieskorn):
        return brieskorn_graph(*atom.exponents)[0]
    if isinstance(atom, Seifert):
        return seifert_graph(atom.e0, atom.fibers)[0]
    if isinstance(atom, Graph):
        try:
            with open(atom.path) as fh:
                text = fh.read()
        except OSError as exc:
            raise errors.UnsupportedFormat(f"cannot read {atom.path}: {exc}") from exc
        return tree_from_json(text)
    raise errors.InputError(f"not an atomic manifold: {atom}")


def ar_depth():
    raw = os.environ.get("ROOTFORGE_AR_DEPTH")
    if raw is None:
        return 20
    try:
        return int(raw)
    except ValueError as exc:
        raise errors.InputError("ROOTFORGE_AR_DEPTH must be an integer") from exc


@dataclass
class Options:
    spinc: str = None
    cross_check: bool = False
    strict: bool = False
    engine: str = "auto"


def _select_orbit(T, label):
    orbits = self_conjugate_spinc(T)
    if label is None:
        if len(orbits) > 1:
            raise errors.NotSelfConjugate(
                "several self-conjugate spin^c structures: choose one with --spinc ("
                + ", ".join(o.label for o in orbits)
                + ")"
            )
        return orbits[0]
    for o in orbits:
        if o.label == label:
            return o
    raise errors.NotSelfConjugate(f"no self-conjugate structure labelled {label}")


def analyse_atom(atom, opts):
    """Lattice pipeline for one positively oriented atomic manifold."""
    T = tree_of(atom)
    s = _select_orbit(T, opts.spinc)
    warnings = []
    verdict = check_almost_rational(T, ar_depth())
    if not verdict.verified:
        if opts.strict:
            raise errors.ARUndetermined(f"almost-rationality undetermined for {atom}")
        warnings.append(f"almost-rationality undetermined ({verdict.reason}); results assume it")
    R = graded_root_from_plumbing(T, s, engine=opts.engine)
    d_up, d_low = root_correction_terms(R)
    mu = neumann_siebenmann(T, s)
    P = monotone_subroot(R)
    d = R.top_degree + 2
    checks = {}
    if opts.cross_check:
        d_lat = d_invariant(T, s)
        inv = involutive_invariants(standard_complex(R))
        checks = {
            "lattice d equals root top + 2": d_lat == d,
            "complex invariants equal root invariants": inv.as_tuple() == (d_low, d, d_up),
            "d-underline equals -2 mu-bar": d_low == -2 * mu,
            "monotone complex invariants agree": _monotone_inv(P) == (d_low, d, d_up),
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            raise errors.CrossCheckMismatch("cross-check failed: " + "; ".join(bad))
    return {
        "tree": T,
        "orbit": s,
        "root": R,
        "params": P,
        "d": d,
        "mu_bar": mu,
        "d_lower": d_low,
        "d_upper": d_up,
        "ar": verdict,
        "warnings": warnings,
        "checks": checks,
    }


def _monotone_inv(P):
    from .iota_complex import monotone_complex

    return involutive_invariants(monotone_complex(P)).as_tuple()


def _params_doc(P):
    mp = monotone_params(P)
    return {
        "pairs": [[h, r] for h, r in P.pairs],
        "d_i": list(mp.d),
        "mu_bar_i": list(mp.mu_bar),
        "delta_tilde_i": list(mp.delta_tilde),
        "n": mp.n,
        "text": str(P),
    }


def _root_stats(R):
    return {
        "vertices": R.n,
        "leaves": len(R.leaves()),
        "top_degree": R.top_degree,
        "bottom_degree": R.degrees[R.bottom],
        "uppermost_invariant_degree": R.degrees[R.uppermost_invariant()],
    }


def _engine_doc(R):
    keep = ("engine", "levels", "min_level", "stop_level", "stem_rule", "certified")
    return {k: R.meta[k] for k in keep if k in R.meta}


def run_invariants(expr, opts=None):
    opts = opts or Options()
    doc = {"input": str(expr)}
    if isinstance(expr, ATOMS):
        a = analyse_atom(expr, opts)
        doc.update(
            {
                "spinc": a["orbit"].label,
                "d": a["d"],
                "mu_bar": a["mu_bar"],
                "d_lower": a["d_lower"],
                "d_upper": a["d_upper"],
                "monotone": _params_doc(a["params"]),
                "root": _root_stats(a["root"]),
                "engine": _engine_doc(a["root"]),
                "almost_rational": a["ar"].reason,
                "path": "lattice",
            }
        )
        if a["checks"]:
            doc["cross_check"] = a["checks"]
        if a["warnings"]:
            doc["warnings"] = a["warnings"]
        return _fmt_tree(doc)
    terms = expr.terms if isinstance(expr, Sum) else (expr,)
    summands = []
    warnings = []
    parts = []
    for t in terms:
        atom = t.term if isinstance(t, Neg) else t
        a = analyse_atom(atom, Options(None, opts.cross_check, opts.strict, opts.engine))
        warnings.extend(a["warnings"])
        summands.append(OrientedSummand(params=a["params"], positive=not isinstance(t, Neg), label=str(atom)))
        parts.append({"summand": str(t), "monotone": _params_doc(a["params"])})
    spec = SumSpec(tuple(summands))
    all_positive = all(s.positive for s in summands)
    if all_positive:
        inv = sum_correction_terms(spec)
        path = "formula"
        if opts.cross_check:
            eng = mixed_sum_invariants(spec)
            if eng != inv:
                raise errors.CrossCheckMismatch(
                    f"formula {inv.as_tuple()} and engine {eng.as_tuple()} disagree"
                )
            path = "formula+engine"
    else:
        inv = mixed_sum_invariants(spec)
        path = "engine"
    doc.update(
        {
            "summands": parts,
            "d": inv.d,
            "d_lower": inv.d_lower,
            "d_upper": inv.d_upper,
            "path": path,
        }
    )
    if warnings:
        doc["warnings"] = warnings
    return _fmt_tree(doc)


# ------------------------------------------------------------ rendering


def _kids_sorted(R, v):
    return sorted(R.children[v], key=lambda u: (R.degrees[u], u))


def render_root(obj, fmt_name="ascii"):
    if fmt_name not in ("dot", "ascii"):
        raise errors.UnsupportedFormat(f"unknown format {fmt_name!r}")
    if isinstance(obj, SymmetricGradedRoot):
        return _root_dot(obj) if fmt_name == "dot" else _root_ascii(obj)
    return _hfi_dot(obj) if fmt_name == "dot" else _hfi_ascii(obj)


def _root_dot(R):
    lines = ["digraph root {", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for v in sorted(range(R.n), key=lambda u: (-R.degrees[u], u)):
        style = ', style=filled, fillcolor="lightgray"' if R.is_invariant(v) else ""
        lines.append(f'  v{v} [label="{fmt(R.degrees[v])}"{style}];')
    for v in sorted(range(R.n), key=lambda u: (-R.degrees[u], u)):
        for c in _kids_sorted(R, v):
            lines.append(f"  v{c} -> v{v};")
    b = R.bottom
    d = R.degrees[b]
    prev = f"v{b}"
    for i in (1, 2):
        name = f"s{i}"
        lines.append(f'  {name} [label="{fmt(d - 2 * i)}", style=filled, fillcolor="lightgray"];')
        lines.append(f"  {prev} -> {name};")
        prev = name
    lines.append('  more [label="...", shape=plaintext];')
    lines.append(f"  {prev} -> more [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _root_ascii(R):
    rows = []
    order = sorted(set(R.degrees), reverse=True)
    width = max(len(fmt(d)) for d in order + [R.degrees[R.bottom] - 4])
    for d in order:
        cells = []
        for v in sorted((u for u in range(R.n) if R.degrees[u] == d), key=lambda u: u):
            tag = "*" if R.is_invariant(v) else ""
            p = R.parents[v]
            cells.append(f"v{v}{tag}" + (f"->v{p}" if p is not None else ""))
        rows.append(f"{fmt(d).rjust(width)} | " + "  ".join(cells))
    b = R.degrees[R.bottom]
    rows.append(f"{fmt(b - 2).rjust(width)} | stem")
    rows.append(f"{fmt(b - 4).rjust(width)} | stem")
    rows.append(f"{'':>{width}} | ...")
    return "\n".join(rows) + "\n"


def _hfi_dot(D):
    lines = ["digraph hfi {", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    lines.append("  subgraph cluster_coker {")
    lines.append('    label="coker";')
    for i, d in enumerate(D.coker.degrees):
        lines.append(f'    c{i} [label="{fmt(d)}"];')
    for i, p in enumerate(D.coker.parents):
        if p is not None:
            lines.append(f"    c{i} -> c{p};")
    lines.append("  }")
    lines.append("  subgraph cluster_ker {")
    lines.append('    label="ker";')
    for i, d in enumerate(D.ker_degrees):
        lines.append(f'    k{i} [label="{fmt(d)}"];')
    for i, p in enumerate(D.ker_parents):
        if p is not None:
            lines.append(f"    k{i} -> k{p};")
    lines.append("  }")
    for i in sorted(D.q_map):
        lines.append(f"  k{i} -> c{D.q_map[i]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _hfi_ascii(D):
    out = []
    degs = sorted(set(D.coker.degrees) | set(D.ker_degrees), reverse=True)
    for d in degs:
        cs = [f"c{i}" for i, x in enumerate(D.coker.degrees) if x == d]
        ks = [f"k{i}" + ("~" if D.ker_stem[i] else "") for i, x in enumerate(D.ker_degrees) if x == d]
        out.append(f"{fmt(d):>5} | coker: {' '.join(cs):<20} ker: {' '.join(ks)}")
    out.append("      | ~ marks ker stem orbits; Q maps each onto the coker orbit one degree lower")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- main


class _Parser_(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


EXIT = {"usage": 1, "math": 2, "crosscheck": 3}


def build_parser():
    p = _Parser_(prog="rootforge", description="Involutive correction terms of plumbed 3-manifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser_)
    inv = sub.add_parser("invariants", help="compute d, d-underline, d-bar and mu-bar")
    inv.add_argument("expr")
    inv.add_argument("--spinc")
    inv.add_argument("--cross-check", action="store_true")
    inv.add_argument("--strict", action="store_true")
    inv.add_argument("--json", dest="json_out")
    inv.add_argument("--engine", choices=["auto", "fibered", "enumerate"], default="auto")
    rt = sub.add_parser("root", help="render the graded root")
    rt.add_argument("expr")
    rt.add_argument("--format", default="ascii")
    rt.add_argument("--hfi", action="store_true", help="render the folded ker/coker diagram")
    rt.add_argument("--spinc")
    st = sub.add_parser("sum-table", help="independence certificate for a family")
    st.add_argument("exprs", nargs="+")
    st.add_argument("--max-len", type=int, default=3)
    st.add_argument("--json", dest="json_out")
    return p


def _print_report(doc, out):
    for key in ("input", "spinc", "d", "mu_bar", "d_lower", "d_upper", "path"):
        if key in doc:
            print(f"{key:>9}: {doc[key]}", file=out)
    if "monotone" in doc:
        print(f"{'monotone':>9}: {doc['monotone']['text']}", file=out)
    for part in doc.get("summands", []):
        print(f"{'summand':>9}: {part['summand']}  {part['monotone']['text']}", file=out)
    for w in doc.get("warnings", []):
        print(f"  warning: {w}", file=out)


def _cmd_invariants(args, out):
    expr = parse_expression(args.expr)
    doc = run_invariants(expr, Options(args.spinc, args.cross_check, args.strict, args.engine))
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _print_report(doc, out)


def _cmd_root(args, out):
    expr = parse_expression(args.expr)
    if not isinstance(expr, ATOMS):
        raise errors.InputError("root needs a single positively oriented manifold")
    a = analyse_atom(expr, Options(spinc=args.spinc))
    R = a["root"]
    obj = hfi_root_diagram(R) if args.hfi else R
    out.write(render_root(obj, args.format))


def _cmd_sum_table(args, out):
    family = []
    names = []
    for text in args.exprs:
        expr = parse_expression(text)
        if not isinstance(expr, ATOMS):
            raise errors.InputError("sum-table members must be positively oriented atoms")
        family.append(analyse_atom(expr, Options())["params"])
        names.append(str(expr))
    cert = independence_certificate(family, args.max_len)
    for i, (n, P) in enumerate(zip(names, family)):
        print(f"[{i}] {n}: {P}", file=out)
    for ms, gap in cert.gaps.items():
        label = " # ".join(f"[{i}]" for i in ms) or "S3"
        print(f"  {label:<20} d_upper - d_lower = {fmt(gap)}", file=out)
    verdict = "holds" if cert.holds else "fails"
    print(f"certificate {verdict}: {cert.checked} relations of length <= {cert.max_len} checked", file=out)
    if args.json_out:
        doc = {
            "family": names,
            "max_len": cert.max_len,
            "checked": cert.checked,
            "holds": cert.holds,
            "gaps": {",".join(map(str, k)): fmt(v) for k, v in cert.gaps.items()},
            "counterexamples": [[list(a), list(b)] for a, b in cert.counterexamples],
        }
        with open(args.json_out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if cert.holds else 2


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "invariants":
            code = _cmd_invariants(args, out)
        elif args.command == "root":
            code = _cmd_root(args, out)
        else:
            code = _cmd_sum_table(args, out)
    except errors.RootforgeError as exc:
        print(f"rootforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT.get(exc.category, 2)
    return code or 0


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
