"""Command-line interface.

Exit codes: 0 pass, 1 fail, 2 unreadable or malformed input, 3 refused
(an exhaustive routine's guard or budget was exceeded).  Numbers are
printed as integers or ``num/den`` fractions, never as floats.

With ``--json`` every command prints one object::

    {"command": [...], "status": "pass" | "fail" | "error" | "refused",
     "rows": {name: value, ...}, "witnesses": [...], "message": str}

``rows`` keeps insertion order; values are ints, booleans, strings,
``num/den`` strings, ``null``, or lists of these.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .discoord import (
    GuardExceeded,
    brute_minimizer,
    d_profile,
    decompose_three,
    discoordination,
    greedy_minimizer,
    s_chain,
    three_way_mutual,
)
from .gf import ContractError
from .subspace import Subspace, independent, sum_spaces

EXIT = {"pass": 0, "fail": 1, "error": 2, "refused": 3}


def fmt(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [fmt(x) for x in v]
    return v


def vec(v) -> str:
    return "".join("0123456789abcdefghijklmnopqrstuvwxyz"[x] for x in v)


class Report:
    def __init__(self, argv):
        self.command = list(argv)
        self.status = "pass"
        self.rows = {}
        self.witnesses = []
        self.message = ""
        self.trailer: List[str] = []  # raw text appended in plain mode

    def row(self, name, value):
        self.rows[name] = fmt(value)

    def fail(self, msg=""):
        self.status = "fail"
        if msg and not self.message:
            self.message = msg

    def emit(self, as_json: bool, out=None):
        out = out or sys.stdout
        if as_json:
            doc = {"command": self.command, "status": self.status, "rows": self.rows,
                   "witnesses": self.witnesses, "message": self.message}
            out.write(json.dumps(doc, indent=2) + "\n")
            return
        prefix = "# " if self.trailer else ""
        out.write(f"{prefix}status: {self.status}\n")
        if self.message:
            out.write(f"{prefix}message: {self.message}\n")
        for k, v in self.rows.items():
            if isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, list):
                v = " ".join(str(x) for x in v)
            out.write(f"{prefix}{k}: {v}\n")
        for w in self.witnesses:
            out.write(f"{prefix}witness: {w}\n")
        for line in self.trailer:
            out.write(line + "\n")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _load_scheme(path):
    from .caching.fileformat import parse_scheme

    try:
        return parse_scheme(_read(path))
    except ContractError as e:
        raise InputError(f"{path}: {e}") from None


def _load_family(path):
    from .caching.fileformat import parse_family

    try:
        return parse_family(_read(path))
    except ContractError as e:
        raise InputError(f"{path}: {e}") from None


def _demand_str(d) -> str:
    return "".join(map(str, d)) if max(d) < 10 else " ".join(map(str, d))


# -- commands ------------------------------------------------------------------

def cmd_verify(args, rep: Report):
    from .caching.model import memory_rate, verify_scheme

    s = _load_scheme(args.path)
    v = verify_scheme(s)
    M, R, _, _ = memory_rate(s)
    rep.row("valid", v.valid)
    rep.row("complete", v.complete)
    rep.row("demands_checked", v.checked)
    rep.row("M", M)
    rep.row("R", R)
    for f in v.failures:
        rep.witnesses.append(f"demand {_demand_str(f.demand)} user {f.user} cannot decode, "
                             f"uncovered vector {vec(f.witness)}")
    if not v.valid:
        rep.fail("some user cannot decode its document")
    if not v.complete and not args.partial:
        for d in s.missing_demands():
            rep.witnesses.append(f"demand {_demand_str(d)} has no broadcast")
        rep.fail("broadcasts missing (use --partial to accept)")


def cmd_discoord(args, rep: Report):
    fam = _load_family(args.path)
    val = discoordination(fam)
    rep.row("members", len(fam))
    rep.row("dims", [a.dim for a in fam])
    rep.row("discoord", val)
    rep.row("S_dims", [s.dim for s in s_chain(fam)])
    if args.profile:
        rep.row("d_profile", d_profile(fam))
    if args.minimizer:
        g = greedy_minimizer(fam)
        rep.row("minimizer_discoord", g.discoordination)
        for j in sorted(g.parts, reverse=True):
            if j:
                rep.row(f"X_{j}", [vec(v) for v in g.parts[j]])
        if g.discoordination != val:
            rep.fail("greedy minimizer disagrees with the formula")
    if args.brute:
        b, _ = brute_minimizer(fam)  # may raise GuardExceeded
        rep.row("brute", b)
        rep.row("equal", b == val)
        if b != val:
            rep.fail("brute force disagrees with the formula")


def cmd_decompose3(args, rep: Report):
    fam = _load_family(args.path)
    if len(fam) != 3:
        raise InputError(f"decompose3 needs exactly three members, got {len(fam)}")
    a, b, c = fam
    t = decompose_three(a, b, c)
    n = a.n
    rep.row("m", t.m)
    rep.row("discoord", discoordination(fam))
    rep.row("I(A;B;C)", three_way_mutual(a, b, c))
    rep.row("dim_U1", t.u1.dim)
    rep.row("dim_U2", t.u2.dim)
    for k, (p1, p2) in t.factors.items():
        rep.row(f"{k}_in_U1", p1.dim)
        rep.row(f"{k}_in_U2", p2.dim)
    rep.row("triples", [f"{vec(x)},{vec(y)},{vec(z)}" for x, y, z in t.triples])
    ok = independent([t.u1, t.u2]) and sum_spaces(t.u1, t.u2) == Subspace.full(n, a.field)
    ok = ok and all(p1.dim + p2.dim == s.dim for (p1, p2), s in zip(t.factors.values(), fam))
    ok = ok and discoordination([p[0] for p in t.factors.values()]) == 0
    ok = ok and t.m == discoordination(fam)
    rep.row("checks", ok)
    if not ok:
        rep.fail("decomposition invariants violated")


def cmd_zdecomp(args, rep: Report):
    from .caching.zdecomp import pure_type, z_decompose

    s = _load_scheme(args.path)
    if s.N != 3:
        raise InputError(f"zdecomp needs N == 3, got N = {s.N}")
    users = [args.user] if args.user else range(1, s.K + 1)
    for j in users:
        if not 1 <= j <= s.K:
            raise InputError(f"user {j} out of range 1..{s.K}")
        zd = z_decompose(s.cache(j), scheme=s)
        dims = zd.dims()
        for d in "ABC":
            rep.row(f"Z{j}.{d}", [dims[(d, k)] for k in range(1, 6)])
        rep.row(f"Z{j}.type", pure_type(zd))
        ok = zd.reconstruct() == s.cache(j) and all(independent(zd.doc_pieces(d)) for d in "ABC")
        rep.row(f"Z{j}.reconstructs", ok)
        if not ok:
            rep.fail(f"decomposition of Z{j} does not reconstruct it")


def cmd_analyze(args, rep: Report):
    from .caching.analysis import analyze, violations

    s = _load_scheme(args.path)
    a = analyze(s)
    for name in ("M", "R", "M_avg", "R_avg", "R_distinct", "R_distinct_avg"):
        rep.row(name, getattr(a, name))
    rep.row("valid", a.valid)
    rep.row("complete", a.complete)
    if not a.valid:
        rep.fail("scheme is invalid")
    if a.ratios is not None:
        for k in range(1, 6):
            rep.row(f"r{k}", a.ratios[k])
        rep.row("ratios_uniform", a.ratios.uniform)
        rep.row("separated", a.separated)
    for r in a.bound_rows:
        if r.kind == "skipped":
            rep.row(f"bound {r.name}", f"skipped ({r.note})")
            continue
        tag = "equality" if r.equality else ("holds" if r.satisfied else "VIOLATED")
        if r.kind == "conjecture":
            tag += " (conjecture)"
        rep.row(f"bound {r.name}", f"{fmt(r.lhs)} vs {fmt(r.rhs)} {tag}")
    bad = violations(a.bound_rows)
    if bad:
        rep.fail("bound violated: " + "; ".join(r.name for r in bad))
    if a.audit is not None:
        au = a.audit
        for name in ("delta", "delta_prime", "s1", "s2", "rhs_first", "rhs_second"):
            rep.row(name, getattr(au, name))
        rep.row("audit_ok", au.ok)
        if not au.ok:
            rep.fail("discoordination audit failed")
    elif a.audit_note:
        rep.row("audit", f"skipped ({a.audit_note})")


def cmd_gen(args, rep: Report):
    from .caching.builtins import builtin
    from .caching.fileformat import serialize_scheme

    try:
        s = builtin(args.name)
    except ContractError as e:
        raise InputError(str(e)) from None
    if args.symmetrize:
        from .caching.symmetry import symmetrize

        s = symmetrize(s)
    text = serialize_scheme(s)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise InputError(f"cannot write {args.output}: {e}") from None
        rep.row("written", args.output)
    else:
        rep.raw = text


def cmd_search(args, rep: Report):
    from .caching.fileformat import serialize_scheme
    from .caching.search import DEFAULT_BUDGET, fill_broadcasts, search_min_x

    s = _load_scheme(args.path)
    budget = args.budget or DEFAULT_BUDGET
    if args.all == (args.demand is not None):
        raise InputError("give exactly one of --demand or --all")
    try:
        if args.all:
            filled = fill_broadcasts(s, args.mode, demands=s.missing_demands(), budget=budget)
            rep.row("filled", len(s.missing_demands()))
            rep.raw = serialize_scheme(filled)
            return
        d = tuple(args.demand)
        res = search_min_x(s, d, args.mode, budget=budget)
    except GuardExceeded:
        raise
    except ContractError as e:
        raise InputError(str(e)) from None
    rep.row("demand", list(d))
    rep.row("dim", res.dim)
    rep.row("rate", Fraction(res.dim, s.F))
    rep.row("lower_bound", res.lower_bound)
    rep.row("certified_minimal", res.minimal)
    rep.row("nodes", res.candidates)
    rep.row("generators", [vec(v) for v in res.space.basis])
    rep.trailer = ["X " + " ".join(map(str, d))] + [vec(v) for v in res.space.basis] + [""]


def cmd_oracle(args, rep: Report):
    from .oracle import run_oracle

    for r in run_oracle(args.seed, args.cases):
        rep.row(r.name, f"{r.cases - len(r.failures)}/{r.cases}")
        if r.failures:
            rep.fail("oracle mismatch")
            rep.witnesses.append(f"{r.name}: {r.failures[0]!r}")


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")

    p = argparse.ArgumentParser(prog="subcoord", parents=[common],
                                description="Subspace discoordination and linear coded caching tools.")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", parents=[common], help="check every broadcast decodes")
    v.add_argument("path", help="scheme file, or - for stdin")
    v.add_argument("--partial", action="store_true", help="accept missing broadcasts")
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("discoord", parents=[common], help="discoordination of a family")
    d.add_argument("path", help="family file, or - for stdin")
    d.add_argument("--brute", action="store_true", help="cross-check by exhaustive search")
    d.add_argument("--minimizer", action="store_true", help="print a minimizing basis")
    d.add_argument("--profile", action="store_true", help="print d_1..d_m")
    d.set_defaults(fn=cmd_discoord)

    t = sub.add_parser("decompose3", parents=[common], help="split a triple into coordinated and counterexample parts")
    t.add_argument("path")
    t.set_defaults(fn=cmd_decompose3)

    z = sub.add_parser("zdecomp", parents=[common], help="pure-type decomposition of caches (N = 3)")
    z.add_argument("path")
    z.add_argument("--user", type=int, help="only this cache")
    z.set_defaults(fn=cmd_zdecomp)

    a = sub.add_parser("analyze", parents=[common], help="rates, ratios, bounds and audits")
    a.add_argument("path")
    a.set_defaults(fn=cmd_analyze)

    g = sub.add_parser("gen", parents=[common], help="write a built-in scheme")
    g.add_argument("name")
    g.add_argument("-o", "--output", help="file to write instead of stdout")
    g.add_argument("--symmetrize", action="store_true", help="emit the symmetrized scheme")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("search", parents=[common], help="find a small broadcast for one demand")
    s.add_argument("path")
    s.add_argument("--demand", type=int, nargs="+")
    s.add_argument("--all", action="store_true", help="fill every missing demand and print the scheme")
    s.add_argument("--mode", choices=("exhaustive", "subspaces", "greedy"), default="exhaustive")
    s.add_argument("--budget", type=int, help="node or subspace limit for exact modes")
    s.set_defaults(fn=cmd_search)

    o = sub.add_parser("oracle", parents=[common], help="seeded brute-force cross-validation")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--cases", type=int, default=100)
    o.set_defaults(fn=cmd_oracle)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    rep = Report(argv)
    rep.raw = None
    try:
        args.fn(args, rep)
    except InputError as e:
        rep.status = "error"
        rep.message = str(e)
        if not args.json:
            print(f"error: {e}", file=sys.stderr)
            return EXIT["error"]
    except GuardExceeded as e:
        rep.status = "refused"
        rep.message = str(e)
        rep.row("guard", e.guard)
        rep.trailer = []
    if rep.raw is not None and rep.status == "pass" and not args.json:
        sys.stdout.write(rep.raw)
        return EXIT["pass"]
    if rep.raw is not None and args.json:
        rep.row("scheme", rep.raw)
    rep.emit(args.json)
    return EXIT[rep.status]


if __name__ == "__main__":
    sys.exit(main())
