"""Seeded cross-validation of the fast routines against brute force.

Each check draws random instances from a ``random.Random(seed)`` stream and
compares two independent computations.  The reference side never touches
the packed row-reduction code: it enumerates vectors or runs a plain
list-based elimination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, List, Optional

from .discoord import (
    d_profile,
    decompose_three,
    discoordination,
    discoordination_brute,
    greedy_minimizer,
)
from .gf import GF2, Field, Matrix, kernel, rank, rref, solve
from .subspace import Subspace, independent, intersect, sum_spaces


def random_rows(rng: random.Random, n: int, k: int, fld: Field = GF2) -> list:
    return [fld.pack([rng.randrange(fld.p) for _ in range(n)]) for _ in range(k)]


def random_subspace(rng: random.Random, n: int, fld: Field = GF2, max_gens: Optional[int] = None) -> Subspace:
    k = rng.randint(0, n if max_gens is None else max_gens)
    return Subspace.from_rows(fld, n, random_rows(rng, n, k, fld))


def random_subspace_of(rng: random.Random, parent: Subspace) -> Subspace:
    f, n = parent.field, parent.n
    k = rng.randint(0, parent.dim)
    rows = [f.combine([rng.randrange(f.p) for _ in parent.rows], parent.rows, n) for _ in range(k)]
    return Subspace.from_rows(f, n, rows)


def random_family(rng: random.Random, m: int, n: int, fld: Field = GF2) -> list:
    return [random_subspace(rng, n, fld) for _ in range(m)]


# -- naive references ----------------------------------------------------------

def naive_rref(rows: List[List[int]], p: int) -> List[List[int]]:
    """Textbook Gauss-Jordan on lists of ints; returns the nonzero rows."""
    a = [list(r) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] % p:
                t = a[i][c]
                a[i] = [(x - t * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def span_set(s: Subspace) -> frozenset:
    return frozenset(s.elements())


# -- checks ------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _rref_check(rng, cases):
    res = CheckResult("rref vs naive elimination")
    for _ in range(cases):
        p = rng.choice((2, 2, 3, 5))
        f = Field(p)
        r, c = rng.randint(0, 8), rng.randint(1, 8)
        lists = [[rng.randrange(p) for _ in range(c)] for _ in range(r)]
        m = Matrix.from_lists(f, lists, ncols=c)
        got, rk, _ = rref(m)
        want = naive_rref(lists, p)
        res.cases += 1
        if got.to_lists() != want or rk != len(want):
            res.failures.append((p, lists))
    return res


def _solve_kernel_check(rng, cases):
    res = CheckResult("solve and kernel vs enumeration")
    for _ in range(cases):
        p = rng.choice((2, 3))
        f = Field(p)
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        lists = [[rng.randrange(p) for _ in range(c)] for _ in range(r)]
        m = Matrix.from_lists(f, lists, ncols=c)
        b = tuple(rng.randrange(p) for _ in range(c))
        sols = [x for x in product(range(p), repeat=r) if m.vecmul(x) == b]
        x = solve(m, b)
        ker = kernel(m)
        null = [y for y in product(range(p), repeat=c)
                if all(sum(a * z for a, z in zip(row, y)) % p == 0 for row in lists)]
        res.cases += 1
        ok = (x is None) == (not sols) and (x is None or m.vecmul(x) == b)
        ok = ok and p ** ker.nrows == len(null) and rank(ker) == ker.nrows
        ok = ok and all(tuple(k) in set(null) for k in ker.to_lists())
        if not ok:
            res.failures.append((p, lists, b))
    return res


def _lattice_check(rng, cases):
    res = CheckResult("intersection and sum vs enumeration")
    for _ in range(cases):
        f = Field(rng.choice((2, 2, 3)))
        n = rng.randint(1, 5 if f.p == 2 else 3)
        a, b = random_subspace(rng, n, f), random_subspace(rng, n, f)
        ea, eb = span_set(a), span_set(b)
        inter = span_set(intersect(a, b))
        both = span_set(sum_spaces(a, b))
        sums = frozenset(f.add(x, y) for x in ea for y in eb)
        res.cases += 1
        if inter != ea & eb or both != sums:
            res.failures.append((f.p, a.basis, b.basis))
    return res


def _discoord_check(rng, cases):
    res = CheckResult("discoordination vs brute force")
    for _ in range(cases):
        m, n = rng.choice((3, 4)), rng.randint(1, 4)
        fam = random_family(rng, m, n)
        fast, slow = discoordination(fam), discoordination_brute(fam)
        g = greedy_minimizer(fam)
        prof = d_profile(fam)
        res.cases += 1
        if fast != slow or g.discoordination != fast or sum(prof) != fast:
            res.failures.append([a.basis for a in fam])
    return res


def _decompose_check(rng, cases):
    res = CheckResult("three-subspace decomposition")
    for _ in range(cases):
        f = Field(rng.choice((2, 2, 3)))
        n = rng.randint(1, 6 if f.p == 2 else 4)
        a, b, c = random_family(rng, 3, n, f)
        t = decompose_three(a, b, c)
        full = Subspace.full(n, f)
        ok = independent([t.u1, t.u2]) and sum_spaces(t.u1, t.u2) == full
        ok = ok and t.m == discoordination([a, b, c]) and t.u2.dim == 2 * t.m
        for name, s in (("A", a), ("B", b), ("C", c)):
            p1, p2 = t.factors[name]
            ok = ok and p1.dim + p2.dim == s.dim
        ok = ok and discoordination([t.factors[k][0] for k in "ABC"]) == 0
        res.cases += 1
        if not ok:
            res.failures.append((f.p, a.basis, b.basis, c.basis))
    return res


def _zdecomp_check(rng, cases):
    from .caching.zdecomp import z_decompose

    res = CheckResult("cache decomposition reconstruction")
    for _ in range(cases):
        F = rng.randint(1, 3)
        z = random_subspace(rng, 3 * F)
        zd = z_decompose(z, F)
        ok = zd.reconstruct() == z and len(zd.generators()) == z.dim
        for d in "ABC":
            ok = ok and independent(zd.doc_pieces(d))
        res.cases += 1
        if not ok:
            res.failures.append(z.basis)
    return res


def _search_check(rng, cases):
    from .caching.model import CachingScheme, decodes
    from .caching.search import search_min_x

    res = CheckResult("broadcast search vs subset enumeration")
    for _ in range(cases):
        N, K, F = rng.choice(((2, 2, 1), (3, 2, 1), (2, 3, 1), (3, 3, 1)))
        n = N * F
        caches = tuple(random_subspace(rng, n) for _ in range(K))
        s = CachingScheme(GF2, N, K, F, caches)
        d = tuple(rng.randint(1, N) for _ in range(K))
        got = search_min_x(s, d).dim
        # every subspace is spanned by some subset of the nonzero vectors
        vecs = list(range(1, 1 << n))
        best = None
        for mask in range(1 << len(vecs)):
            x = Subspace.from_rows(GF2, n, [v for i, v in enumerate(vecs) if mask >> i & 1])
            if all(decodes(s, d, j, x) is None for j in range(1, K + 1)):
                best = x.dim if best is None else min(best, x.dim)
        res.cases += 1
        if got != best:
            res.failures.append((caches, d))
    return res


CHECKS: List[Callable] = [
    _rref_check,
    _solve_kernel_check,
    _lattice_check,
    _discoord_check,
    _decompose_check,
    _zdecomp_check,
    _search_check,
]


def run_oracle(seed: int = 0, cases: int = 100) -> List[CheckResult]:
    """Run every check on ``cases`` instances drawn from ``seed``."""
    out = []
    for k, check in enumerate(CHECKS):
        out.append(check(random.Random(f"{seed}:{k}"), cases))
    return out

