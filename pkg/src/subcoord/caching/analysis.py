"""Ratios, bound audits, and rank audits for three-user, three-document schemes.

Every inequality here is evaluated in exact rational arithmetic.  The
audits do not prove anything: they check that a concrete scheme lands on
the right side of inequalities that hold for every linear scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

from ..discoord import discoordination
from ..gf import ContractError, Matrix, Solver, rank
from ..subspace import (
    Subspace,
    independent,
    intersect,
    is_decomposition,
    quotient_dim,
    subspace_contains,
    sum_spaces,
)
from .model import CachingScheme, is_distinct, memory_rate, rate_over, verify_scheme
from .symmetry import group
from .zdecomp import z_decompose

DISTINCT_3 = list(permutations((1, 2, 3)))


def _need_33(s: CachingScheme, what: str):
    if s.N != 3 or s.K != 3:
        raise ContractError(f"{what} needs N == K == 3, got N = {s.N}, K = {s.K}")


# -- splits and separation ---------------------------------------------------

def canonical_split(s: CachingScheme) -> list:
    """``split[i-1][j-1]``: part ``j`` of document ``i``, a contiguous run of ``F/3`` bits."""
    if s.F % 3:
        raise ContractError(f"a three-part split needs F divisible by 3, got F = {s.F}")
    w = s.F // 3
    return [
        [Subspace.coordinate(range((i - 1) * s.F + (j - 1) * w, (i - 1) * s.F + j * w), s.n, s.field)
         for j in range(1, 4)]
        for i in range(1, s.N + 1)
    ]


def check_split(s: CachingScheme, split) -> None:
    for i, parts in enumerate(split, start=1):
        if len(parts) != 3 or any(p.dim * 3 != s.F for p in parts):
            raise ContractError(f"split of document {i} must be three parts of dimension F/3")
        if not is_decomposition(parts, s.doc(i)):
            raise ContractError(f"split of document {i} is not a decomposition of W_{i}")


def doc_projection(s: CachingScheme, z: Subspace, i: int) -> Subspace:
    """Image of ``z`` under the coordinate projection onto ``W_i``."""
    f, n, lo = s.field, s.n, (i - 1) * s.F
    rows = []
    for r in z.rows:
        v = list(f.unpack(r, n))
        rows.append(f.pack([x if lo <= k < lo + s.F else 0 for k, x in enumerate(v)]))
    return Subspace.from_rows(f, n, rows)


def find_split(s: CachingScheme) -> Optional[list]:
    """A split under which the scheme is separated, or ``None``.

    ``Z_j`` lies in the sum of the ``j``-th parts iff its projection onto
    each ``W_i`` lies in part ``j`` of ``W_i``.  So a split exists iff, for
    every document, the three projections are independent and each has
    dimension at most ``F/3``; the parts are then those projections padded
    with unit vectors.  The contiguous split is preferred when it works.
    """
    _need_33(s, "find_split")
    if s.F % 3:
        return None
    canon = canonical_split(s)
    if _separated_by(s, canon):
        return canon
    f, w = s.field, s.F // 3
    split = []
    for i in range(1, s.N + 1):
        proj = [doc_projection(s, s.cache(j), i) for j in range(1, 4)]
        if any(p.dim > w for p in proj) or not independent(proj):
            return None
        units = [f.unit(k, s.n) for k in range((i - 1) * s.F, i * s.F)]
        parts = [list(p.rows) for p in proj]
        for part in parts:
            while len(part) < w:
                taken = sum_spaces(*(Subspace.from_rows(f, s.n, q) for q in parts))
                part.append(next(u for u in units if not taken.has_row(u)))
        split.append([Subspace.from_rows(f, s.n, part) for part in parts])
    return split


def _separated_by(s: CachingScheme, split) -> bool:
    for j in range(1, 4):
        own = sum_spaces(*(split[i][j - 1] for i in range(s.N)))
        if not subspace_contains(own, s.cache(j)):
            return False
    return True


def is_separated(s: CachingScheme, split=None) -> bool:
    """True iff every ``Z_j`` lies in the sum of the ``j``-th parts of all documents.

    Without an explicit ``split`` any split is allowed.
    """
    _need_33(s, "is_separated")
    if split is None:
        return find_split(s) is not None
    check_split(s, split)
    return _separated_by(s, split)


# -- ratios ------------------------------------------------------------------

@dataclass(frozen=True)
class Ratios:
    r: tuple  # (r1, r2, r3, r4, r5)
    uniform: bool  # False when pieces differ across users or documents (values are averages)

    def __getitem__(self, k):
        return self.r[k - 1]

    @property
    def total(self) -> Fraction:
        return sum(self.r, Fraction(0))

    def memory(self) -> Fraction:
        r1, r2, r3, r4, _ = self.r
        return 3 * r1 + 2 * r2 + Fraction(3, 2) * r3 + r4


def ratios(s: CachingScheme) -> Ratios:
    """Piece ratios of the caches.

    For each user and document, pieces 1, 2, 3+4, 5 of the document give
    ``r1..r4`` (divided by ``F``); ``r5`` is the fraction of a document no
    cache touches, divided by three.  Non-symmetric schemes get the average
    over users and documents, which is what their symmetrization would have.
    """
    _need_33(s, "ratios")
    F = s.F
    per = []  # (r1..r4) for each (user, doc)
    proj = {d: [] for d in "ABC"}
    for j in range(1, 4):
        zd = z_decompose(s.cache(j), F)
        dims = zd.dims()
        for d in "ABC":
            per.append((dims[(d, 1)], dims[(d, 2)], dims[(d, 3)] + dims[(d, 4)], dims[(d, 5)]))
            proj[d].append(sum_spaces(*zd.doc_pieces(d)))
    uniform = len(set(per)) == 1
    avg = [Fraction(sum(p[k] for p in per), len(per) * F) for k in range(4)]
    unused = [F - sum_spaces(*proj[d]).dim for d in "ABC"]
    r5 = Fraction(sum(unused), 3 * 3 * F)
    if len(set(unused)) != 1:
        uniform = False
    return Ratios(tuple(avg) + (r5,), uniform)


# -- bound report ------------------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    name: str
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    satisfied: Optional[bool]
    kind: str  # "proven", "identity", "conjecture", "skipped"
    note: str = ""

    @property
    def equality(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs


def _row(name, lhs, rhs, kind="proven", note="", op=">="):
    sat = lhs >= rhs if op == ">=" else lhs == rhs
    return BoundRow(name, Fraction(lhs), Fraction(rhs), sat, kind, note)


def _skip(name, why):
    return BoundRow(name, None, None, None, "skipped", why)


def bound_report(s: CachingScheme, split=None) -> list:
    """Evaluate the known inequalities for ``N = K = 3``.

    Rows depending on ``R`` need every demand's broadcast and a valid
    scheme, since the bounds speak of the worst-case demand.
    """
    _need_33(s, "bound_report")
    M, R, M_avg, _ = memory_rate(s)
    rep = verify_scheme(s)
    rows = []
    rate_ok = rep.valid and s.complete
    why = "scheme invalid" if not rep.valid else "broadcasts incomplete"
    ra = ratios(s)
    r1, r2, r3, r4, r5 = ra.r
    separated = None
    if s.F % 3 == 0:
        separated = is_separated(s, split)

    rows.append(_row("M_avg = 3r1+2r2+(3/2)r3+r4", M_avg, ra.memory(), "identity", op="=="))
    if separated:
        rows.append(_row("r1+r2+r3+r4+r5 = 1/3", ra.total, Fraction(1, 3), "identity",
                         "separated", op="=="))
    else:
        rows.append(_row("r1+r2+r3+r4+r5 >= 1/3", ra.total, Fraction(1, 3)))

    if not rate_ok:
        for nm in ("3R+M >= 3", "3R+2M >= 5", "R+3M >= 3", "M+R >= 2", "2M+R >= 8/3",
                   "2R+3M >= 5 (Tian-type)", "6M+5R >= 11", "6M+5R >= 11+3r4+(15/2)r5",
                   "2R+3M >= 5-(3/2)r3+3r5", "2R+3M >= 5-(3/2)r3-3r4+3r5",
                   "2R+3M >= 5-r2-r3/2", "4M+3R >= 7"):
            rows.append(_skip(nm, why))
        return rows

    rows += [
        _row("3R+M >= 3", 3 * R + M, 3),
        _row("3R+2M >= 5", 3 * R + 2 * M, 5),
        _row("R+3M >= 3", R + 3 * M, 3),
        _row("M+R >= 2", M + R, 2),
        _row("2M+R >= 8/3", 2 * M + R, Fraction(8, 3)),
    ]
    tian = None
    if s.F % 3 == 0:
        for d in DISTINCT_3:
            audit = tian_rank_audit(s, d, split)
            if audit.hypothesis:
                tian = audit
                break
    if tian is not None:
        rows.append(_row("2R+3M >= 5 (Tian-type)", 2 * R + 3 * M, 5, note=f"decoding hypothesis holds at {tian.demand}"))
    else:
        rows.append(_skip("2R+3M >= 5 (Tian-type)", "decoding hypothesis fails for every distinct demand"))
    rows.append(_row("6M+5R >= 11", 6 * M + 5 * R, 11))
    if separated:
        rows.append(_row("6M+5R >= 11+3r4+(15/2)r5", 6 * M + 5 * R, 11 + 3 * r4 + Fraction(15, 2) * r5))
        rows.append(_row("2R+3M >= 5-(3/2)r3+3r5", 2 * R + 3 * M, 5 - Fraction(3, 2) * r3 + 3 * r5))
    else:
        why_sep = "F not divisible by 3" if separated is None else "not separated"
        rows.append(_skip("6M+5R >= 11+3r4+(15/2)r5", why_sep))
        rows.append(_skip("2R+3M >= 5-(3/2)r3+3r5", why_sep))
    rows.append(_row("2R+3M >= 5-(3/2)r3-3r4+3r5", 2 * R + 3 * M, 5 - Fraction(3, 2) * r3 - 3 * r4 + 3 * r5))
    rows.append(_row("2R+3M >= 5-r2-r3/2", 2 * R + 3 * M, 5 - r2 - r3 / 2))
    rows.append(_row("4M+3R >= 7", 4 * M + 3 * R, 7, kind="conjecture"))
    return rows


def violations(rows: Sequence[BoundRow]) -> list:
    """Rows that must hold (proven bounds and identities) but do not."""
    return [r for r in rows if r.kind in ("proven", "identity") and r.satisfied is False]


# -- discoordination audit ---------------------------------------------------

@dataclass(frozen=True)
class DiscoordAudit:
    delta: Fraction
    delta_prime: Fraction
    delta_prime_raw: Fraction
    s1: Fraction
    s2: Fraction
    lhs_2R3M: Fraction
    lhs_pair: Fraction  # 2R'+3M with R' from the two broadcasts used
    rhs_first: Fraction
    rhs_second: Fraction
    rhs_second_raw: Fraction
    second_asserted: bool
    ok: bool


def _delta_prime_term(s: CachingScheme, a: int, b: int, c: int) -> int:
    wa, wb, z = s.doc(a), s.doc(b), s.cache(c)
    return (intersect(sum_spaces(wa, wb), z).dim - intersect(wa, z).dim - intersect(wb, z).dim)


def discoord_audit(s: CachingScheme) -> DiscoordAudit:
    _need_33(s, "discoord_audit")
    for d in ((1, 2, 3), (2, 1, 3)):
        if d not in s.broadcasts:
            raise ContractError(f"discoord_audit needs the broadcast for demand {d}")
    F = s.F
    M = memory_rate(s)[0]
    W1, W2, W3 = s.docs
    Z1, Z2, Z3 = s.caches
    X123, X213 = s.broadcasts[(1, 2, 3)], s.broadcasts[(2, 1, 3)]
    P1, P2 = sum_spaces(X123, Z1), sum_spaces(X213, Z2)
    if not (subspace_contains(P1, W1) and subspace_contains(P2, W1)):
        raise ContractError("discoord_audit: users 1 and 2 do not recover W_1")
    # W_1 lies in P1 & P2, so working modulo W_1 does not change the value
    delta = discoordination([P1, P2, Z3])
    raw = _delta_prime_term(s, 1, 2, 3)
    G = group(3, 3)
    orbit = [_delta_prime_term(s, nu[0], nu[1], kappa[2]) for kappa, nu in G]
    dprime = Fraction(sum(orbit), len(orbit) * F)
    s1 = sum_spaces(W1, W3, Z3).dim - sum_spaces(W1, W2, Z3).dim
    s2 = intersect(W1, Z3).dim - intersect(W2, Z3).dim
    q = quotient_dim(intersect(sum_spaces(P1, P2), Z3), sum_spaces(W1, W2))
    w2z3 = intersect(W2, Z3).dim
    R = memory_rate(s)[1]
    R_pair = Fraction(max(X123.dim, X213.dim), F)
    lhs = 2 * R + 3 * M
    lhs_pair = 2 * R_pair + 3 * M
    rhs_first = 5 + Fraction(q + w2z3 + s1 + s2 - delta, F)
    rhs_second_raw = 5 + Fraction(s1 + s2 - raw, F)
    rhs_second = 5 - dprime
    distinct = DISTINCT_3
    asserted = all(d in s.broadcasts for d in distinct) and verify_scheme(
        s.with_broadcasts({d: s.broadcasts[d] for d in distinct})).valid
    R_dist = rate_over(s, distinct)[0]
    ok = lhs_pair >= rhs_first and lhs_pair >= rhs_second_raw
    if asserted:
        ok = ok and 2 * R_dist + 3 * M >= rhs_second
    return DiscoordAudit(
        delta=Fraction(delta, F), delta_prime=dprime, delta_prime_raw=Fraction(raw, F),
        s1=Fraction(s1, F), s2=Fraction(s2, F), lhs_2R3M=lhs, lhs_pair=lhs_pair,
        rhs_first=rhs_first, rhs_second=rhs_second, rhs_second_raw=rhs_second_raw,
        second_asserted=asserted, ok=ok,
    )


# -- Tian rank audit -----------------------------------------------------------

BLOCK_NAMES = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3"]


@dataclass(frozen=True)
class TianAudit:
    demand: tuple
    hypothesis: bool
    per_user_hypothesis: tuple
    separated: bool
    block_ranks: dict  # "A1" .. "C3" -> rank of that column block of G
    leftover_ranks: tuple  # per user
    leftover_bound: Fraction  # (M + R' - 5/3) F
    R_prime: Fraction
    M: Fraction
    lhs: Fraction  # 2R' + 3M
    ok: Optional[bool]  # None when the hypothesis fails (nothing claimed)


def tian_rank_audit(s: CachingScheme, d=(1, 2, 3), split=None) -> TianAudit:
    _need_33(s, "tian_rank_audit")
    d = tuple(d)
    if not is_distinct(d):
        raise ContractError("tian_rank_audit needs a demand with distinct entries")
    if d not in s.broadcasts:
        raise ContractError(f"no broadcast for demand {d}")
    if split is None:
        split = find_split(s) or canonical_split(s)
    check_split(s, split)
    f, F, n = s.field, s.F, s.n
    X = s.broadcasts[d]
    M = memory_rate(s)[0]
    Rp = Fraction(X.dim, F)

    per_user = []
    for j in range(1, 4):
        have = sum_spaces(s.cache(j), X)
        need = [s.doc(d[j - 1])] + [split[i][j - 1] for i in range(3)]
        per_user.append(all(subspace_contains(have, w) for w in need))
    hyp = all(per_user)

    # coordinates of X in the basis A1, A2, A3, B1, ..., C3
    basis_rows = [r for i in range(3) for part in split[i] for r in part.rows]
    solver = Solver(Matrix(f, n, tuple(basis_rows)))
    coords = [solver.solve_row(r) for r in X.rows]
    G = Matrix.from_lists(f, coords, n) if coords else Matrix(f, n, ())
    w = F // 3

    def cols(blocks):
        return [b * w + t for b in blocks for t in range(w)]

    def block_rank(blocks):
        return rank(G.select_columns(cols(blocks))) if G.nrows else 0

    ranks = {BLOCK_NAMES[b]: block_rank([b]) for b in range(9)}
    left = []
    for j in range(1, 4):
        blocks = [(i - 1) * 3 + (k - 1) for i in range(1, 4) for k in range(1, 4)
                  if i != d[j - 1] and k != j]
        left.append(block_rank(blocks))
    bound = (M + Rp - Fraction(5, 3)) * F
    lhs = 2 * Rp + 3 * M
    ok = None
    if hyp:
        ok = all(x <= bound for x in left) and lhs >= 5
    return TianAudit(
        demand=d, hypothesis=hyp, per_user_hypothesis=tuple(per_user),
        separated=is_separated(s, split), block_ranks=ranks, leftover_ranks=tuple(left),
        leftover_bound=bound, R_prime=Rp, M=M, lhs=lhs, ok=ok,
    )


# -- everything at once --------------------------------------------------------

@dataclass(frozen=True)
class SchemeAnalysis:
    M: Fraction
    R: Fraction
    M_avg: Fraction
    R_avg: Fraction
    R_distinct: Fraction
    R_distinct_avg: Fraction
    valid: bool
    complete: bool
    ratios: Optional[Ratios]
    separated: Optional[bool]
    bound_rows: list
    audit: Optional[DiscoordAudit]
    audit_note: str = ""


def analyze(s: CachingScheme, split=None) -> SchemeAnalysis:
    M, R, M_avg, R_avg = memory_rate(s)
    Rd, Rd_avg = rate_over(s, [d for d in s.broadcasts if is_distinct(d)])
    rep = verify_scheme(s)
    ra = sep = audit = None
    rows = []
    note = ""
    if s.N == 3 and s.K == 3:
        ra = ratios(s)
        sep = is_separated(s, split) if s.F % 3 == 0 else None
        rows = bound_report(s, split)
        try:
            audit = discoord_audit(s)
        except ContractError as e:
            note = str(e)
    return SchemeAnalysis(M, R, M_avg, R_avg, Rd, Rd_avg, rep.valid, rep.complete, ra, sep,
                          rows, audit, note)
