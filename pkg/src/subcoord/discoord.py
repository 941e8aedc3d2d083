"""Coordination and discoordination of finite subspace families.

A family ``A_1..A_m`` is coordinated when one independent set of vectors
contains a basis of every member.  Its discoordination is the minimum over
independent sets ``X`` of ``sum_i (dim A_i - |X & A_i|)``; it can be read off
the chain ``S_k`` (span of all ``k``-fold intersections) as
``sum dim A_i - sum_k dim S_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Optional, Sequence

from .gf import ContractError, Matrix, reduce_row, rref_rows, solve
from .subspace import (
    QuotientMap,
    Subspace,
    extend_rows,
    intersect,
    quotient_dim,
    subset_intersections,
    subspace_contains,
    sum_spaces,
)

BRUTE_GUARD = 1 << 16


class GuardExceeded(ContractError):
    """An exhaustive routine refused an instance larger than its guard."""

    def __init__(self, guard: str, detail: str):
        super().__init__(f"{guard}: {detail}")
        self.guard = guard


def _check_family(fam: Sequence[Subspace]):
    if not fam:
        raise ContractError("family must be non-empty")
    f, n = fam[0].field, fam[0].n
    for a in fam:
        if a.field != f or a.n != n:
            raise ContractError("family members must share field and ambient dimension")


def meet(x: Sequence[int], fam: Sequence[Subspace]) -> int:
    """Number of members containing ``x``."""
    _check_family(fam)
    if len(x) != fam[0].n:
        raise ContractError(f"vector has length {len(x)}, ambient is {fam[0].n}")
    row = fam[0].field.pack(x)
    return sum(1 for a in fam if a.has_row(row))


def _meet_row(row, fam) -> int:
    return sum(1 for a in fam if a.has_row(row))


def s_chain(fam: Sequence[Subspace]) -> list:
    """``[S_1, ..., S_m]`` with ``S_k`` the span of all k-fold intersections."""
    _check_family(fam)
    m = len(fam)
    inter = subset_intersections(fam)
    chain = []
    for k in range(1, m + 1):
        chain.append(sum_spaces(*(inter[I] for I in combinations(range(m), k))))
    return chain


def discoordination(fam: Sequence[Subspace]) -> int:
    chain = s_chain(fam)
    return sum(a.dim for a in fam) - sum(s.dim for s in chain)


def is_coordinated(fam: Sequence[Subspace]) -> bool:
    return discoordination(fam) == 0


def discoord_at(x_rows: Sequence, fam: Sequence[Subspace]) -> int:
    """``sum_i (dim A_i - |X & A_i|)`` for a packed independent set ``X``."""
    return sum(a.dim - sum(1 for r in x_rows if a.has_row(r)) for a in fam)


def coordinates(x_rows: Sequence, fam: Sequence[Subspace]) -> bool:
    """True iff ``X & A_i`` spans ``A_i`` for every member."""
    return discoord_at(x_rows, fam) == 0


# -- brute force oracle ------------------------------------------------------

def brute_minimizer(fam: Sequence[Subspace]):
    """Exhaustive search: returns ``(discoordination, packed minimizer)``.

    Only vectors lying in some member can change the objective, so the
    search ranges over independent subsets of the nonzero vectors of the
    union of members.  Candidates are visited in order of decreasing meet
    number and a branch is cut once it cannot beat the best total found.
    """
    _check_family(fam)
    f, n = fam[0].field, fam[0].n
    if f.p ** n > BRUTE_GUARD:
        raise GuardExceeded("brute guard p^n <= 2^16", f"GF({f.p})^{n} has {f.p ** n} vectors")
    seen = set()
    cands = []
    for a in fam:
        for v in a.elements():
            if f.is_zero(v) or v in seen:
                continue
            seen.add(v)
            cands.append((_meet_row(v, fam), v))
    cands.sort(key=lambda t: -t[0])
    weights = [w for w, _ in cands]
    vecs = [v for _, v in cands]
    total_dim = sum(a.dim for a in fam)
    cap = sum_spaces(*fam).dim
    best = [0, []]

    def dfs(start, basis, piv, chosen, score):
        if score > best[0]:
            best[0], best[1] = score, list(chosen)
        room = cap - len(chosen)
        if room == 0 or start >= len(vecs):
            return
        if score + room * weights[start] <= best[0]:
            return
        for i in range(start, len(vecs)):
            if score + room * weights[i] <= best[0]:
                return
            red = reduce_row(f, vecs[i], basis, piv)
            if f.is_zero(red):
                continue
            nb, np_ = rref_rows(f, list(basis) + [red])
            chosen.append(vecs[i])
            dfs(i + 1, nb, np_, chosen, score + weights[i])
            chosen.pop()

    dfs(0, [], [], [], 0)
    return total_dim - best[0], best[1]


def discoordination_brute(fam: Sequence[Subspace]) -> int:
    return brute_minimizer(fam)[0]


# -- greedy minimizer -------------------------------------------------------

@dataclass(frozen=True)
class MinimizerResult:
    parts: dict  # meet level j -> tuple of vectors
    discoordination: int
    s_dims: tuple
    field: object = dc_field(default=None, repr=False)

    def vectors(self) -> list:
        return [v for j in sorted(self.parts, reverse=True) for v in self.parts[j]]


def greedy_minimizer(fam: Sequence[Subspace]) -> MinimizerResult:
    """Build purely j-th intersection bases ``X_m, ..., X_1``.

    For each level ``j`` the j-subsets are scanned in lexicographic order and
    RREF basis vectors of ``A_I`` are kept while independent modulo
    ``S_{j+1}`` together with the vectors already kept at this level.
    """
    _check_family(fam)
    f, n, m = fam[0].field, fam[0].n, len(fam)
    inter = subset_intersections(fam)
    chain = [sum_spaces(*(inter[I] for I in combinations(range(m), k))) for k in range(1, m + 1)]
    chain.append(Subspace.zero(n, f))  # S_{m+1}
    parts = {}
    all_rows = []
    for j in range(m, 0, -1):
        need = chain[j - 1].dim - chain[j].dim
        cands = (r for I in combinations(range(m), j) for r in inter[I].rows)
        picked = extend_rows(chain[j].rows, cands, f)
        assert len(picked) == need
        parts[j] = tuple(f.unpack(r, n) for r in picked)
        all_rows.extend(picked)
    parts[0] = ()
    return MinimizerResult(
        parts=parts,
        discoordination=discoord_at(all_rows, fam),
        s_dims=tuple(s.dim for s in chain[:-1]),
        field=f,
    )


def d_profile(fam: Sequence[Subspace]) -> list:
    """``d_j = sum_i dim([A_i & S_j] mod S_{j+1}) - j * dim(S_j / S_{j+1})``."""
    chain = s_chain(fam)
    f, n = fam[0].field, fam[0].n
    chain.append(Subspace.zero(n, f))
    out = []
    for j in range(1, len(fam) + 1):
        sj, sj1 = chain[j - 1], chain[j]
        tot = sum(intersect(a, sj).dim - intersect(a, sj1).dim for a in fam)
        out.append(tot - j * (sj.dim - sj1.dim))
    return out


# -- quasi-increasing sequences ---------------------------------------------

def is_quasi_increasing(seq: Sequence[Subspace]) -> bool:
    _check_family(seq)
    f, n = seq[0].field, seq[0].n
    for r in range(1, len(seq)):
        v = seq[r]
        before = sum_spaces(*seq[:r])
        inside = [seq[i] for i in range(r) if subspace_contains(v, seq[i])]
        allowed = sum_spaces(*inside) if inside else Subspace.zero(n, f)
        if not subspace_contains(allowed, intersect(v, before)):
            return False
    return True


def is_strongly_quasi_increasing(fam: Sequence[Subspace]) -> bool:
    _check_family(fam)
    if len(set(fam)) != len(fam):
        raise ContractError("strong quasi-increase needs pairwise distinct members")
    f, n = fam[0].field, fam[0].n
    zero = Subspace.zero(n, f)
    for r, v in enumerate(fam):
        J = [a for i, a in enumerate(fam) if i != r and not subspace_contains(a, v)]
        K = [a for i, a in enumerate(fam) if i != r and subspace_contains(v, a)]
        lhs = intersect(v, sum_spaces(*J)) if J else zero
        rhs = sum_spaces(*K) if K else zero
        if not subspace_contains(rhs, lhs):
            return False
    return True


def inclusion_sorted(fam: Sequence[Subspace]) -> list:
    """Members reordered by a linear extension of inclusion (dimension, then input order)."""
    return [fam[i] for i in sorted(range(len(fam)), key=lambda i: (fam[i].dim, i))]


def coordinating_basis(seq: Sequence[Subspace]) -> list:
    """Packed coordinating set for a quasi-increasing sequence.

    Each member's part extends the union of the parts of earlier members it
    contains to a basis of that member.
    """
    _check_family(seq)
    f = seq[0].field
    parts = []
    for r, v in enumerate(seq):
        inherited = []
        seen = set()
        for i in range(r):
            if subspace_contains(v, seq[i]):
                for x in parts[i]:
                    if x not in seen:
                        seen.add(x)
                        inherited.append(x)
        ext = extend_rows(inherited, v.rows, f)
        parts.append(inherited + ext)
    out, seen = [], set()
    for p in parts:
        for x in p:
            if x not in seen:
                seen.add(x)
                out.append(x)
    return out


# -- coordination theorems --------------------------------------------------

def six_family(a, b, c):
    ab, ac, bc = intersect(a, b), intersect(a, c), intersect(b, c)
    return [intersect(ab, c), ab, ac, bc, a, b]


def eight_family(a, b, c, d):
    ab, ac, bc = intersect(a, b), intersect(a, c), intersect(b, c)
    abc = intersect(ab, c)
    return [intersect(abc, d), abc, d, ab, ac, bc, a, b]


def chain_grid(chain_a: Sequence[Subspace], chain_b: Sequence[Subspace]) -> list:
    return [intersect(x, y) for x in chain_a for y in chain_b]


def leave_one_out(fam: Sequence[Subspace]) -> list:
    """``V_0 = A_1 & ... & A_m`` followed by the intersections omitting one member."""
    m = len(fam)
    out = [intersect_all_list(fam)]
    for i in range(m):
        rest = [fam[k] for k in range(m) if k != i]
        out.append(intersect_all_list(rest))
    return out


def intersect_all_list(fam):
    acc = fam[0]
    for s in fam[1:]:
        acc = intersect(acc, s)
    return acc


def k_fold_family(fam: Sequence[Subspace], k: int) -> list:
    inter = subset_intersections(fam)
    return [inter[I] for I in combinations(range(len(fam)), k)]


def _is_chain(ch):
    return all(subspace_contains(ch[i + 1], ch[i]) for i in range(len(ch) - 1))


def coordination_theorem_suite(a, b, c, d=None, chains=None, family=None) -> dict:
    """Discoordination of each theorem's family; every value should be 0.

    Returns ``{name: (discoordination, passed)}``.
    """
    report = {}
    report["six_of_seven"] = discoordination(six_family(a, b, c))
    if d is not None:
        if not subspace_contains(intersect(a, b), d):
            raise ContractError("with_d: D must lie in A & B")
        report["with_d"] = discoordination(eight_family(a, b, c, d))
    if chains is not None:
        ca, cb = chains
        if not (_is_chain(ca) and _is_chain(cb)):
            raise ContractError("two_chains: sequences must be increasing")
        report["two_chains"] = discoordination(chain_grid(ca, cb))
    if family is not None:
        report["leave_one_out"] = discoordination(leave_one_out(family))
    return {k: (v, v == 0) for k, v in report.items()}


# -- lifting and the three-space decomposition -------------------------------

def pairwise_sum(a, b, c) -> Subspace:
    return sum_spaces(intersect(a, b), intersect(a, c), intersect(b, c))


def lift_triple(a, b, c, ta, tb, tc):
    """Adjust ``(ta, tb, tc)`` modulo ``S_2`` so the outputs satisfy ``a' + b' == c'``."""
    f, n = a.field, a.n
    pa, pb, pc = (f.pack(v, n) for v in (ta, tb, tc))
    for name, space, row in (("ta", a, pa), ("tb", b, pb), ("tc", c, pc)):
        if not space.has_row(row):
            raise ContractError(f"lift_triple: {name} is not in its subspace")
    ab, ac, bc = intersect(a, b), intersect(a, c), intersect(b, c)
    target = f.sub(f.add(pa, pb), pc)
    stacked = list(ab.rows) + list(ac.rows) + list(bc.rows)
    x = solve(Matrix(f, n, tuple(stacked)), f.unpack(target, n)) if stacked else (
        () if f.is_zero(target) else None)
    if x is None:
        raise ContractError("lift_triple: ta + tb - tc is not in S_2 (coset condition fails)")
    k1, k2 = ab.dim, ab.dim + ac.dim
    v1 = f.combine(x[:k1], stacked[:k1], n)
    v2 = f.combine(x[k1:k2], stacked[k1:k2], n)
    v3 = f.combine(x[k2:], stacked[k2:], n)
    ra = f.sub(pa, v1)
    rb = pb
    rc = f.add(f.add(pc, v2), v3)
    return f.unpack(ra, n), f.unpack(rb, n), f.unpack(rc, n)


@dataclass(frozen=True)
class ThreeDecomposition:
    u1_basis: tuple
    triples: tuple
    m: int
    factors: dict  # "A" / "B" / "C" -> (part in U1, part in U2)
    u1: Subspace
    u2: Subspace


def decompose_three(a: Subspace, b: Subspace, c: Subspace) -> ThreeDecomposition:
    """Split the ambient into a coordinated part and ``m`` copies of the basic counterexample."""
    _check_family([a, b, c])
    f, n = a.field, a.n
    ab, ac, bc = intersect(a, b), intersect(a, c), intersect(b, c)
    abc = intersect(ab, c)
    s2 = sum_spaces(ab, ac, bc)
    x = coordinating_basis([abc, ab, ac, bc])

    q = QuotientMap(s2)
    qa, qb, qc = (q.image_space(s) for s in (a, b, c))
    meet_space = intersect(sum_spaces(qa, qb), qc)
    m = meet_space.dim

    def preimage_in(qrows, qtarget):
        return solve(Matrix(f, q.target_dim, tuple(qrows)), f.unpack(qtarget, q.target_dim))

    a_img = [q.image_row(r) for r in a.rows]
    b_img = [q.image_row(r) for r in b.rows]
    c_img = [q.image_row(r) for r in c.rows]
    triples = []
    for crow in meet_space.rows:
        cc = preimage_in(c_img, crow)
        tc = f.combine(cc, c.rows, n)
        ab_coeffs = preimage_in(a_img + b_img, crow)
        ka = a.dim
        ta = f.combine(ab_coeffs[:ka], a.rows, n)
        tb = f.combine(ab_coeffs[ka:], b.rows, n)
        la, lb, lc = lift_triple(a, b, c, *(f.unpack(v, n) for v in (ta, tb, tc)))
        triples.append((la, lb, lc))

    tri_rows = [tuple(f.pack(v) for v in t) for t in triples]
    a_s2, b_s2, c_s2 = intersect(a, s2), intersect(b, s2), intersect(c, s2)
    a_extra = extend_rows(list(a_s2.rows) + [t[0] for t in tri_rows], a.rows, f)
    b_extra = extend_rows(list(b_s2.rows) + [t[1] for t in tri_rows], b.rows, f)
    c_extra = extend_rows(list(c_s2.rows) + [t[2] for t in tri_rows], c.rows, f)
    abc_sum = sum_spaces(a, b, c)
    y = extend_rows(abc_sum.rows, Subspace.full(n, f).rows, f)

    u1_rows = list(x) + a_extra + b_extra + c_extra + y
    u2_rows = [t[0] for t in tri_rows] + [t[1] for t in tri_rows]
    u1 = Subspace.from_rows(f, n, u1_rows)
    u2 = Subspace.from_rows(f, n, u2_rows)
    factors = {
        name: (intersect(s, u1), intersect(s, u2)) for name, s in (("A", a), ("B", b), ("C", c))
    }
    return ThreeDecomposition(
        u1_basis=tuple(f.unpack(r, n) for r in u1_rows),
        triples=tuple(triples),
        m=m,
        factors=factors,
        u1=u1,
        u2=u2,
    )


# -- quotient theorems ------------------------------------------------------

def images_mod(fam: Sequence[Subspace], d: Subspace) -> list:
    q = QuotientMap(d)
    return [q.image_space(s) for s in fam]


def quotient_discoord_check(a, b, c, d):
    """``(DisCoord(a, b, c), DisCoord of the images modulo d)`` for ``d`` inside ``a & b``."""
    if not subspace_contains(intersect(a, b), d):
        raise ContractError("quotient_discoord_check: d must lie in a & b")
    return discoordination([a, b, c]), discoordination(images_mod([a, b, c], d))


def quotient_by_sk_check(fam: Sequence[Subspace], k: int):
    m = len(fam)
    if not 1 <= k <= m:
        raise ContractError(f"k must be in 1..{m}")
    sk = s_chain(fam)[k - 1]
    lhs = discoordination(fam)
    rhs = discoordination(images_mod(fam, sk))
    return lhs, rhs, lhs == rhs


def three_way_mutual(a, b, c) -> int:
    """Inclusion-exclusion ``I(A;B;C)`` of dimensions."""
    return (
        a.dim + b.dim + c.dim
        - sum_spaces(a, b).dim - sum_spaces(a, c).dim - sum_spaces(b, c).dim
        + sum_spaces(a, b, c).dim
    )


__all__ = [
    "BRUTE_GUARD", "GuardExceeded", "MinimizerResult", "ThreeDecomposition",
    "meet", "s_chain", "discoordination", "discoordination_brute", "brute_minimizer",
    "discoord_at", "coordinates", "is_coordinated", "greedy_minimizer", "d_profile",
    "is_quasi_increasing", "is_strongly_quasi_increasing", "inclusion_sorted",
    "coordinating_basis", "six_family", "eight_family", "chain_grid", "leave_one_out",
    "k_fold_family", "coordination_theorem_suite", "pairwise_sum", "lift_triple",
    "decompose_three", "images_mod", "quotient_discoord_check", "quotient_by_sk_check",
    "three_way_mutual", "quotient_dim",
]
