"""Built-in caching schemes over GF(2).

Documents are called A, B, C (W_1, W_2, W_3).  For schemes split into three
parts per document, part ``j`` of document ``i`` is the contiguous run of
``F/3`` bits starting at ``(i-1)*F + (j-1)*F/3``.
"""

from __future__ import annotations

from typing import Callable, Dict

from ..gf import GF2, ContractError
from ..subspace import Subspace
from .model import CachingScheme, all_demands, coord, scheme_from_vectors
from .symmetry import orbit_fill

NAMES = ("man-22", "man-33", "new-half", "full", "empty", "lopsided", "tian-caches")


def _sp(n, gens):
    rows = []
    for g in gens:
        v = 0
        for i in g:
            v ^= 1 << i
        rows.append(v)
    return Subspace.from_rows(GF2, n, rows)


# -- permutation helpers ---------------------------------------------------

def part_bit(i: int, j: int, s: int, F: int) -> int:
    """Bit ``s`` (0-based) of part ``j`` of document ``i`` for a three-part split."""
    return (i - 1) * F + (j - 1) * (F // 3) + s


def split_perm(N: int, F: int) -> Callable:
    """Coordinate action for a three-part split: part ``j`` of doc ``i`` -> part ``kappa(j)`` of doc ``nu(i)``."""
    w = F // 3

    def fn(kappa, nu):
        perm = [0] * (N * F)
        for i in range(1, N + 1):
            for j in range(1, 4):
                for s in range(w):
                    perm[part_bit(i, j, s, F)] = part_bit(nu[i - 1], kappa[j - 1], s, F)
        return perm

    return fn


def doc_perm(N: int, F: int) -> Callable:
    def fn(kappa, nu):
        perm = [0] * (N * F)
        for i in range(1, N + 1):
            for b in range(1, F + 1):
                perm[coord(i, b, F)] = coord(nu[i - 1], b, F)
        return perm

    return fn


# -- man-22 ----------------------------------------------------------------

def man22() -> CachingScheme:
    # A1 A2 | B1 B2 at indices 0 1 | 2 3
    A1, A2, B1, B2 = 0, 1, 2, 3
    return scheme_from_vectors(
        2, 2, 2,
        caches=[[{A1, B1}], [{A2, B2}]],
        broadcasts={
            (1, 1): [{A1}, {A2}],
            (2, 2): [{B1}, {B2}],
            # the two coded users each miss one raw bit of the other's document
            (1, 2): [{A2}, {B1}],
            (2, 1): [{A1}, {B2}],
        },
        name="man-22",
    )


# -- man-33 ----------------------------------------------------------------

def _man_broadcast(d, F=3):
    """Pairwise MAN delivery: ``w_{d_j,k} + w_{d_k,j}`` for users ``j < k``."""
    K = len(d)
    gens = []
    for j in range(1, K + 1):
        for k in range(j + 1, K + 1):
            gens.append({coord(d[j - 1], k, F), coord(d[k - 1], j, F)})
    return gens


def man33() -> CachingScheme:
    N = K = F = 3
    n = N * F
    caches = [[{coord(i, j, F)} for i in range(1, 4)] for j in range(1, 4)]
    reps = {
        (1, 2, 3): _sp(n, _man_broadcast((1, 2, 3))),
        (1, 1, 1): _sp(n, [{coord(1, b, F)} for b in range(1, 4)]),
        (1, 1, 2): _sp(n, _man_broadcast((1, 1, 2))),
    }
    s = scheme_from_vectors(N, K, F, caches, name="man-33")
    return s.with_broadcasts(orbit_fill(reps, split_perm(N, F), N, K))


# -- new-half ----------------------------------------------------------------

def nh_bit(i: int, j: int, k: int) -> int:
    """Bit of document ``i`` in block ``j`` reserved for partner document ``k != i``."""
    slot = sorted(x for x in (1, 2, 3) if x != i).index(k)
    return (i - 1) * 6 + (j - 1) * 2 + slot


def nh_perm(kappa, nu):
    perm = [0] * 18
    for i in range(1, 4):
        for j in range(1, 4):
            for k in range(1, 4):
                if k != i:
                    perm[nh_bit(i, j, k)] = nh_bit(nu[i - 1], kappa[j - 1], nu[k - 1])
    return perm


def _nh_names():
    # a_j' pairs A with B, a_j'' pairs A with C, and so on
    names = {}
    for j in range(1, 4):
        names[f"a{j}'"] = nh_bit(1, j, 2)
        names[f"a{j}''"] = nh_bit(1, j, 3)
        names[f"b{j}'"] = nh_bit(2, j, 1)
        names[f"b{j}''"] = nh_bit(2, j, 3)
        names[f"c{j}'"] = nh_bit(3, j, 1)
        names[f"c{j}''"] = nh_bit(3, j, 2)
    return names


def _gens(expr_list):
    nm = _nh_names()
    return [{nm[t] for t in e.split("+")} for e in expr_list]


def new_half() -> CachingScheme:
    n = 18
    caches = [
        _gens([f"a{j}'+b{j}'", f"a{j}''+c{j}'", f"b{j}''+c{j}''"]) for j in range(1, 4)
    ]
    x123 = _gens([
        "a2'", "a3''", "b1'", "b3''", "c1'", "c2''",
        "a2''+b1''+c1''", "a3'+b1''+c1''", "a2''+b1''+c2'",
        "a2''+b3'+c2'", "a3'+b3'+c1''", "a3'+b3'+c2'",
    ])
    x112 = _gens([
        "a1''", "a2''", "a3''", "b1''", "b2''", "b3''", "b1'", "b2'", "a3'", "a1'+a2'",
    ])
    x111 = [{b} for b in range(6)]
    reps = {(1, 2, 3): _sp(n, x123), (1, 1, 1): _sp(n, x111), (1, 1, 2): _sp(n, x112)}
    s = scheme_from_vectors(3, 3, 6, caches, name="new-half")
    return s.with_broadcasts(orbit_fill(reps, nh_perm, 3, 3))


# -- simple schemes ----------------------------------------------------------

def full(N=3, K=3, F=3) -> CachingScheme:
    everything = [{i} for i in range(N * F)]
    return scheme_from_vectors(
        N, K, F, [everything] * K, {d: [] for d in all_demands(N, K)}, name="full"
    )


def empty(N=3, K=3, F=3) -> CachingScheme:
    bc = {}
    for d in all_demands(N, K):
        bc[d] = [{coord(i, b, F)} for i in sorted(set(d)) for b in range(1, F + 1)]
    return scheme_from_vectors(N, K, F, [[]] * K, bc, name="empty")


def lopsided(F=3) -> CachingScheme:
    """``Z_i = W_i``; ``X_d`` sends ``w_j + w_{d_j}`` bitwise for every user with ``d_j != j``."""
    N = K = 3
    caches = [[{coord(i, b, F)} for b in range(1, F + 1)] for i in range(1, 4)]
    bc = {}
    for d in all_demands(N, K):
        gens = []
        for j in range(1, 4):
            if d[j - 1] != j:
                gens += [{coord(j, b, F), coord(d[j - 1], b, F)} for b in range(1, F + 1)]
        bc[d] = gens
    return scheme_from_vectors(N, K, F, caches, bc, name="lopsided")


def tian_caches(F=3) -> CachingScheme:
    """Caches only: ``Z_j`` spanned by ``a_j + b_j`` and ``b_j + c_j`` on part ``j``."""
    if F % 3:
        raise ContractError("tian-caches needs F divisible by 3")
    w = F // 3
    caches = []
    for j in range(1, 4):
        gens = []
        for s in range(w):
            a, b, c = (part_bit(i, j, s, F) for i in (1, 2, 3))
            gens += [{a, b}, {b, c}]
        caches.append(gens)
    return scheme_from_vectors(3, 3, F, caches, name="tian-caches")


_BUILDERS: Dict[str, Callable] = {
    "man-22": man22,
    "man-33": man33,
    "new-half": new_half,
    "full": full,
    "empty": empty,
    "lopsided": lopsided,
    "tian-caches": tian_caches,
}


def builtin(name: str) -> CachingScheme:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise ContractError(f"unknown builtin {name!r}; choose from {', '.join(NAMES)}") from None


def symmetry_action(name: str) -> Callable:
    """Coordinate action witnessing symmetry of a symmetric built-in."""
    if name in ("man-33", "tian-caches"):
        return split_perm(3, 3)
    if name == "new-half":
        return nh_perm
    if name in ("full", "empty"):
        return doc_perm(3, 3)
    raise ContractError(f"{name} has no symmetry action")
