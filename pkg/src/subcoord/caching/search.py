"""Searching for small broadcasts ``X_d`` given the caches."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from ..discoord import GuardExceeded
from ..gf import ContractError, reduce_row, rref_rows
from ..subspace import QuotientMap, Subspace, extend_rows, intersect, sum_spaces
from .model import CachingScheme, all_demands

AMBIENT_GUARD = 1 << 12
CACHE_GUARD = 1 << 12
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class SearchResult:
    space: Subspace
    mode: str
    minimal: bool  # True when an exact mode certifies the dimension
    lower_bound: int
    candidates: int

    @property
    def dim(self) -> int:
        return self.space.dim


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_subspaces(n: int, k: int, field):
    """Yield packed RREF bases of every ``k``-dimensional subspace of GF(p)^n, once each."""
    p = field.p
    for piv in combinations(range(n), k):
        pset = set(piv)
        slots = [(r, c) for r, q in enumerate(piv) for c in range(q + 1, n) if c not in pset]
        for vals in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, q in enumerate(piv):
                rows[r][q] = 1
            for (r, c), v in zip(slots, vals):
                rows[r][c] = v
            yield [field.pack(row) for row in rows], piv


def _targets(s: CachingScheme, d):
    """Per user: quotient map by ``Z_j`` and the image of ``W_{d_j}``."""
    out = []
    for j in range(1, s.K + 1):
        q = QuotientMap(s.cache(j))
        out.append((q, q.image_space(s.doc(d[j - 1]))))
    return out


def _serves(targets, rows, field) -> bool:
    for q, t in targets:
        if t.dim == 0:
            continue
        img = Subspace.from_rows(field, q.target_dim, [q.image_row(r) for r in rows])
        if img.dim < t.dim or not all(img.has_row(r) for r in t.rows):
            return False
    return True


def search_min_x(s: CachingScheme, d, mode: str = "exhaustive", budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Broadcast serving demand ``d`` with the caches of ``s``.

    ``exhaustive`` is exact: user ``j`` decodes iff every needed basis vector
    ``w`` of ``W_{d_j}`` equals ``x + z`` with ``x`` in ``X`` and ``z`` in
    ``Z_j``, so some minimum ``X`` is spanned by one lift ``w - z`` per
    uncovered need.  A depth-first search over the choices of ``z`` (with
    already-covered needs skipped) finds it; ``budget`` caps visited nodes.

    ``subspaces`` is also exact but scans every subspace by dimension; it
    needs ``p^(NF) <= 2^12`` and serves as an independent cross-check.
    ``greedy`` adds missing raw bits and then drops redundant ones.
    """
    d = tuple(d)
    if len(d) != s.K or not all(1 <= x <= s.N for x in d):
        raise ContractError(f"bad demand {d}")
    targets = _targets(s, d)
    lower = max(t.dim for _, t in targets)
    if mode == "greedy":
        return _greedy(s, d, targets, lower)
    if mode == "subspaces":
        return _by_subspaces(s, targets, lower, budget)
    if mode != "exhaustive":
        raise ContractError(f"unknown search mode {mode!r}")
    return _by_lifts(s, d, lower, budget)


def _by_lifts(s, d, lower, budget) -> SearchResult:
    f, n = s.field, s.n
    needs = []  # (j, w) with w outside Z_j
    for j in range(1, s.K + 1):
        z = s.cache(j)
        if f.p ** z.dim > CACHE_GUARD:
            raise GuardExceeded("search cache guard p^dim(Z_j) <= 2^12", f"Z_{j} has dim {z.dim}")
        w = s.doc(d[j - 1])
        for r in extend_rows(intersect(w, z).rows, w.rows, f):
            needs.append((j - 1, r))
    zs = [list(s.cache(j).elements()) for j in range(1, s.K + 1)]
    # work per user modulo Z_j: X serves j iff its image spans the image of W_{d_j}
    qs = [QuotientMap(s.cache(j)) for j in range(1, s.K + 1)]
    want = [rref_rows(f, [q.image_row(r) for r in s.doc(d[j]).rows])[0] for j, q in enumerate(qs)]
    best = [len(needs) + 1, None]
    visited = [0]

    def add(state, v):
        out = []
        for q, (rows, piv) in zip(qs, state):
            red = reduce_row(f, q.image_row(v), rows, piv)
            out.append((rows, piv) if f.is_zero(red) else rref_rows(f, list(rows) + [red]))
        return out

    def gap(state):
        return max(len(rref_rows(f, list(rows) + w)[0]) - len(rows) for (rows, _), w in zip(state, want))

    def dfs(k, xs, state):
        visited[0] += 1
        if visited[0] > budget:
            raise GuardExceeded("search budget", f"visited {budget} nodes without finishing")
        while k < len(needs):
            j, w = needs[k]
            rows, piv = state[j]
            if not f.is_zero(reduce_row(f, qs[j].image_row(w), rows, piv)):
                break
            k += 1
        if k == len(needs):
            if len(xs) < best[0]:
                best[0], best[1] = len(xs), list(xs)
            return
        # each user still misses at least this many dimensions of its document
        if len(xs) + gap(state) >= best[0]:
            return
        j, w = needs[k]
        for z in zs[j]:
            v = f.sub(w, z)
            dfs(k + 1, xs + [v], add(state, v))
            if best[0] == lower:
                return

    dfs(0, [], [([], []) for _ in qs])
    x = Subspace.from_rows(f, n, best[1])
    return SearchResult(x, "exhaustive", True, lower, visited[0])


def _by_subspaces(s, targets, lower, budget) -> SearchResult:
    f, n = s.field, s.n
    if f.p ** n > AMBIENT_GUARD:
        raise GuardExceeded("search ambient guard p^(NF) <= 2^12", f"GF({f.p})^{n}")
    seen = 0
    for k in range(lower, n + 1):
        count = gaussian_binomial(n, k, f.p)
        if seen + count > budget:
            raise GuardExceeded(
                "search budget",
                f"dimension {k} has {count} subspaces; {seen} already checked, budget {budget}",
            )
        for rows, _ in rref_subspaces(n, k, f):
            seen += 1
            if _serves(targets, rows, f):
                return SearchResult(Subspace.from_rows(f, n, rows), "subspaces", True, lower, seen)
    raise AssertionError("the full space always serves every demand")


def _greedy(s, d, targets, lower) -> SearchResult:
    f, n = s.field, s.n
    rows = []
    for j in range(1, s.K + 1):
        have = sum_spaces(s.cache(j), Subspace.from_rows(f, n, rows))
        for i in range((d[j - 1] - 1) * s.F, d[j - 1] * s.F):
            u = f.unit(i, n)
            if not have.has_row(u):
                rows.append(u)
                have = Subspace.from_rows(f, n, list(have.rows) + [u])
    k = 0
    while k < len(rows):
        trial = rows[:k] + rows[k + 1:]
        if _serves(targets, trial, f):
            rows = trial
        else:
            k += 1
    x = Subspace.from_rows(f, n, rows)
    return SearchResult(x, "greedy", x.dim == lower, lower, 0)


def fill_broadcasts(s: CachingScheme, mode: str = "exhaustive", demands=None, **kw) -> CachingScheme:
    """Scheme with every listed demand's broadcast replaced by a search result."""
    demands = all_demands(s.N, s.K) if demands is None else demands
    bc = dict(s.broadcasts)
    for d in demands:
        bc[tuple(d)] = search_min_x(s, d, mode, **kw).space
    return s.with_broadcasts(bc)
