"""User/document permutation action, orbits, and symmetrization.

A group element is a pair ``(kappa, nu)`` of permutations, written as
1-indexed tuples: ``kappa[j-1]`` is the image of user ``j`` and ``nu[i-1]``
the image of document ``i``.  It sends the demand ``d`` to ``d'`` with
``d'[kappa(j)] = nu(d[j])``; if ``X_d`` serves ``d`` then the relabeled
broadcast serves ``d'``.
"""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Sequence

from ..gf import ContractError
from ..subspace import Subspace
from .model import CachingScheme, all_demands


def group(N: int, K: int) -> list:
    perms_k = list(permutations(range(1, K + 1)))
    perms_n = list(permutations(range(1, N + 1)))
    return [(k, v) for k in perms_k for v in perms_n]


def inverse(perm: Sequence[int]) -> tuple:
    out = [0] * len(perm)
    for i, x in enumerate(perm, start=1):
        out[x - 1] = i
    return tuple(out)


def compose(a: Sequence[int], b: Sequence[int]) -> tuple:
    """``a o b`` (apply ``b`` first)."""
    return tuple(a[x - 1] for x in b)


def act_demand(d: Sequence[int], kappa: Sequence[int], nu: Sequence[int]) -> tuple:
    out = [0] * len(d)
    for j, dj in enumerate(d, start=1):
        out[kappa[j - 1] - 1] = nu[dj - 1]
    return tuple(out)


def permute_space(s: Subspace, perm: Sequence[int], n_out: int = None) -> Subspace:
    """Image of ``s`` under the coordinate map ``i -> perm[i]``."""
    f = s.field
    n_out = s.n if n_out is None else n_out
    rows = []
    for r in s.rows:
        v = [0] * n_out
        for i, x in enumerate(f.unpack(r, s.n)):
            if x:
                v[perm[i]] = x
        rows.append(f.pack(v))
    return Subspace.from_rows(f, n_out, rows)


def orbit_fill(reps: dict, perm_fn: Callable, N: int, K: int) -> dict:
    """Extend broadcasts given on orbit representatives to every demand.

    ``perm_fn(kappa, nu)`` must return the coordinate permutation realizing
    the group element on the scheme's ambient.
    """
    out = dict(reps)
    G = group(N, K)
    for d in all_demands(N, K):
        if d in out:
            continue
        for r in reps:
            g = next(((k, v) for k, v in G if act_demand(r, k, v) == d), None)
            if g is not None:
                out[d] = permute_space(reps[r], perm_fn(*g))
                break
        else:
            raise ContractError(f"demand {d} is not in the orbit of any representative")
    return out


def is_symmetric_under(s: CachingScheme, perm: Sequence[int], kappa, nu) -> bool:
    """Check that ``perm`` maps ``W_i -> W_nu(i)``, ``Z_j -> Z_kappa(j)``, ``X_d -> X_(kappa,nu)d``."""
    for i in range(1, s.N + 1):
        if permute_space(s.doc(i), perm) != s.doc(nu[i - 1]):
            return False
    for j in range(1, s.K + 1):
        if permute_space(s.cache(j), perm) != s.cache(kappa[j - 1]):
            return False
    for d, x in s.broadcasts.items():
        d2 = act_demand(d, kappa, nu)
        if d2 not in s.broadcasts or permute_space(x, perm) != s.broadcasts[d2]:
            return False
    return True


def is_symmetric(s: CachingScheme, perm_fn: Callable) -> bool:
    return all(is_symmetric_under(s, perm_fn(k, v), k, v) for k, v in group(s.N, s.K))


def symmetrize(s: CachingScheme) -> CachingScheme:
    """Concatenate the ``K! * N!`` relabeled copies of ``s``.

    Copy ``t`` (group element ``g_t = (kappa, nu)``) places original bit
    ``f`` of document ``o`` at bit ``t*F + f`` of document ``nu(o)``, so
    every new document is still one contiguous block.
    """
    missing = s.missing_demands()
    if missing:
        raise ContractError(
            f"symmetrize needs every demand; missing {len(missing)}, e.g. {missing[:3]}"
        )
    G = group(s.N, s.K)
    F, N, K = s.F, s.N, s.K
    F2 = len(G) * F
    n2 = N * F2
    f = s.field

    def embed(t, nu):
        perm = [0] * (N * F)
        for o in range(1, N + 1):
            for b in range(F):
                perm[(o - 1) * F + b] = (nu[o - 1] - 1) * F2 + t * F + b
        return perm

    embeds = [embed(t, nu) for t, (_, nu) in enumerate(G)]

    def direct_sum(pick):
        rows = []
        for t, (kappa, nu) in enumerate(G):
            rows.extend(permute_space(pick(kappa, nu), embeds[t], n2).rows)
        return Subspace.from_rows(f, n2, rows)

    caches = tuple(
        direct_sum(lambda kappa, nu, j=j: s.cache(inverse(kappa)[j - 1])) for j in range(1, K + 1)
    )
    broadcasts = {}
    for d2 in all_demands(N, K):
        def pick(kappa, nu, d2=d2):
            nu_inv = inverse(nu)
            d = tuple(nu_inv[d2[kappa[j] - 1] - 1] for j in range(K))
            return s.broadcasts[d]
        broadcasts[d2] = direct_sum(pick)
    name = f"sym({s.name})" if s.name else "symmetrized"
    return CachingScheme(f, N, K, F2, caches, broadcasts, name)


def symmetrized_witness(s: CachingScheme, kappa, nu) -> list:
    """Coordinate permutation of ``symmetrize(s)`` realizing ``(kappa, nu)``."""
    G = group(s.N, s.K)
    index = {g: t for t, g in enumerate(G)}
    F, N = s.F, s.N
    F2 = len(G) * F
    perm = [0] * (N * F2)
    for i in range(1, N + 1):
        for t, (k_t, v_t) in enumerate(G):
            t2 = index[(compose(kappa, k_t), compose(nu, v_t))]
            for b in range(F):
                perm[(i - 1) * F2 + t * F + b] = (nu[i - 1] - 1) * F2 + t2 * F + b
    return perm
