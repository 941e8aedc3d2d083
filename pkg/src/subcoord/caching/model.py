"""Linear coded-caching schemes and their verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Optional, Sequence, Tuple

from ..gf import GF2, ContractError, Field, as_field
from ..subspace import Subspace, sum_spaces

Demand = Tuple[int, ...]


def doc_block(i: int, N: int, F: int, fld: Field = GF2) -> Subspace:
    """Document ``W_i`` (1-indexed): coordinates ``(i-1)*F .. i*F - 1``."""
    return Subspace.coordinate(range((i - 1) * F, i * F), N * F, fld)


def coord(i: int, f: int, F: int) -> int:
    """Index of bit ``f`` (1-indexed) of document ``i`` (1-indexed)."""
    return (i - 1) * F + (f - 1)


def all_demands(N: int, K: int):
    return [tuple(d) for d in product(range(1, N + 1), repeat=K)]


def is_distinct(d: Demand) -> bool:
    return len(set(d)) == len(d)


@dataclass(frozen=True)
class CachingScheme:
    field: Field
    N: int
    K: int
    F: int
    caches: tuple  # Z_1..Z_K
    broadcasts: Dict[Demand, Subspace] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        n = self.N * self.F
        if len(self.caches) != self.K:
            raise ContractError(f"expected {self.K} caches, got {len(self.caches)}")
        for s in list(self.caches) + list(self.broadcasts.values()):
            if s.n != n or s.field != self.field:
                raise ContractError(f"subspace ambient must be GF({self.field.p})^{n}")
        for d in self.broadcasts:
            if len(d) != self.K or not all(1 <= x <= self.N for x in d):
                raise ContractError(f"bad demand vector {d}")

    @property
    def n(self) -> int:
        return self.N * self.F

    @property
    def docs(self) -> tuple:
        return tuple(doc_block(i, self.N, self.F, self.field) for i in range(1, self.N + 1))

    def doc(self, i: int) -> Subspace:
        return doc_block(i, self.N, self.F, self.field)

    def cache(self, j: int) -> Subspace:
        return self.caches[j - 1]

    @property
    def complete(self) -> bool:
        return len(self.broadcasts) == self.N ** self.K

    def missing_demands(self) -> list:
        return [d for d in all_demands(self.N, self.K) if d not in self.broadcasts]

    def with_broadcasts(self, broadcasts: dict) -> "CachingScheme":
        return CachingScheme(self.field, self.N, self.K, self.F, self.caches, dict(broadcasts), self.name)


@dataclass(frozen=True)
class Failure:
    demand: Demand
    user: int
    witness: tuple


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    complete: bool
    failures: tuple
    checked: int


def decodes(s: CachingScheme, d: Demand, j: int, x: Optional[Subspace] = None) -> Optional[tuple]:
    """``None`` when user ``j`` recovers ``W_{d_j}``; otherwise a witness vector."""
    x = s.broadcasts[d] if x is None else x
    have = sum_spaces(s.cache(j), x)
    f = s.field
    for i in range((d[j - 1] - 1) * s.F, d[j - 1] * s.F):
        u = f.unit(i, s.n)
        if not have.has_row(u):
            return f.unpack(u, s.n)
    return None


def verify_scheme(s: CachingScheme) -> VerifyReport:
    failures = []
    for d in sorted(s.broadcasts):
        for j in range(1, s.K + 1):
            w = decodes(s, d, j)
            if w is not None:
                failures.append(Failure(d, j, w))
    return VerifyReport(
        valid=not failures,
        complete=s.complete,
        failures=tuple(failures),
        checked=len(s.broadcasts),
    )


def _avg(vals) -> Fraction:
    vals = list(vals)
    return Fraction(sum(vals), len(vals)) if vals else Fraction(0)


def memory_rate(s: CachingScheme):
    """``(M, R, M_avg, R_avg)`` as exact fractions over the supplied data."""
    F = s.F
    zd = [z.dim for z in s.caches]
    xd = [x.dim for x in s.broadcasts.values()]
    M = Fraction(max(zd), F)
    R = Fraction(max(xd), F) if xd else Fraction(0)
    return M, R, _avg(zd) / F, _avg(xd) / F


def rate_over(s: CachingScheme, demands) -> Tuple[Fraction, Fraction]:
    """``(max, average)`` of ``dim X_d / F`` over the supplied demands in ``demands``."""
    dims = [s.broadcasts[d].dim for d in demands if d in s.broadcasts]
    if not dims:
        return Fraction(0), Fraction(0)
    return Fraction(max(dims), s.F), _avg(dims) / s.F


def distinct_rates(s: CachingScheme) -> Tuple[Fraction, Fraction]:
    return rate_over(s, [d for d in s.broadcasts if is_distinct(d)])


def scheme_from_vectors(N, K, F, caches, broadcasts=None, fld=GF2, name="") -> CachingScheme:
    """Build a scheme from generator lists given as index sets (each set is one 0/1 vector)."""
    fld = as_field(fld)
    n = N * F

    def sp(gens):
        rows = []
        for g in gens:
            v = [0] * n
            for i in g:
                v[i] ^= 1
            rows.append(fld.pack(v))
        return Subspace.from_rows(fld, n, rows)

    zs = tuple(sp(g) for g in caches)
    xs = {tuple(d): sp(g) for d, g in (broadcasts or {}).items()}
    return CachingScheme(fld, N, K, F, zs, xs, name)
