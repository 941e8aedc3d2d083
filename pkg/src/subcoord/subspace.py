"""Canonical subspaces of GF(p)^n and their lattice operations.

A :class:`Subspace` keeps its basis in reduced row-echelon form, so two
subspaces are equal exactly when their stored rows agree.  Instances are
immutable and hashable.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

from .gf import GF2, ContractError, Field, Matrix, as_field, reduce_row, rref_rows, solve

Vector = tuple


class Subspace:
    """Subspace of GF(p)^n with a canonical RREF basis."""

    __slots__ = ("field", "n", "rows", "pivots", "_hash")

    def __init__(self, field: Field, n: int, rows: Sequence, pivots: Sequence[int]):
        # trusted constructor: rows must already be in RREF
        self.field = field
        self.n = n
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self._hash = None

    # construction --------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, n: int, rows: Iterable) -> "Subspace":
        """Span of already-packed rows."""
        r, piv = rref_rows(field, rows)
        return cls(field, n, r, piv)

    @classmethod
    def zero(cls, n: int, field=GF2) -> "Subspace":
        return cls(as_field(field), n, (), ())

    @classmethod
    def full(cls, n: int, field=GF2) -> "Subspace":
        f = as_field(field)
        return cls(f, n, [f.unit(i, n) for i in range(n)], range(n))

    @classmethod
    def coordinate(cls, indices: Iterable[int], n: int, field=GF2) -> "Subspace":
        """The coordinate subspace spanned by ``e_i`` for ``i`` in ``indices``."""
        f = as_field(field)
        idx = sorted(set(indices))
        if idx and (idx[0] < 0 or idx[-1] >= n):
            raise ContractError(f"coordinate index out of range for ambient {n}")
        return cls(f, n, [f.unit(i, n) for i in idx], idx)

    # basic properties ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient_dim(self) -> int:
        return self.n

    @property
    def basis(self) -> tuple:
        f, n = self.field, self.n
        return tuple(f.unpack(r, n) for r in self.rows)

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.n, self.rows)

    def reduce(self, row):
        """Packed remainder of a packed row modulo this subspace."""
        return reduce_row(self.field, row, self.rows, self.pivots)

    def has_row(self, row) -> bool:
        return self.field.is_zero(self.reduce(row))

    def contains(self, v: Sequence[int]) -> bool:
        return self.has_row(self.field.pack(v, self.n))

    def elements(self):
        """Iterate over every vector of the subspace (packed).  Small spaces only."""
        f, n, p = self.field, self.n, self.field.p
        rows = self.rows
        coeffs = [0] * len(rows)
        while True:
            yield f.combine(coeffs, rows, n)
            k = 0
            while k < len(coeffs):
                coeffs[k] += 1
                if coeffs[k] < p:
                    break
                coeffs[k] = 0
                k += 1
            else:
                return

    def _check(self, other: "Subspace"):
        if self.n != other.n or self.field != other.field:
            raise ContractError(
                f"ambient mismatch: GF({self.field.p})^{self.n} vs GF({other.field.p})^{other.n}"
            )

    # lattice operators -----------------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_spaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        return subspace_contains(other, self)

    def __ge__(self, other: "Subspace") -> bool:
        return subspace_contains(self, other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field, self.n, self.rows) == (other.field, other.n, other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.n, self.rows))
        return self._hash

    def __repr__(self):
        f, n = self.field, self.n
        gens = ",".join("".join(map(str, f.unpack(r, n))) for r in self.rows)
        return f"Subspace(GF({f.p})^{n}, dim={self.dim}, [{gens}])"


# -- module-level operations ----------------------------------------------

def span(vectors: Iterable[Sequence[int]], ambient_dim: int, field=GF2) -> Subspace:
    f = as_field(field)
    return Subspace.from_rows(f, ambient_dim, [f.pack(v, ambient_dim) for v in vectors])


def sum_spaces(*spaces: Subspace) -> Subspace:
    if not spaces:
        raise ContractError("sum of no subspaces needs an ambient")
    first = spaces[0]
    rows = []
    for s in spaces:
        first._check(s)
        rows.extend(s.rows)
    return Subspace.from_rows(first.field, first.n, rows)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus intersection.

    Rows ``(a, a)`` and ``(b, 0)`` are row reduced together; rows whose
    first half vanishes carry a basis of the intersection in their second half.
    """
    a._check(b)
    f, n = a.field, a.n
    if not a.rows or not b.rows:
        return Subspace.zero(n, f)
    if a.dim == n:
        return b
    if b.dim == n:
        return a
    zero = f.zero(n)
    stacked = [f.concat(r, n, r) for r in a.rows] + [f.concat(r, n, zero) for r in b.rows]
    rows, piv = rref_rows(f, stacked)
    out = [f.split(r, n, n)[1] for r, q in zip(rows, piv) if q >= n]
    return Subspace.from_rows(f, n, out)


def intersect_all(spaces: Sequence[Subspace]) -> Subspace:
    it = iter(spaces)
    acc = next(it)
    for s in it:
        acc = intersect(acc, s)
    return acc


def contains(a: Subspace, v: Sequence[int]) -> bool:
    if len(v) != a.n:
        raise ContractError(f"vector has length {len(v)}, ambient is {a.n}")
    return a.contains(v)


def subspace_contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    a._check(b)
    return all(a.has_row(r) for r in b.rows)


def quotient_dim(a: Subspace, w: Subspace) -> int:
    """Dimension of the image of ``a`` in the quotient by ``w``."""
    return a.dim - intersect(a, w).dim


def relative_rows(u: Subspace, w: Subspace) -> list:
    """Packed rows of ``u`` (RREF order) that stay independent modulo ``w``."""
    u._check(w)
    f = u.field
    acc_rows, acc_piv = list(w.rows), list(w.pivots)
    picked = []
    for r in u.rows:
        red = reduce_row(f, r, acc_rows, acc_piv)
        if f.is_zero(red):
            continue
        picked.append(r)
        acc_rows, acc_piv = rref_rows(f, acc_rows + [red])
    return picked


def relative_basis(u: Subspace, w: Subspace) -> list:
    """Basis of ``u`` relative to ``w`` (requires ``w`` inside ``u``)."""
    if not subspace_contains(u, w):
        raise ContractError("relative_basis requires w to be contained in u")
    return [u.field.unpack(r, u.n) for r in relative_rows(u, w)]


def extend_rows(base_rows: Sequence, candidates: Iterable, field: Field) -> list:
    """Candidates (in order) that are independent of ``base_rows`` and each other."""
    acc_rows, acc_piv = rref_rows(field, list(base_rows))
    picked = []
    for r in candidates:
        red = reduce_row(field, r, acc_rows, acc_piv)
        if field.is_zero(red):
            continue
        picked.append(r)
        acc_rows, acc_piv = rref_rows(field, list(acc_rows) + [red])
    return picked


def independent(family: Sequence[Subspace]) -> bool:
    total = sum_spaces(*family)
    return sum(s.dim for s in family) == total.dim


def rows_independent(field: Field, rows: Sequence) -> bool:
    return len(rref_rows(field, list(rows))[0]) == len(rows)


def factors_through(a: Subspace, parts: Sequence[Subspace]) -> bool:
    """True iff ``sum(dim(a & U_i)) == dim(a)``."""
    for u in parts:
        a._check(u)
    return sum(intersect(a, u).dim for u in parts) == a.dim


def is_decomposition(parts: Sequence[Subspace], ambient: Optional[Subspace] = None) -> bool:
    """Parts independent and (when given) summing to ``ambient``."""
    if not independent(parts):
        return False
    if ambient is not None:
        return sum_spaces(*parts) == ambient
    return True


def subset_intersections(family: Sequence[Subspace]) -> dict:
    """Map every nonempty index subset (sorted tuple) to the intersection A_I."""
    m = len(family)
    out = {}
    for k in range(1, m + 1):
        for idx in combinations(range(m), k):
            if k == 1:
                out[idx] = family[idx[0]]
            else:
                out[idx] = intersect(out[idx[:-1]], family[idx[-1]])
    return out


class QuotientMap:
    """Linear map from GF(p)^n onto GF(p)^(n - dim d) with kernel exactly ``d``.

    A vector is reduced by the RREF rows of ``d`` and the non-pivot
    coordinates of the remainder are kept.
    """

    def __init__(self, d: Subspace):
        self.d = d
        self.field = d.field
        piv = set(d.pivots)
        self.free = [i for i in range(d.n) if i not in piv]
        self.target_dim = len(self.free)

    def image_row(self, row):
        f = self.field
        return f.select(self.d.reduce(row), self.free)

    def image(self, v: Sequence[int]) -> tuple:
        f = self.field
        return f.unpack(self.image_row(f.pack(v, self.d.n)), self.target_dim)

    def image_space(self, a: Subspace) -> Subspace:
        self.d._check(a)
        return Subspace.from_rows(self.field, self.target_dim, [self.image_row(r) for r in a.rows])

    def lift_row(self, row):
        """A preimage of a packed quotient row (zero on the pivots of ``d``)."""
        f, n = self.field, self.d.n
        vals = [0] * n
        for k, i in enumerate(self.free):
            vals[i] = f.get(row, k)
        return f.pack(vals)


def express(space_rows: Sequence, field: Field, n: int, row) -> Optional[tuple]:
    """Coefficients ``x`` with ``x @ rows == row`` or ``None``."""
    m = Matrix(field, n, tuple(space_rows))
    return solve(m, field.unpack(row, n))
