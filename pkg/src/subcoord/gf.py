"""Exact dense linear algebra over prime fields GF(p).

Rows are stored packed.  Over GF(2) a row is a Python ``int`` whose bit ``i``
holds coordinate ``i``; over larger primes a row is a ``bytes`` object of
length ``n``.  Public helpers accept and return plain tuples of ints, so
callers never need to know which packing is in use.

Vectors multiply matrices from the left: ``solve(m, b)`` finds ``x`` with
``x @ m == b``.  ``kernel(m)`` is the right kernel ``{x : m @ x^T == 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Row = object  # int for p == 2, bytes otherwise


class ContractError(ValueError):
    """Raised when an operation's precondition is violated."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """The prime field GF(p), with row packing helpers."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ContractError(f"field modulus must be prime, got {self.p!r}")
        if self.p >= 256:
            raise ContractError(f"field modulus must be < 256, got {self.p}")

    @property
    def binary(self) -> bool:
        return self.p == 2

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    # packing -------------------------------------------------------------

    def pack(self, coords: Sequence[int], n: Optional[int] = None) -> Row:
        if n is not None and len(coords) != n:
            raise ContractError(f"vector has length {len(coords)}, expected {n}")
        p = self.p
        if p == 2:
            out = 0
            for i, c in enumerate(coords):
                if c % 2:
                    out |= 1 << i
            return out
        return bytes(c % p for c in coords)

    def unpack(self, row: Row, n: int) -> tuple:
        if self.p == 2:
            return tuple((row >> i) & 1 for i in range(n))
        return tuple(row)

    def zero(self, n: int) -> Row:
        return 0 if self.p == 2 else bytes(n)

    def unit(self, i: int, n: int) -> Row:
        if self.p == 2:
            return 1 << i
        b = bytearray(n)
        b[i] = 1
        return bytes(b)

    def is_zero(self, row: Row) -> bool:
        return not row if self.p == 2 else not any(row)

    def get(self, row: Row, i: int) -> int:
        return (row >> i) & 1 if self.p == 2 else row[i]

    def add(self, a: Row, b: Row) -> Row:
        if self.p == 2:
            return a ^ b
        p = self.p
        return bytes((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Row, b: Row) -> Row:
        if self.p == 2:
            return a ^ b
        p = self.p
        return bytes((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Row) -> Row:
        if self.p == 2:
            return a
        p = self.p
        return bytes((-x) % p for x in a)

    def axpy(self, a: Row, c: int, b: Row) -> Row:
        """Return ``a + c*b``."""
        c %= self.p
        if c == 0:
            return a
        if self.p == 2:
            return a ^ b
        p = self.p
        return bytes((x + c * y) % p for x, y in zip(a, b))

    def scale(self, c: int, a: Row) -> Row:
        c %= self.p
        if self.p == 2:
            return a if c else 0
        p = self.p
        return bytes((c * x) % p for x in a)

    def combine(self, coeffs: Sequence[int], rows: Sequence[Row], n: int) -> Row:
        """Linear combination ``sum(coeffs[i] * rows[i])``."""
        acc = self.zero(n)
        for c, r in zip(coeffs, rows):
            acc = self.axpy(acc, c, r)
        return acc

    def lead(self, row: Row) -> int:
        """Index of the first nonzero coordinate, or -1."""
        if self.p == 2:
            return (row & -row).bit_length() - 1
        for i, x in enumerate(row):
            if x:
                return i
        return -1

    def concat(self, a: Row, na: int, b: Row) -> Row:
        """Row with ``a`` in coordinates ``0..na-1`` followed by ``b``."""
        if self.p == 2:
            return a | (b << na)
        return bytes(a) + bytes(b)

    def split(self, row: Row, na: int, nb: int) -> tuple:
        if self.p == 2:
            return row & ((1 << na) - 1), row >> na
        return row[:na], row[na:na + nb]

    def select(self, row: Row, cols: Sequence[int]) -> Row:
        """Row restricted to ``cols`` (in the given order)."""
        if self.p == 2:
            out = 0
            for k, c in enumerate(cols):
                if (row >> c) & 1:
                    out |= 1 << k
            return out
        return bytes(row[c] for c in cols)

    def weight(self, row: Row) -> int:
        if self.p == 2:
            return bin(row).count("1")
        return sum(1 for x in row if x)


GF2 = Field(2)


def as_field(field) -> Field:
    if isinstance(field, Field):
        return field
    return Field(int(field))


# -- core elimination ------------------------------------------------------

def _rref_binary(rows: Iterable[int]):
    basis: list = []  # (pivot bit, row)
    for r in rows:
        for pb, b in basis:
            if r & pb:
                r ^= b
        if r:
            pb = r & -r
            for k, (qb, b) in enumerate(basis):
                if b & pb:
                    basis[k] = (qb, b ^ r)
            basis.append((pb, r))
    basis.sort()
    return [b for _, b in basis], [pb.bit_length() - 1 for pb, _ in basis]


def _rref_generic(rows: Iterable[bytes], p: int):
    basis: list = []  # (pivot, row as list)
    for raw in rows:
        r = list(raw)
        for piv, b in basis:
            c = r[piv]
            if c:
                r = [(x - c * y) % p for x, y in zip(r, b)]
        piv = next((i for i, x in enumerate(r) if x), -1)
        if piv < 0:
            continue
        if r[piv] != 1:
            inv = pow(r[piv], p - 2, p)
            r = [(x * inv) % p for x in r]
        for k, (q, b) in enumerate(basis):
            c = b[piv]
            if c:
                basis[k] = (q, [(x - c * y) % p for x, y in zip(b, r)])
        basis.append((piv, r))
    basis.sort(key=lambda t: t[0])
    return [bytes(b) for _, b in basis], [q for q, _ in basis]


def rref_rows(field: Field, rows: Iterable[Row]):
    """RREF of packed rows: returns (nonzero rows, pivot columns)."""
    if field.p == 2:
        return _rref_binary(rows)
    return _rref_generic(rows, field.p)


def reduce_row(field: Field, row: Row, basis: Sequence[Row], pivots: Sequence[int]) -> Row:
    """Reduce ``row`` against an RREF basis; the result is zero at every pivot."""
    if field.p == 2:
        for b, q in zip(basis, pivots):
            if (row >> q) & 1:
                row ^= b
        return row
    p = field.p
    r = list(row)
    for b, q in zip(basis, pivots):
        c = r[q]
        if c:
            r = [(x - c * y) % p for x, y in zip(r, b)]
    return bytes(r)


# -- Matrix ----------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense matrix over GF(p) with packed rows."""

    field: Field
    ncols: int
    rows: tuple

    @classmethod
    def from_lists(cls, field, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "Matrix":
        field = as_field(field)
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ContractError("ncols required for an empty matrix")
            ncols = len(rows[0])
        return cls(field, ncols, tuple(field.pack(r, ncols) for r in rows))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        field = as_field(field)
        return cls(field, n, tuple(field.unit(i, n) for i in range(n)))

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        field = as_field(field)
        return cls(field, ncols, tuple(field.zero(ncols) for _ in range(nrows)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def to_lists(self) -> list:
        return [list(self.field.unpack(r, self.ncols)) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return self.field.get(self.rows[i], j)

    def transpose(self) -> "Matrix":
        f = self.field
        cols = []
        for j in range(self.ncols):
            cols.append(f.pack([f.get(r, j) for r in self.rows]))
        if not self.rows:
            cols = [f.zero(0) for _ in range(self.ncols)]
        return Matrix(f, self.nrows, tuple(cols))

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        f = self.field
        return Matrix(f, len(cols), tuple(f.select(r, cols) for r in self.rows))

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols or other.field != self.field:
            raise ContractError("cannot stack matrices of different widths or fields")
        return Matrix(self.field, self.ncols, self.rows + other.rows)

    def vecmul(self, x: Sequence[int]) -> tuple:
        """Row vector times matrix: ``x @ self``."""
        if len(x) != self.nrows:
            raise ContractError(f"coefficient vector has length {len(x)}, expected {self.nrows}")
        f = self.field
        return f.unpack(f.combine(x, self.rows, self.ncols), self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field, self.ncols, self.rows) == (other.field, other.ncols, other.rows)

    def __hash__(self):
        return hash((self.field.p, self.ncols, self.rows))

    def __repr__(self):
        body = "; ".join("".join(map(str, r)) for r in self.to_lists())
        return f"Matrix(GF({self.field.p}), {self.nrows}x{self.ncols}: {body})"


def rref(m: Matrix):
    """Reduced row-echelon form: returns ``(r, rank, pivots)``."""
    rows, pivots = rref_rows(m.field, m.rows)
    return Matrix(m.field, m.ncols, tuple(rows)), len(rows), list(pivots)


def rank(m: Matrix) -> int:
    return len(rref_rows(m.field, m.rows)[0])


def kernel(m: Matrix) -> Matrix:
    """Basis of ``{x : m @ x^T == 0}`` as the rows of the returned matrix."""
    f, n = m.field, m.ncols
    rows, pivots = rref_rows(f, m.rows)
    pivset = set(pivots)
    out = []
    for free in range(n):
        if free in pivset:
            continue
        if f.p == 2:
            x = 1 << free
            for r, q in zip(rows, pivots):
                if (r >> free) & 1:
                    x |= 1 << q
        else:
            v = bytearray(n)
            v[free] = 1
            for r, q in zip(rows, pivots):
                v[q] = (-r[free]) % f.p
            x = bytes(v)
        out.append(x)
    return Matrix(f, n, tuple(out))


def left_kernel(m: Matrix) -> Matrix:
    """Basis of ``{x : x @ m == 0}``."""
    return kernel(m.transpose())


class Solver:
    """Solve ``x @ m == b`` for many right-hand sides, reducing ``m`` once."""

    def __init__(self, m: Matrix):
        f, n, r = m.field, m.ncols, m.nrows
        self.field, self.n, self.r = f, n, r
        # row i of m carries e_i in r extra columns, so reduction records the combination used
        aug = [f.concat(row, n, f.unit(i, r)) for i, row in enumerate(m.rows)]
        rows, pivots = rref_rows(f, aug)
        keep = [(row, q) for row, q in zip(rows, pivots) if q < n]
        self._rows = [k[0] for k in keep]
        self._piv = [k[1] for k in keep]

    def solve_row(self, b: Row) -> Optional[tuple]:
        f, n, r = self.field, self.n, self.r
        rem = reduce_row(f, f.concat(b, n, f.zero(r)), self._rows, self._piv)
        low, high = f.split(rem, n, r)
        if not f.is_zero(low):
            return None
        return f.unpack(f.neg(high), r)

    def solve(self, b: Sequence[int]) -> Optional[tuple]:
        if len(b) != self.n:
            raise ContractError(f"right-hand side has length {len(b)}, expected {self.n}")
        return self.solve_row(self.field.pack(b))


def solve(m: Matrix, b: Sequence[int]) -> Optional[tuple]:
    """Return some ``x`` with ``x @ m == b``, or ``None`` if ``b`` is not in the row space."""
    if len(b) != m.ncols:
        raise ContractError(f"right-hand side has length {len(b)}, expected {m.ncols}")
    return Solver(m).solve(b)
