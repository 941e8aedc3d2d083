"""Decomposition of a cache subspace ``Z`` of ``W_1 + W_2 + W_3`` into pure pieces.

With ``A, B, C`` the three documents, each document splits into five
independent pieces:

* ``1`` individual: ``A & Z``;
* ``2`` Tian: elements pairable with both other documents;
* ``3`` and ``4`` two-way: pairable with one other document only
  (for ``A``: ``3`` couples with ``B``, ``4`` with ``C``; for ``B``: ``3``
  with ``A``, ``4`` with ``C``; for ``C``: ``3`` with ``A``, ``4`` with ``B``);
* ``5`` triple sums: elements that only reach ``Z`` together with both others.

An element ``a`` of ``A`` is *B-pairable* when ``a + b`` lies in ``Z`` for
some ``b`` in ``B``, i.e. when ``a`` lies in ``A & (Z + B)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..gf import ContractError, Matrix, Solver
from ..subspace import Subspace, extend_rows, intersect, sum_spaces
from .model import CachingScheme, doc_block


@dataclass(frozen=True)
class ZDecomposition:
    z: Subspace
    pieces: dict  # ("A", k) -> Subspace, k = 1..5, likewise for "B", "C"
    tian: tuple  # (a, b, c) triples with a+b and b+c in Z
    ab: tuple  # (a, b) pairs, a in A^3, b in B^3
    ac: tuple  # (a, c) pairs, a in A^4, c in C^3
    bc: tuple  # (b, c) pairs, b in B^4, c in C^4
    abc: tuple  # (a, b, c) triples with a+b+c in Z

    def dims(self) -> dict:
        return {k: v.dim for k, v in self.pieces.items()}

    def doc_pieces(self, doc: str) -> list:
        return [self.pieces[(doc, k)] for k in range(1, 6)]

    def generators(self) -> list:
        """Packed generators of the reconstructed ``Z``."""
        f = self.z.field
        out = []
        for d in "ABC":
            out.extend(self.pieces[(d, 1)].rows)
        for a, b, c in self.tian:
            out += [f.add(a, b), f.add(b, c)]
        for x, y in self.ab + self.ac + self.bc:
            out.append(f.add(x, y))
        for a, b, c in self.abc:
            out.append(f.add(f.add(a, b), c))
        return out

    def reconstruct(self) -> Subspace:
        return Subspace.from_rows(self.z.field, self.z.n, self.generators())


class _Partners:
    """Find elements ``o_k`` of ``others[k]`` with ``target + sum o_k`` in ``Z``."""

    def __init__(self, z: Subspace, others: Sequence[Subspace]):
        f, n = z.field, z.n
        rows = list(z.rows)
        self.cuts = []
        for o in others:
            self.cuts.append((len(rows), len(rows) + o.dim, o))
            rows.extend(o.rows)
        self.field, self.n = f, n
        self.solver = Solver(Matrix(f, n, tuple(rows)))

    def __call__(self, target_row):
        f, n = self.field, self.n
        x = self.solver.solve_row(target_row)
        if x is None:
            raise AssertionError("element is not pairable")
        # target = z + piece, so target - piece lies in Z
        return [f.neg(f.combine(x[lo:hi], o.rows, n)) for lo, hi, o in self.cuts]


def z_decompose(z: Subspace, F: int = None, scheme: CachingScheme = None) -> ZDecomposition:
    if scheme is not None:
        if scheme.N != 3:
            raise ContractError(f"z_decompose needs N == 3, got N = {scheme.N}")
        F = scheme.F
    if F is None:
        if z.n % 3:
            raise ContractError("z_decompose needs an ambient of three equal documents")
        F = z.n // 3
    if z.n != 3 * F:
        raise ContractError(f"z_decompose needs ambient 3F = {3 * F}, got {z.n}")
    f, n = z.field, z.n
    A, B, C = (doc_block(i, 3, F, f) for i in (1, 2, 3))

    def pairable(x, y):
        return intersect(x, sum_spaces(z, y))

    with_b, with_c, with_bc = _Partners(z, [B]), _Partners(z, [C]), _Partners(z, [B, C])

    A1, B1, C1 = intersect(A, z), intersect(B, z), intersect(C, z)
    Ap, App = pairable(A, B), pairable(A, C)  # A', A''
    Bp, Bpp = pairable(B, A), pairable(B, C)

    # Tian: pairable with both others, relative to the individual part
    a2 = extend_rows(A1.rows, intersect(Ap, App).rows, f)
    tian = []
    for a in a2:
        b, = with_b(a)
        c, = with_c(a)
        # a + b and a + c lie in Z; b - c then does too, so use -c as the C piece
        tian.append((a, b, f.neg(c)))

    # two-way pieces
    a_both = intersect(Ap, App)
    a3 = extend_rows(a_both.rows, Ap.rows, f)
    a4 = extend_rows(a_both.rows, App.rows, f)
    ab = [(a, with_b(a)[0]) for a in a3]
    ac = [(a, with_c(a)[0]) for a in a4]
    b_base = list(B1.rows) + [t[1] for t in tian]
    b4 = extend_rows(b_base, Bpp.rows, f)
    bc = [(b, with_c(b)[0]) for b in b4]

    # triple sums: reach Z only with both other documents
    a_tilde = intersect(A, sum_spaces(z, B, C))
    a_low = list(A1.rows) + a2 + a3 + a4
    a5 = extend_rows(a_low, a_tilde.rows, f)
    abc = []
    for a in a5:
        b, c = with_bc(a)
        abc.append((a, b, c))

    def sp(rows):
        return Subspace.from_rows(f, n, rows)

    pieces = {
        ("A", 1): A1, ("A", 2): sp(a2), ("A", 3): sp(a3), ("A", 4): sp(a4),
        ("A", 5): sp(a5),
        ("B", 1): B1, ("B", 2): sp([t[1] for t in tian]), ("B", 3): sp([p[1] for p in ab]),
        ("B", 4): sp(b4), ("B", 5): sp([t[1] for t in abc]),
        ("C", 1): C1, ("C", 2): sp([t[2] for t in tian]), ("C", 3): sp([p[1] for p in ac]),
        ("C", 4): sp([p[1] for p in bc]), ("C", 5): sp([t[2] for t in abc]),
    }
    return ZDecomposition(
        z=z, pieces=pieces, tian=tuple(tian), ab=tuple(ab), ac=tuple(ac), bc=tuple(bc),
        abc=tuple(abc),
    )


def pure_type(zd: ZDecomposition) -> str:
    """Name of the single pure type present, ``"mixed"``, or ``"zero"``."""
    d = zd.dims()
    groups = {
        "individual": d[("A", 1)] + d[("B", 1)] + d[("C", 1)],
        "tian": len(zd.tian),
        "ab": len(zd.ab),
        "ac": len(zd.ac),
        "bc": len(zd.bc),
        "triple": len(zd.abc),
    }
    present = [k for k, v in groups.items() if v]
    if not present:
        return "zero"
    return present[0] if len(present) == 1 else "mixed"
