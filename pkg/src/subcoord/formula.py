"""Integer formulas in quotient dimensions of three subspaces.

A formula is a weighted list of terms ``dim([X]_Y) = dim X - dim(X & Y)``
where ``X`` and ``Y`` are expressions built from the leaves ``A, B, C``
with ``+`` and ``&``.  A formula is *balanced* when it vanishes on every
coordinated triple; balanced formulas are integer multiples of the
discoordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence, Union

from .gf import GF2, ContractError
from .subspace import Subspace, intersect, quotient_dim, span, sum_spaces


@dataclass(frozen=True)
class Leaf:
    index: int

    def __add__(self, other):
        return Sum(self, other)

    def __and__(self, other):
        return Intersect(self, other)

    def __str__(self):
        return "ABC"[self.index] if self.index < 3 else f"A{self.index + 1}"


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"

    __add__ = Leaf.__add__
    __and__ = Leaf.__and__

    def __str__(self):
        return f"({self.left}+{self.right})"


@dataclass(frozen=True)
class Intersect:
    left: "Expr"
    right: "Expr"

    __add__ = Leaf.__add__
    __and__ = Leaf.__and__

    def __str__(self):
        return f"({self.left}&{self.right})"


Expr = Union[Leaf, Sum, Intersect]


@dataclass(frozen=True)
class Term:
    weight: int
    expr: Expr
    modulo: Optional[Expr] = None

    def __str__(self):
        inner = str(self.expr) if self.modulo is None else f"[{self.expr}]_{self.modulo}"
        return f"{self.weight:+d}*dim{inner}"


Formula = tuple  # of Term


def leaves(e) -> set:
    if isinstance(e, Leaf):
        return {e.index}
    if isinstance(e, (Sum, Intersect)):
        return leaves(e.left) | leaves(e.right)
    raise ContractError(f"malformed expression node {e!r}")


def formula_leaves(f: Formula) -> set:
    out = set()
    for t in f:
        if not isinstance(t, Term) or not isinstance(t.weight, int):
            raise ContractError(f"malformed term {t!r}")
        out |= leaves(t.expr)
        if t.modulo is not None:
            out |= leaves(t.modulo)
    return out


def evaluate(e: Expr, spaces: Sequence[Subspace], memo: Optional[dict] = None) -> Subspace:
    if memo is not None and e in memo:
        return memo[e]
    if isinstance(e, Leaf):
        return spaces[e.index]
    if isinstance(e, Sum):
        out = sum_spaces(evaluate(e.left, spaces, memo), evaluate(e.right, spaces, memo))
    elif isinstance(e, Intersect):
        out = intersect(evaluate(e.left, spaces, memo), evaluate(e.right, spaces, memo))
    else:
        raise ContractError(f"malformed expression node {e!r}")
    if memo is not None:
        memo[e] = out
    return out


def balanced_eval(f: Formula, a: Subspace, b: Subspace, c: Subspace) -> int:
    if not formula_leaves(f) <= {0, 1, 2}:
        raise ContractError("formula may only reference the leaves A, B, C")
    spaces = (a, b, c)
    memo: dict = {}  # shared subexpressions such as A+B recur across terms
    total = 0
    for t in f:
        x = evaluate(t.expr, spaces, memo)
        if t.modulo is None:
            total += t.weight * x.dim
        else:
            total += t.weight * quotient_dim(x, evaluate(t.modulo, spaces, memo))
    return total


def counterexample_triple(field=GF2):
    """``span(e1), span(e2), span(e1+e2)`` in the plane."""
    return (
        span([(1, 0)], 2, field),
        span([(0, 1)], 2, field),
        span([(1, 1)], 2, field),
    )


def balanced_check(f: Formula):
    """Return ``(is_balanced, k)`` where ``k`` is the value on the basic counterexample.

    Every coordinated triple is isomorphic to coordinate subspaces, and a
    formula restricted to coordinate subspaces is additive over the Venn
    pieces.  Coordinate triples over a three-element ground set hit every
    piece, so vanishing on all of them decides balancedness.
    """
    formula_leaves(f)
    subsets = [[i for i in range(3) if mask >> i & 1] for mask in range(8)]
    balanced = True
    for I, J, K in product(subsets, repeat=3):
        trip = [Subspace.coordinate(s, 3) for s in (I, J, K)]
        if balanced_eval(f, *trip) != 0:
            balanced = False
            break
    k = balanced_eval(f, *counterexample_triple())
    return balanced, k


# -- the named identities ----------------------------------------------------

A, B, C = Leaf(0), Leaf(1), Leaf(2)


def _d(weight, expr, modulo=None):
    return Term(weight, expr, modulo)


MUTUAL_INFO = (
    _d(1, A), _d(1, B), _d(1, C),
    _d(-1, A + B), _d(-1, A + C), _d(-1, B + C),
    _d(1, A + B + C),
)

COND_MUTUAL_BC_GIVEN_A = (_d(1, A + B), _d(1, A + C), _d(-1, A), _d(-1, A + B + C))

DISCOORD_FORMULAS = {
    1: (_d(1, A & B & C),) + tuple(Term(-t.weight, t.expr, t.modulo) for t in MUTUAL_INFO),
    2: (_d(1, C & (A + B)), _d(-1, C & A), _d(-1, C & B), _d(1, A & B & C)),
    3: (_d(1, (A + C) & (B + C), C), _d(1, A & B & C), _d(-1, A & B)),
    4: (_d(1, (A + C) & (B + C)), _d(-1, C), _d(1, A & B & C), _d(-1, A & B)),
    5: (_d(1, (A + C) & (B + C)), _d(-1, (A & B) + C)),
    6: COND_MUTUAL_BC_GIVEN_A + (_d(-1, B & C, A),),
}

NOT_BALANCED = (_d(1, A),)


def format_formula(f: Formula) -> str:
    return " ".join(str(t) for t in f)
