"""Finite-field subspace lattices, discoordination, and linear coded caching."""

from .discoord import (
    GuardExceeded,
    brute_minimizer,
    coordinating_basis,
    d_profile,
    decompose_three,
    discoordination,
    discoordination_brute,
    greedy_minimizer,
    is_coordinated,
    meet,
    s_chain,
)
from .gf import GF2, ContractError, Field, Matrix, kernel, left_kernel, rank, rref, solve
from .subspace import QuotientMap, Subspace, intersect, span, sum_spaces

__all__ = [
    "GF2", "ContractError", "Field", "Matrix", "kernel", "left_kernel", "rank", "rref", "solve",
    "QuotientMap", "Subspace", "intersect", "span", "sum_spaces",
    "GuardExceeded", "brute_minimizer", "coordinating_basis", "d_profile", "decompose_three",
    "discoordination", "discoordination_brute", "greedy_minimizer", "is_coordinated", "meet",
    "s_chain",
]
