from fractions import Fraction as Fr
from itertools import permutations

import pytest

from subcoord.caching.builtins import builtin, lopsided, man22, symmetry_action
from subcoord.caching.model import (
    all_demands, distinct_rates, memory_rate, scheme_from_vectors, verify_scheme,
)
from subcoord.caching.symmetry import (
    act_demand, compose, group, inverse, is_symmetric, is_symmetric_under, symmetrize,
    symmetrized_witness,
)
from subcoord.gf import ContractError


def test_group_order_and_action_is_a_homomorphism():
    G = group(3, 3)
    assert len(G) == 36
    for d in all_demands(3, 3):
        for k1, v1 in G[::5]:
            for k2, v2 in G[::7]:
                once = act_demand(act_demand(d, k1, v1), k2, v2)
                assert once == act_demand(d, compose(k2, k1), compose(v2, v1))


def test_inverse_and_compose():
    for p in permutations((1, 2, 3, 4)):
        assert compose(p, inverse(p)) == (1, 2, 3, 4)


@pytest.mark.parametrize("name", ["man-33", "new-half", "full", "empty", "tian-caches"])
def test_builtin_symmetry(name):
    assert is_symmetric(builtin(name), symmetry_action(name))


def test_lopsided_is_not_symmetric():
    with pytest.raises(ContractError):
        symmetry_action("lopsided")


def orbit_average_rate(s):
    # independent computation: average each orbit's broadcast dimension
    G = group(s.N, s.K)
    best = Fr(0)
    for d2 in all_demands(s.N, s.K):
        tot = 0
        for kappa, nu in G:
            d = next(d for d in all_demands(s.N, s.K) if act_demand(d, kappa, nu) == d2)
            tot += s.broadcasts[d].dim
        best = max(best, Fr(tot, len(G) * s.F))
    return best


@pytest.mark.parametrize("name", ["man-22", "lopsided"])
def test_symmetrize_small(name):
    s = builtin(name) if name != "lopsided" else lopsided(1)
    t = symmetrize(s)
    G = group(s.N, s.K)
    assert t.F == len(G) * s.F
    assert verify_scheme(t).valid
    M, R, M_avg, _ = memory_rate(s)
    M2, R2, _, _ = memory_rate(t)
    assert M2 == M_avg and R2 == orbit_average_rate(s) and R2 <= R
    for kappa, nu in G:
        assert is_symmetric_under(t, symmetrized_witness(s, kappa, nu), kappa, nu)


@pytest.mark.parametrize("name", ["man-33", "new-half"])
def test_symmetrize_preserves_rates_of_symmetric_schemes(name):
    s = builtin(name)
    t = symmetrize(s)
    assert memory_rate(t)[:2] == memory_rate(s)[:2]
    assert verify_scheme(t).valid
    for kappa, nu in group(3, 3)[1::17]:
        assert is_symmetric_under(t, symmetrized_witness(s, kappa, nu), kappa, nu)


def test_symmetrized_lopsided_keeps_its_rates():
    t = symmetrize(lopsided(1))
    assert memory_rate(t)[:2] == (1, 2)
    assert distinct_rates(t)[1] == Fr(7, 6)


def test_asymmetric_caches_average_out():
    # one user caches W_1, the other nothing
    s = scheme_from_vectors(
        2, 2, 1, caches=[[{0}], []],
        broadcasts={(1, 1): [{0}], (1, 2): [{1}], (2, 1): [{0}, {1}], (2, 2): [{1}]},
    )
    assert verify_scheme(s).valid and memory_rate(s)[:2] == (1, 2)
    t = symmetrize(s)
    assert verify_scheme(t).valid
    assert memory_rate(t)[:2] == (Fr(1, 2), Fr(3, 2))


def test_symmetrize_needs_every_demand():
    with pytest.raises(ContractError) as e:
        symmetrize(builtin("tian-caches"))
    assert "missing" in str(e.value)
