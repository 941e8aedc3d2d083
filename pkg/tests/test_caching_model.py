import random
from fractions import Fraction as Fr
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from subcoord.caching.builtins import NAMES, builtin, empty, full, lopsided, man22, man33, new_half, tian_caches
from subcoord.caching.fileformat import (
    ParseError, parse_family, parse_scheme, serialize_family, serialize_scheme,
)
from subcoord.caching.model import (
    CachingScheme, all_demands, coord, decodes, distinct_rates, memory_rate, verify_scheme,
)
from subcoord.gf import GF2, ContractError, Field
from subcoord.oracle import random_subspace
from subcoord.subspace import Subspace, sum_spaces


def brute_decodes(s, d, j):
    have = set(sum_spaces(s.cache(j), s.broadcasts[d]).elements())
    return set(s.doc(d[j - 1]).elements()) <= have


def test_verifier_matches_enumeration(rng):
    for _ in range(200):
        N, K, F = rng.choice(((2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)))
        n = N * F
        caches = tuple(random_subspace(rng, n) for _ in range(K))
        bc = {d: random_subspace(rng, n) for d in all_demands(N, K)}
        s = CachingScheme(GF2, N, K, F, caches, bc)
        rep = verify_scheme(s)
        want = all(brute_decodes(s, d, j) for d in bc for j in range(1, K + 1))
        assert rep.valid == want
        for fail in rep.failures:
            assert not brute_decodes(s, fail.demand, fail.user)
            w = GF2.pack(fail.witness)
            assert s.doc(fail.demand[fail.user - 1]).has_row(w)
            assert not sum_spaces(s.cache(fail.user), s.broadcasts[fail.demand]).has_row(w)


@pytest.mark.parametrize("name", NAMES)
def test_every_builtin_is_valid(name):
    s = builtin(name)
    assert verify_scheme(s).valid


def test_man22_rates():
    s = man22()
    M, R, _, _ = memory_rate(s)
    assert (M, R) == (Fr(1, 2), Fr(1))
    assert s.complete


def test_man33_rates():
    M, R, _, _ = memory_rate(man33())
    assert (M, R) == (1, 1)


def test_new_half_rates_and_dimensions():
    s = new_half()
    assert s.F == 6 and s.complete
    M, R, _, _ = memory_rate(s)
    assert (M, R) == (Fr(1, 2), Fr(5, 3))
    assert all(x.dim <= 10 for x in s.broadcasts.values())
    assert s.broadcasts[(1, 2, 3)].dim == 10


def test_lopsided_rates():
    s = lopsided()
    M, R, _, _ = memory_rate(s)
    assert (M, R) == (1, 2)
    R_d, R_d_avg = distinct_rates(s)
    assert R_d_avg == Fr(7, 6)


def test_trivial_schemes():
    assert memory_rate(full())[:2] == (3, 0)
    assert memory_rate(empty())[:2] == (0, 3)
    t = tian_caches()
    assert not t.complete and memory_rate(t)[0] == Fr(2, 3)


def test_coordinate_convention():
    assert coord(1, 1, 6) == 0 and coord(3, 6, 6) == 17
    s = man22()
    assert s.doc(2) == Subspace.coordinate([2, 3], 4)


def test_bad_scheme_shapes_rejected():
    with pytest.raises(ContractError):
        CachingScheme(GF2, 2, 2, 1, (Subspace.zero(2),))
    with pytest.raises(ContractError):
        CachingScheme(GF2, 2, 2, 1, (Subspace.zero(2),) * 2, {(1, 3): Subspace.zero(2)})
    with pytest.raises(ContractError):
        CachingScheme(GF2, 2, 2, 1, (Subspace.zero(3),) * 2)
    with pytest.raises(ContractError):
        builtin("no-such-scheme")


def test_partial_scheme_reports_incomplete():
    s = man22()
    bc = dict(s.broadcasts)
    del bc[(1, 2)]
    p = s.with_broadcasts(bc)
    rep = verify_scheme(p)
    assert rep.valid and not rep.complete and p.missing_demands() == [(1, 2)]


def test_decodes_returns_witness():
    s = man22()
    assert decodes(s, (1, 2), 1) is None
    w = decodes(s, (1, 2), 1, Subspace.zero(4))
    assert w == (1, 0, 0, 0)


# -- file format -----------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_scheme_roundtrip(name):
    s = builtin(name)
    t = parse_scheme(serialize_scheme(s))
    assert (t.N, t.K, t.F) == (s.N, s.K, s.F)
    assert t.caches == s.caches and t.broadcasts == s.broadcasts


def test_parser_canonicalizes_dependent_generators():
    text = "field=2\nN=2\nK=1\nF=1\nZ 1\n10\n10\n11\n\nX 2\n01\n"
    s = parse_scheme(text)
    assert s.cache(1).dim == 2 and s.broadcasts[(2,)].dim == 1


def test_missing_z_defaults_to_zero_and_comments_skipped():
    s = parse_scheme("field=2\nN=1\nK=2\nF=2\n# note\nZ 2\n11\n")
    assert s.cache(1).dim == 0 and s.cache(2).dim == 1 and not s.broadcasts


@pytest.mark.parametrize("text,line", [
    ("field=2\nN=2\nK=1\nF=1\nZ 1\n101\n", 6),
    ("field=2\nN=2\nK=1\nF=1\nZ 1\n10\nZ 1\n01\n", 7),
    ("field=2\nN=2\nK=1\nF=1\nX 3\n10\n", 5),
    ("field=2\nN=2\nK=1\nF=1\nQ 1\n", 5),
    ("field=2\nN=2\nK=1\nF=1\n10\n", 5),
    ("field=2\nN=2\nK=1\nF=1\nZ 1\n12\n", 6),
    ("field=2\nK=1\nN=2\nF=1\n", 2),
    ("field=4\nN=2\nK=1\nF=1\n", 1),
    ("field=2\nN=x\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        parse_scheme(text)
    assert e.value.line == line


def test_gf3_scheme_roundtrip():
    f = Field(3)
    z = Subspace.from_rows(f, 4, [f.pack((1, 2, 0, 1))])
    s = CachingScheme(f, 2, 1, 2, (z,), {(1,): Subspace.from_rows(f, 4, [f.pack((1, 0, 0, 0))])})
    t = parse_scheme(serialize_scheme(s))
    assert t.field == f and t.caches == s.caches and t.broadcasts == s.broadcasts


def test_family_roundtrip(rng):
    for _ in range(30):
        fam = [random_subspace(rng, 4) for _ in range(rng.randint(1, 5))]
        assert parse_family(serialize_family(fam)) == fam


def test_family_parse_errors():
    with pytest.raises(ParseError):
        parse_family("field=2\nambient=2\n")
    with pytest.raises(ParseError):
        parse_family("field=2\nambient=2\nB 1\n10\n")
    with pytest.raises(ParseError):
        parse_family("field=2\nambient=2\nA 1\n100\n")
