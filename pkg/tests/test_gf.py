import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from subcoord.gf import (
    GF2, ContractError, Field, Matrix, Solver, _rref_binary, _rref_generic, kernel,
    left_kernel, rank, rref, rref_rows, solve,
)
from subcoord.oracle import naive_rref


def random_lists(rng, r, c, p):
    return [[rng.randrange(p) for _ in range(c)] for _ in range(r)]


def test_field_rejects_composites_and_large_primes():
    for bad in (0, 1, 4, 9, 257):
        with pytest.raises(ContractError):
            Field(bad)
    assert Field(251).p == 251


def test_pack_roundtrip_and_arithmetic():
    for p in (2, 3, 7):
        f = Field(p)
        a, b = (1, 0, p - 1, 2 % p), (p - 1, 1, 1, 0)
        pa, pb = f.pack(a), f.pack(b)
        assert f.unpack(pa, 4) == a
        assert f.unpack(f.add(pa, pb), 4) == tuple((x + y) % p for x, y in zip(a, b))
        assert f.unpack(f.sub(pa, pb), 4) == tuple((x - y) % p for x, y in zip(a, b))
        assert f.is_zero(f.add(pa, f.neg(pa)))
        for x in range(1, p):
            assert x * f.inv(x) % p == 1


def test_rref_matches_textbook_elimination(rng):
    for _ in range(400):
        p = rng.choice((2, 3, 5, 7))
        r, c = rng.randint(0, 10), rng.randint(1, 10)
        lists = random_lists(rng, r, c, p)
        m, rk, piv = rref(Matrix.from_lists(Field(p), lists, ncols=c))
        want = naive_rref(lists, p)
        assert m.to_lists() == want
        assert rk == len(want)
        assert piv == [row.index(1) for row in want]


def test_binary_path_agrees_with_generic_path(rng):
    # 1000 random matrices up to 32x32, packed as ints and as bytes
    for _ in range(1000):
        r, c = rng.randint(1, 32), rng.randint(1, 32)
        lists = random_lists(rng, r, c, 2)
        ints = [GF2.pack(row) for row in lists]
        fast, fp = _rref_binary(ints)
        slow, sp = _rref_generic([bytes(row) for row in lists], 2)
        assert fp == sp
        assert [GF2.unpack(x, c) for x in fast] == [tuple(x) for x in slow]


def test_kernel_is_exactly_the_nullspace(rng):
    for _ in range(150):
        p = rng.choice((2, 3))
        r, c = rng.randint(1, 4), rng.randint(1, 5)
        lists = random_lists(rng, r, c, p)
        m = Matrix.from_lists(Field(p), lists, ncols=c)
        null = {y for y in product(range(p), repeat=c)
                if all(sum(a * z for a, z in zip(row, y)) % p == 0 for row in lists)}
        k = kernel(m)
        assert p ** k.nrows == len(null)
        assert {tuple(v) for v in k.to_lists()} <= null
        assert rank(k) == k.nrows
        assert k.nrows + rank(m) == c


def test_left_kernel(rng):
    for _ in range(50):
        lists = random_lists(rng, rng.randint(1, 5), rng.randint(1, 4), 3)
        m = Matrix.from_lists(Field(3), lists, ncols=len(lists[0]))
        lk = left_kernel(m)
        for y in lk.to_lists():
            assert all(v == 0 for v in m.vecmul(y))
        assert lk.nrows == m.nrows - rank(m)


def test_solve_agrees_with_exhaustive_search(rng):
    for _ in range(300):
        p = rng.choice((2, 3, 5))
        r, c = rng.randint(0, 4), rng.randint(1, 4)
        lists = random_lists(rng, r, c, p)
        m = Matrix.from_lists(Field(p), lists, ncols=c) if r else Matrix(Field(p), c, ())
        b = tuple(rng.randrange(p) for _ in range(c))
        exists = any(m.vecmul(x) == b for x in product(range(p), repeat=r)) if r else not any(b)
        x = solve(m, b)
        assert (x is not None) == exists
        if x is not None:
            assert len(x) == r
            assert m.vecmul(x) == b if r else not any(b)


def test_solver_reuse_matches_solve(rng):
    lists = random_lists(rng, 6, 8, 2)
    m = Matrix.from_lists(GF2, lists, ncols=8)
    s = Solver(m)
    for _ in range(100):
        b = tuple(rng.randrange(2) for _ in range(8))
        x1, x2 = s.solve(b), solve(m, b)
        assert (x1 is None) == (x2 is None)
        if x1 is not None:
            assert m.vecmul(x1) == b


def test_solve_rejects_wrong_length():
    m = Matrix.from_lists(GF2, [[1, 0, 1]])
    with pytest.raises(ContractError):
        solve(m, (1, 0))


def test_identity_and_transpose():
    f = Field(5)
    eye = Matrix.identity(f, 4)
    assert rank(eye) == 4
    m = Matrix.from_lists(f, [[1, 2, 3], [4, 0, 1]])
    assert m.transpose().transpose() == m
    assert m.transpose().shape == (3, 2)
    assert m.entry(1, 0) == 4


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), max_size=6))
def test_rank_is_row_space_size(rows):
    # |row space| = p^rank, counted by enumerating combinations
    f = Field(3)
    m = Matrix.from_lists(f, rows, ncols=5) if rows else Matrix(f, 5, ())
    space = {tuple(sum(c * r[j] for c, r in zip(cs, rows)) % 3 for j in range(5))
             for cs in product(range(3), repeat=len(rows))}
    assert len(space) == 3 ** rank(m)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, (1 << 12) - 1), max_size=12))
def test_rref_rows_idempotent(ints):
    rows, piv = rref_rows(GF2, ints)
    again, piv2 = rref_rows(GF2, rows)
    assert again == rows and piv2 == piv
    assert piv == sorted(piv)
