import sys
import random

import pytest
from hypothesis import strategies as st

from subcoord.gf import Field, GF2
from subcoord.subspace import Subspace


@pytest.fixture
def rng():
    return random.Random(20261016)


@st.composite
def subspaces(draw, n, p=2, max_gens=None):
    f = Field(p)
    k = draw(st.integers(0, n if max_gens is None else max_gens))
    rows = [draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)) for _ in range(k)]
    return Subspace.from_rows(f, n, [f.pack(r) for r in rows])


@st.composite
def families(draw, m, n_max=4, p=2):
    n = draw(st.integers(1, n_max))
    return [draw(subspaces(n, p)) for _ in range(m)]


def all_subspaces(n, fld=GF2):
    """Every subspace of GF(p)^n, each once (small n only)."""
    from subcoord.caching.search import rref_subspaces

    out = []
    for k in range(n + 1):
        for rows, _ in rref_subspaces(n, k, fld):
            out.append(Subspace.from_rows(fld, n, rows))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[n])
