import json
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from oracles import all_latin_squares, transversals_by_rows, transversals_naive
from scipy.stats import chisquare

from latinlab import errors
from latinlab.groups import BUILTIN_GROUPS, cayley_table, catalog_generators, group_square, identify
from latinlab.sampling import default_steps, jm_chain, jm_sample
from latinlab.square import (cyclic_square, from_grid, parse_text, read_square, transversal_asymptotic,
                             write_square)
from latinlab.transversals import count_transversals, count_transversals_bruteforce


def _consistent(L):
    n = L.n
    for r in range(n):
        for s in range(n):
            assert L.sym_at[r, L.col_of[r, s]] == s
            assert L.sym_at[L.row_of[r, s], r] == s


def test_from_grid_examples():
    one = from_grid([[0]])
    assert one.n == 1 and one.grid() == [[0]]
    z2 = from_grid([[0, 1], [1, 0]])
    assert z2 == cyclic_square(2)
    with pytest.raises(errors.NotLatin):
        from_grid([[0, 1], [0, 1]])


@pytest.mark.parametrize("grid", [[[0, 2], [2, 0]], [[0, 1, 2], [1, 2, 0]], [], [[0, 1], [1, 1]]])
def test_from_grid_rejects(grid):
    with pytest.raises(errors.NotLatin):
        from_grid(grid)


def test_tables_consistent_and_triples_latin():
    for n in range(1, 8):
        L = cyclic_square(n)
        _consistent(L)
        T = list(L.triples())
        assert len(T) == n * n
        for a, b in ((0, 1), (1, 2), (0, 2)):
            assert len({(t[a], t[b]) for t in T}) == n * n


def test_text_and_json_roundtrip(tmp_path):
    L = jm_sample(5, seed=3)
    assert parse_text(L.to_text()) == L
    p = tmp_path / "sq.txt"
    write_square(L, p)
    assert read_square(p) == L
    q = tmp_path / "sq.json"
    q.write_text(json.dumps(L.to_json()))
    assert read_square(q) == L
    assert L.to_text().splitlines()[0] == "5"
    with pytest.raises(errors.NotLatin):
        parse_text("3\n0 1 2\n1 2 0\n")


def test_transversal_asymptotic_examples():
    approx, exact = transversal_asymptotic(1)
    assert exact == 1 and approx == pytest.approx(0.60653, abs=1e-5)
    approx, exact = transversal_asymptotic(7)
    assert exact == Fraction(5040 ** 2, 7 ** 7)
    assert approx == pytest.approx(18.71, abs=0.01)
    assert transversal_asymptotic(11)[0] == pytest.approx(3388, abs=1)


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 0), (3, 3), (4, 0), (5, 15), (6, 0), (7, 133)])
def test_cyclic_transversals(n, expected):
    L = cyclic_square(n)
    assert transversals_naive(L.grid()) == expected
    assert count_transversals(L) == expected


def test_bitmask_matches_oracle_on_random_squares():
    for i in range(100):
        n = 1 + i % 6
        L = jm_sample(n, steps=200, seed=1000 + i)
        assert count_transversals(L) == transversals_naive(L.grid()) == count_transversals_bruteforce(L)


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_builtin_groups_against_oracle(name):
    L, _ = group_square(name)
    oracle = transversals_naive if L.n <= 9 else transversals_by_rows
    assert count_transversals(L) == oracle(L.grid())


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_even_cyclic_has_no_transversal(n):
    assert count_transversals(cyclic_square(n)) == 0


def test_order_cap():
    with pytest.raises(errors.OrderTooLarge):
        count_transversals(cyclic_square(15))


def test_jm_small_cases():
    assert jm_sample(1, 5, 99).grid() == [[0]]
    L = jm_sample(4, 10 ** 5, 7)
    L.validate()
    _consistent(L)
    assert default_steps(5) == math.ceil(125 * math.log(5)) + 1250


@given(st.integers(2, 7), st.integers(0, 400), st.integers(0, 2 ** 32 - 1))
def test_jm_valid_and_deterministic(n, steps, seed):
    a = jm_sample(n, steps, seed)
    a.validate()
    _consistent(a)
    assert a == jm_sample(n, steps, seed)


def test_jm_uniform_over_order_four():
    squares = all_latin_squares(4)
    assert len(squares) == 576
    index = {s: i for i, s in enumerate(squares)}
    draws = 576 * 100
    counts = Counter()
    chain = jm_chain(4, seed=2024, thin=10)
    for _ in range(draws):
        g = next(chain).grid()
        counts[index[tuple(tuple(r) for r in g)]] += 1
    obs = np.array([counts[i] for i in range(576)])
    p = chisquare(obs).pvalue
    sigma = math.sqrt(100 * (1 - 1 / 576))
    assert p > 1e-3, p
    assert np.max(np.abs(obs - 100)) < 4.5 * sigma


def test_cayley_examples():
    L, spec = cayley_table([(1, 2, 0)])
    assert L == cyclic_square(3) and spec.irrep_dims == (1, 1, 1)
    L, spec = cayley_table([()])
    assert L.n == 1
    L, spec = cayley_table(catalog_generators("A5"))
    assert L.n == 60 and sorted(spec.irrep_dims) == [1, 3, 3, 4, 5]
    assert spec.min_nontrivial_dim == 3


@pytest.mark.parametrize("name", BUILTIN_GROUPS + ["A5"])
def test_catalog_identifies_itself(name):
    L, spec = group_square(name)
    assert sum(d * d for d in spec.irrep_dims) == spec.order == L.n
    found = identify(L)
    assert found is not None and found.irrep_dims == spec.irrep_dims


def test_bad_irrep_dims():
    from latinlab.groups import GroupSpec
    with pytest.raises(errors.BadIrrepDims):
        GroupSpec("bad", 6, (1, 1, 1))
