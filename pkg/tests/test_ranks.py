import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from oracles import lambda_by_tuples

from latinlab import errors
from latinlab.groups import group_square
from latinlab.partitions import Partition, enumerate_partitions
from latinlab.ranks import (PartitionTriple, close, count_measurable, crank, crank_pi2_formula, cx, enumerate_triples,
                            gamma, gamma0, lambda_indicator, lambda_indicator_bruteforce, lrank, trank)
from latinlab.sampling import jm_sample
from latinlab.square import cyclic_square

M = Partition.from_cells([[0, 1]])
D2 = Partition.discrete(2)


def triples_st(max_m=6):
    def build(m):
        lab = st.lists(st.integers(0, m), min_size=m, max_size=m)
        return st.tuples(lab, lab, lab).map(lambda t: PartitionTriple.of(*t))
    return st.integers(0, max_m).flatmap(build)


def _cells(psi):
    """(tag, frozenset) for every cell, in the library's bit order."""
    return [(t, frozenset(c)) for t, p in enumerate(psi.parts) for c in p.cells]


def _crank_oracle(psi):
    """2m minus the least generating set, found by scanning every cell subset."""
    cells = _cells(psi)
    m = psi.ground_size

    def closure(S):
        S = set(S)
        grow = True
        while grow:
            grow = False
            for a in range(m):
                through = [i for i, (_, c) in enumerate(cells) if a in c]
                if len(S & set(through)) >= 2 and not set(through) <= S:
                    S |= set(through)
                    grow = True
        return S

    for k in range(len(cells) + 1):
        for S in itertools.combinations(range(len(cells)), k):
            if len(closure(S)) == len(cells):
                return 2 * m - k


def test_close_examples():
    psi = PartitionTriple.of(M, M, M)
    assert close(psi, 0b011) == 0b111
    assert close(psi, 0) == 0
    full = (1 << psi.num_cells) - 1
    rnd = PartitionTriple.of([0, 1, 0, 2], [0, 0, 1, 1], [0, 1, 2, 3])
    assert close(rnd, (1 << rnd.num_cells) - 1) == (1 << rnd.num_cells) - 1
    assert close(psi, full) == full


@given(triples_st(8), st.integers(0, 2 ** 24 - 1), st.integers(0, 2 ** 24 - 1))
def test_close_monotone_idempotent(psi, a, b):
    full = (1 << psi.num_cells) - 1
    S, T = a & full, (a | b) & full
    cS, cT = close(psi, S), close(psi, T)
    assert cS & S == S
    assert cS & cT == cS
    assert close(psi, cS) == cS


def test_crank_examples():
    for m in range(0, 6):
        d = Partition.discrete(m)
        assert crank(PartitionTriple.of(d, d, d)) == 0
    assert crank(PartitionTriple.of(M, M, M)) == 2
    psi = PartitionTriple.of(M, D2, D2)
    assert sum(p.rank for p in psi.parts) == 1 and crank(psi) == 1
    assert crank_pi2_formula(PartitionTriple.of(M, M, M)) == 2
    assert crank_pi2_formula(psi) == 1
    m1, m2, m3 = (Partition.from_cells(c) for c in ([[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]))
    psi = PartitionTriple.of(m1, m2, m3)
    assert crank_pi2_formula(psi) == crank(psi) == 5 == 2 * 4 - (4 // 2 + 1)
    with pytest.raises(errors.CellTooLarge):
        crank_pi2_formula(PartitionTriple.of([0, 0, 0], [0, 1, 2], [0, 1, 2]))
    with pytest.raises(errors.GroundMismatch):
        PartitionTriple.of([0], [0, 1], [0])


def test_crank_against_exhaustive_oracle():
    for psi in enumerate_triples(3):
        assert crank(psi) == _crank_oracle(psi), psi
    rng = random.Random(5)
    parts = list(enumerate_partitions(4))
    for _ in range(150):
        psi = PartitionTriple(tuple(rng.choice(parts) for _ in range(3)))
        assert crank(psi) == _crank_oracle(psi), psi


@pytest.mark.parametrize("m", range(0, 6))
def test_pi2_formula_exhaustive(m):
    for psi in enumerate_triples(m, max_cell=2):
        assert crank(psi) == crank_pi2_formula(psi), psi


def test_rank_hierarchy_on_pi4():
    for psi in enumerate_triples(4):
        assert crank(psi) >= trank(psi) >= lrank(psi)


def test_rank_hierarchy_random_pi6():
    rng = random.Random(11)
    parts = list(enumerate_partitions(6))
    for _ in range(10_000):
        psi = PartitionTriple(tuple(rng.choice(parts) for _ in range(3)))
        assert crank(psi) >= trank(psi) >= lrank(psi)


def test_trank_cx_examples():
    for k in range(1, 4):
        P = Partition.from_cells([[2 * i, 2 * i + 1] for i in range(k)])
        psi = PartitionTriple.of(P, P, P)
        assert trank(psi) == 2 * k and cx(psi) == 0
    d = PartitionTriple.of(D2, D2, D2)
    assert trank(d) == 0 and lrank(d) == 0
    with pytest.raises(errors.NotASystem):
        cx(PartitionTriple.of(M, D2, D2))


@pytest.mark.parametrize("m", range(1, 5))
def test_complexity_zero_only_for_matching_systems(m):
    for psi in enumerate_triples(m, systems_only=True):
        p = psi.parts
        # a matching on its support; singletons outside it do not count
        matching = p[0] == p[1] == p[2] and p[0].restrict(psi.support).is_matching
        assert (cx(psi) == 0) == matching


def test_lambda_examples():
    Z3 = cyclic_square(3)
    assert lambda_indicator(Z3, PartitionTriple.of([0], [0], [0])) == 1
    assert lambda_indicator(Z3, PartitionTriple.of(M, M, M)) == Fraction(1, 9)
    assert lambda_indicator(Z3, PartitionTriple.of(M, D2, D2)) == Fraction(1, 3) == Fraction(27, 81)


def _squares():
    out = [cyclic_square(n) for n in (2, 3, 4)] + [group_square("S3")[0]]
    out += [jm_sample(4, seed=s) for s in range(2)]
    return out


def test_lambda_against_tuple_oracle():
    rng = random.Random(3)
    for L in _squares():
        limit = 3 if L.n > 4 else 4
        parts = list(enumerate_partitions(limit))
        for _ in range(12):
            psi = PartitionTriple(tuple(rng.choice(parts) for _ in range(3)))
            labels = [p.rgs for p in psi.parts]
            if L.n ** (2 * limit) <= 70_000:
                assert lambda_indicator(L, psi) == lambda_by_tuples(L.grid(), labels)
            assert lambda_indicator(L, psi) == lambda_indicator_bruteforce(L, psi)


def test_lambda_crank_bound():
    squares = [cyclic_square(n) for n in (2, 3, 4, 5)] + [group_square("S3")[0]]
    for L in squares:
        for m in range(0, 4):
            for psi in enumerate_triples(m):
                lam = lambda_indicator(L, psi)
                assert 0 <= lam <= Fraction(1, L.n ** crank(psi))
    assert count_measurable(cyclic_square(3), PartitionTriple.of(M, M, M)) == 9


def test_gamma_examples():
    Z3 = cyclic_square(3)
    psi = PartitionTriple.of(M, M, M)
    assert gamma0(Z3, psi) == 1
    assert gamma(Z3, psi) == Fraction(2, 3)
    d = PartitionTriple.of(D2, D2, D2)
    assert gamma0(Z3, d) == 1
    with pytest.raises(errors.NotASystem):
        gamma0(Z3, PartitionTriple.of(M, D2, D2))


@pytest.mark.parametrize("L", [cyclic_square(n) for n in range(2, 6)]
                         + [jm_sample(n, seed=7) for n in (3, 4, 5)], ids=lambda L: f"n{L.n}")
def test_gamma_matching_identity(L):
    for k in (1, 2):
        for P in enumerate_partitions(2 * k, max_cell=2, full_support=True):
            assert gamma(L, PartitionTriple.of(P, P, P)) == Fraction(L.n - 1, L.n) ** k


def test_gamma0_in_unit_interval():
    for L in [cyclic_square(n) for n in (3, 4)]:
        for psi in enumerate_triples(3, systems_only=True):
            assert 0 <= gamma0(L, psi) <= 1


def test_json():
    psi = PartitionTriple.of([0, 1, 0], [0, 0, 1], [0, 1, 2])
    assert psi.to_json() == [[0, 1, 0], [0, 0, 1], [0, 1, 2]]
