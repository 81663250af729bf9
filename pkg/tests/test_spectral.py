from fractions import Fraction

import numpy as np
import pytest
from oracles import closed_six_walks

from latinlab import errors
from latinlab.groups import BUILTIN_GROUPS, GroupSpec, group_square
from latinlab.sampling import jm_sample
from latinlab.spectral import (build_operator, compare_group_spectrum, dense_spectrum, expand_spectrum,
                               is_symmetric_doubly_stochastic, predict_group_spectrum, quasi_use_check, rho,
                               trace6_by_configurations, trace_power)
from latinlab.square import cyclic_square


def _dense_from_definition(L):
    n = L.n
    g = L.grid()
    M = np.zeros((n * n, n * n))
    for x in range(n):
        for y in range(n):
            for z in range(n):
                x2 = next(a for a in range(n) if g[a][y] == z)
                y2 = next(b for b in range(n) if g[x][b] == z)
                M[x * n + y, x2 * n + y2] += 1 / n
    return M


@pytest.mark.parametrize("L", [cyclic_square(1), cyclic_square(2), cyclic_square(5), group_square("S3")[0],
                               jm_sample(5, seed=2)], ids=["Z1", "Z2", "Z5", "S3", "JM5"])
def test_operator_matches_definition(L):
    op = build_operator(L)
    assert np.allclose(op.dense(), _dense_from_definition(L))
    assert is_symmetric_doubly_stochastic(op)
    assert np.max(np.diff(op.counts.indptr)) <= L.n


def test_small_operators():
    assert build_operator(cyclic_square(1)).dense().tolist() == [[1.0]]
    w = np.sort(dense_spectrum(build_operator(cyclic_square(2))))
    assert np.allclose(w, [0, 0, 1, 1])


def test_symmetric_on_random_squares():
    for s in range(10):
        assert is_symmetric_doubly_stochastic(build_operator(jm_sample(3 + s % 5, seed=s)))


def test_rho_examples():
    assert rho(build_operator(cyclic_square(1))).rho == 0
    for n in range(2, 9):
        assert rho(build_operator(cyclic_square(n))).rho == pytest.approx(1, abs=1e-9)
    r = rho(build_operator(group_square("A5")[0]), tol=1e-9)
    assert r.method == "iterative" and abs(r.rho - 1 / 3) <= 1e-6 and r.residual <= 1e-9
    assert set(r.to_json()) == {"n", "rho", "residual", "method"}
    r.trace6 = Fraction(7, 3)
    assert r.to_json()["trace6_num"] == 7 and r.to_json()["trace6_den"] == 3


def test_rho_iterative_agrees_with_dense():
    op = build_operator(jm_sample(9, seed=1))
    dense = rho(op)
    it = rho(op, dense_max_order=0)
    assert dense.method == "dense" and it.method == "iterative"
    assert abs(dense.rho - it.rho) <= 1e-8


def test_no_convergence():
    op = build_operator(jm_sample(12, seed=0))
    with pytest.raises(errors.NoConvergence) as exc:
        rho(op, tol=1e-14, dense_max_order=0, maxiter=2)
    assert exc.value.report is not None


def test_trace_examples():
    assert trace_power(build_operator(cyclic_square(2)), 6) == 2
    assert trace_power(build_operator(cyclic_square(3)), 6) == 3
    assert trace6_by_configurations(cyclic_square(2)) == 128
    assert trace6_by_configurations(cyclic_square(1)) == 1
    assert trace6_by_configurations(cyclic_square(3)) == 2187
    with pytest.raises(ValueError):
        trace_power(build_operator(cyclic_square(3)), 3)
    with pytest.raises(errors.BudgetExceeded):
        trace_power(build_operator(cyclic_square(8)), 6, budget=10)


@pytest.mark.parametrize("n", range(1, 6))
def test_trace_powers_match_eigenvalues(n):
    for L in (cyclic_square(n), jm_sample(n, seed=n)):
        op = build_operator(L)
        w = dense_spectrum(op)
        for k in (2, 4, 6):
            assert float(trace_power(op, k)) == pytest.approx(float(np.sum(w ** k)), abs=1e-9)
        entries = op.counts.toarray()
        assert trace_power(op, 2) == Fraction(int((entries ** 2).sum()), n * n)


@pytest.mark.parametrize("L", [cyclic_square(3), cyclic_square(4), group_square("S3")[0], jm_sample(4, seed=3)],
                         ids=["Z3", "Z4", "S3", "JM4"])
def test_closed_walks_oracle(L):
    assert trace6_by_configurations(L) == closed_six_walks(L.grid())


def test_trace_identity_builtins():
    for name in BUILTIN_GROUPS:
        L, _ = group_square(name)
        op = build_operator(L)
        assert trace6_by_configurations(L) == L.n ** 6 * trace_power(op, 6)


def test_predictions():
    _, z3 = group_square("Z3")
    assert predict_group_spectrum(z3) == {1: 3, 0: 6}
    _, s3 = group_square("S3")
    assert predict_group_spectrum(s3) == {1: 2, Fraction(1, 2): 12, Fraction(-1, 2): 4, 0: 18}
    _, q8 = group_square("Q8")
    assert sum(predict_group_spectrum(q8).values()) == 64
    assert len(expand_spectrum(predict_group_spectrum(s3))) == 36
    with pytest.raises(errors.BadIrrepDims):
        bad = object.__new__(GroupSpec)
        object.__setattr__(bad, "name", "bad")
        object.__setattr__(bad, "order", 6)
        object.__setattr__(bad, "irrep_dims", (1, 1))
        predict_group_spectrum(bad)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "S3", "D4", "Q8", "A4"])
def test_group_spectra(name):
    L, spec = group_square(name)
    r = compare_group_spectrum(L, spec, 1e-8)
    assert r["match"], r


def test_a4_rho_is_one():
    L, _ = group_square("A4")
    assert rho(build_operator(L)).rho == pytest.approx(1, abs=1e-9)


def test_spectral_inequality():
    squares = [group_square(g)[0] for g in BUILTIN_GROUPS] + [jm_sample(6, seed=s) for s in range(5)]
    for L in squares:
        op = build_operator(L)
        assert 1 + rho(op).rho ** 6 <= float(trace_power(op, 6)) + 1e-6


def test_quasi_use_examples():
    assert quasi_use_check(cyclic_square(3), ())["holds"]
    assert quasi_use_check(jm_sample(4, seed=5), (0, 1))["holds"]
    r = quasi_use_check(cyclic_square(5), (0, 1, 2))
    assert r["holds"] and r["rho"] == pytest.approx(1)
