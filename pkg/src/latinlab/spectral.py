"""The two-step Markov operator on row/column pairs and its spectrum."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import BadIrrepDims, BudgetExceeded, NoConvergence
from .groups import GroupSpec
from .square import LatinSquare

DENSE_MAX_ORDER = 16
DEFAULT_TRACE_BUDGET = 5 * 10 ** 7


@dataclass(frozen=True)
class MarkovOperator:
    """n * A as an integer sparse matrix on states x*n + y (A itself has denominator n)."""

    n: int
    counts: sp.csr_matrix

    def dense(self) -> np.ndarray:
        return self.counts.toarray() / self.n

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return (self.counts @ v) / self.n


@dataclass
class SpectralReport:
    n: int
    rho: float
    method: str
    residual: float
    eigenvalues: list[float] | None = None
    trace6: Fraction | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"n": self.n, "rho": self.rho, "residual": self.residual, "method": self.method}
        if self.trace6 is not None:
            out["trace6_num"] = self.trace6.numerator
            out["trace6_den"] = self.trace6.denominator
        return out


def build_operator(L: LatinSquare) -> MarkovOperator:
    """From (x, y) pick a symbol z; move to (x', y') with (x, y', z) and (x', y, z) in L."""
    n = L.n
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x2 = L.row_of[y, z]
    y2 = L.col_of[x, z]
    rows = (x * n + y).ravel()
    cols = (x2 * n + y2).ravel()
    data = np.ones(rows.size, dtype=np.int64)
    counts = sp.csr_matrix((data, (rows, cols)), shape=(n * n, n * n), dtype=np.int64)
    counts.sum_duplicates()
    return MarkovOperator(n, counts)


def is_symmetric_doubly_stochastic(op: MarkovOperator) -> bool:
    c = op.counts
    if (c != c.T).nnz:
        return False
    return bool(np.all(np.asarray(c.sum(axis=1)).ravel() == op.n)
                and np.all(np.asarray(c.sum(axis=0)).ravel() == op.n))


def dense_spectrum(op: MarkovOperator) -> np.ndarray:
    return np.linalg.eigvalsh(op.dense())


def rho(op: MarkovOperator, tol: float = 1e-9, seed: int = 0,
        dense_max_order: int = DENSE_MAX_ORDER, maxiter: int | None = None) -> SpectralReport:
    """Spectral radius of A - U (U = projection onto constants)."""
    n = op.n
    N = n * n
    if n == 1:
        return SpectralReport(n, 0.0, "dense", 0.0, [1.0])
    if n <= dense_max_order:
        M = op.dense() - 1.0 / N
        w = np.linalg.eigvalsh(M)
        r = float(np.max(np.abs(w)))
        residual = float(np.finfo(float).eps * N * 4)
        return SpectralReport(n, r, "dense", residual, sorted(np.linalg.eigvalsh(op.dense()).tolist()))

    def deflated(v):
        v = np.asarray(v).ravel()
        return op.matvec(v) - v.mean()

    B = LinearOperator((N, N), matvec=deflated, dtype=float)
    v0 = np.random.default_rng(seed).standard_normal(N)
    try:
        vals, vecs = eigsh(B, k=2, which="LM", v0=v0, tol=tol / 10, maxiter=maxiter)
    except ArpackNoConvergence as exc:
        best = float(np.max(np.abs(exc.eigenvalues))) if len(exc.eigenvalues) else float("nan")
        report = SpectralReport(n, best, "iterative", float("inf"))
        raise NoConvergence("Lanczos iteration did not converge", report) from exc
    i = int(np.argmax(np.abs(vals)))
    theta, v = float(vals[i]), vecs[:, i]
    v = v / np.linalg.norm(v)
    # for a symmetric operator some eigenvalue lies within this residual of theta
    residual = float(np.linalg.norm(deflated(v) - theta * v))
    if residual > tol:
        raise NoConvergence(f"residual {residual:.3g} above tolerance {tol:.3g}",
                            SpectralReport(n, abs(theta), "iterative", residual))
    return SpectralReport(n, abs(theta), "iterative", residual,
                          extra={"ritz_values": sorted(vals.tolist())})


def trace_power(op: MarkovOperator, k: int, budget: int = DEFAULT_TRACE_BUDGET) -> Fraction:
    """tr A^k exactly, from integer sparse powers of n*A."""
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    n = op.n
    C = op.counts.astype(object) if n ** k >= 2 ** 62 else op.counts
    half = C
    for _ in range(k // 2 - 1):
        half = half @ C
        if half.nnz > budget:
            raise BudgetExceeded(f"matrix power has {half.nnz} nonzeros (budget {budget})")
    # tr(H H) with H symmetric = sum of squares of entries; stay general
    t = int(half.multiply(half.T).sum())
    return Fraction(t, n ** k)


def trace6_by_configurations(L: LatinSquare) -> int:
    """Closed six-step walks of the chain counted directly: tuples (x0, y0, z1..z6) that return."""
    n = L.n
    row_of, col_of = L.row_of, L.col_of
    total = 0
    for x0 in range(n):
        xs = np.full(n, x0, dtype=np.int64)
        ys = np.arange(n, dtype=np.int64)
        starts_y = ys.copy()
        for _ in range(6):
            zs = np.arange(n, dtype=np.int64)
            nx = row_of[ys[:, None], zs[None, :]]
            ny = col_of[xs[:, None], zs[None, :]]
            xs, ys = nx.ravel(), ny.ravel()
            starts_y = np.repeat(starts_y, n)
        total += int(np.count_nonzero((xs == x0) & (ys == starts_y)))
    return total


def predict_group_spectrum(spec: GroupSpec) -> dict[Fraction, int]:
    """Eigenvalue multiplicities of A for a group table, from irreducible dimensions."""
    dims = list(spec.irrep_dims)
    if sum(d * d for d in dims) != spec.order:
        raise BadIrrepDims(f"sum of squares of {dims} != {spec.order}")
    out: Counter = Counter()
    for d in dims:
        out[Fraction(1, d)] += d ** 3 * (d + 1) // 2
        if d > 1:
            out[Fraction(-1, d)] += d ** 3 * (d - 1) // 2
    zeros = spec.order ** 2 - sum(d ** 4 for d in dims)
    if zeros:
        out[Fraction(0)] += zeros
    return dict(out)


def expand_spectrum(mults: dict[Fraction, int]) -> list[float]:
    vals = []
    for v, k in mults.items():
        vals.extend([float(v)] * k)
    return sorted(vals)


def compare_group_spectrum(L: LatinSquare, spec: GroupSpec, tol: float = 1e-8) -> dict:
    """Sorted dense spectrum of A against the prediction; reports the worst deviation."""
    predicted = np.array(expand_spectrum(predict_group_spectrum(spec)))
    actual = np.sort(dense_spectrum(build_operator(L)))
    worst = float(np.max(np.abs(predicted - actual)))
    return {"group": spec.name, "match": worst <= tol, "worst": worst}


def quasi_use_check(L: LatinSquare, A, rho_value: float | None = None, tol: float = 1e-9) -> dict:
    """|Lambda(f, f, f)| <= (rho + tol)^{|A|/2} ||f||_2^3 for f = P_A 1_S."""
    from .fourier import lambda_eval, pa1s, pa1s_table

    n = L.n
    A = tuple(sorted(A))
    if rho_value is None:
        rho_value = rho(build_operator(L), tol).rho
    if not A:
        # the zero-mean part of the constant P_{} 1_S is 0
        return {"lhs": Fraction(0), "rhs": 0.0, "rho": rho_value, "holds": True}
    f = pa1s(n, A) if n <= 6 else pa1s_table(n, A)
    lhs = abs(lambda_eval(L, f, f, f))
    rhs = (rho_value + tol) ** (len(A) / 2) * math.sqrt(float(f.norm2_sq())) ** 3
    return {"lhs": lhs, "rhs": rhs, "rho": rho_value, "holds": float(lhs) <= rhs * (1 + 1e-12)}
