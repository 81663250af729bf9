"""Exact-rational function calculus on X^A.

Functions of tuples x in X^m (X = range(n)) that depend only on the
coordinates in A are stored densely over X^A, one numpy axis per coordinate
of A in increasing order, with ``fractions.Fraction`` entries.  On top of
that sit the coordinate projections Q_B (conditional expectation) and P_A
(inclusion-exclusion of the Q_B), the umbral functional U, and the
trilinear latin-square average Lambda.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import BudgetExceeded, DeltaOutOfRange
from .partitions import Partition, kernel, sigma_r
from .square import LatinSquare

DEFAULT_TABLE_BUDGET = 10 ** 6
DEFAULT_LAMBDA_BUDGET = 10 ** 8


def _subsets(A):
    A = tuple(A)
    for k in range(len(A) + 1):
        yield from itertools.combinations(A, k)


class TupleFunction:
    __slots__ = ("n", "m", "A", "values")

    def __init__(self, n: int, m: int, A, values):
        self.n = n
        self.m = m
        self.A = tuple(sorted(A))
        values = np.asarray(values, dtype=object)
        if values.shape != (n,) * len(self.A):
            raise ValueError(f"values shape {values.shape} does not match n={n}, |A|={len(self.A)}")
        if any(i < 0 or i >= m for i in self.A):
            raise ValueError(f"support {self.A} not inside [0, {m})")
        self.values = values

    def __repr__(self):
        return f"TupleFunction(n={self.n}, m={self.m}, A={self.A})"

    @classmethod
    def constant(cls, n: int, m: int, c) -> TupleFunction:
        return cls(n, m, (), np.array(Fraction(c), dtype=object))

    @classmethod
    def from_callable(cls, n: int, m: int, A, fn, budget: int = DEFAULT_TABLE_BUDGET) -> TupleFunction:
        """Tabulate ``fn(x_A)`` where x_A is the tuple of values on sorted A."""
        A = tuple(sorted(A))
        if n ** len(A) > budget:
            raise BudgetExceeded(f"n^|A| = {n ** len(A)} exceeds table budget {budget}")
        vals = np.empty((n,) * len(A), dtype=object)
        for x in itertools.product(range(n), repeat=len(A)):
            vals[x] = Fraction(fn(x))
        return cls(n, m, A, vals)

    def embed(self, B) -> TupleFunction:
        """The same function viewed as supported on B (a superset of A)."""
        B = tuple(sorted(B))
        if not set(self.A) <= set(B):
            raise ValueError(f"cannot embed support {self.A} into {B}")
        if B == self.A:
            return self
        shape = [self.n if i in self.A else 1 for i in B]
        vals = np.broadcast_to(self.values.reshape(shape), (self.n,) * len(B)).copy()
        return TupleFunction(self.n, self.m, B, vals)

    def _aligned(self, other: TupleFunction):
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("functions live on different X^m")
        U = tuple(sorted(set(self.A) | set(other.A)))
        return self.embed(U), other.embed(U)

    def __add__(self, other):
        a, b = self._aligned(other)
        return TupleFunction(a.n, a.m, a.A, a.values + b.values)

    def __sub__(self, other):
        a, b = self._aligned(other)
        return TupleFunction(a.n, a.m, a.A, a.values - b.values)

    def __neg__(self):
        return TupleFunction(self.n, self.m, self.A, -self.values)

    def scale(self, c) -> TupleFunction:
        return TupleFunction(self.n, self.m, self.A, self.values * Fraction(c))

    def pointwise(self, other) -> TupleFunction:
        a, b = self._aligned(other)
        return TupleFunction(a.n, a.m, a.A, a.values * b.values)

    def abs(self) -> TupleFunction:
        return TupleFunction(self.n, self.m, self.A, np.abs(self.values))

    def mean(self) -> Fraction:
        return Fraction(self.values.sum()) / self.n ** len(self.A)

    def inner(self, other) -> Fraction:
        """E_x f(x) g(x) (real-valued functions)."""
        return self.pointwise(other).mean()

    def norm2_sq(self) -> Fraction:
        return self.inner(self)

    def l1(self) -> Fraction:
        return self.abs().mean()

    def equals(self, other) -> bool:
        a, b = self._aligned(other)
        return bool(np.all(a.values == b.values))

    def at(self, x) -> Fraction:
        """Value at a full tuple x in X^m."""
        return self.values[tuple(x[i] for i in self.A)]

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "A": list(self.A),
                "values": [str(Fraction(v)) for v in self.values.ravel()]}

    @classmethod
    def from_json(cls, data: dict) -> TupleFunction:
        n, A = data["n"], data["A"]
        vals = np.array([Fraction(v) for v in data["values"]], dtype=object).reshape((n,) * len(A))
        return cls(n, data["m"], A, vals)


def indicator_injective(n: int, m: int, A, budget: int = DEFAULT_TABLE_BUDGET) -> TupleFunction:
    """1 on injective assignments of the coordinates in A, else 0."""
    A = tuple(sorted(A))
    if n ** len(A) > budget:
        raise BudgetExceeded(f"n^|A| = {n ** len(A)} exceeds table budget {budget}")
    vals = np.full((n,) * len(A), Fraction(0), dtype=object)
    for x in itertools.permutations(range(n), len(A)):
        vals[x] = Fraction(1)
    return TupleFunction(n, m, A, vals)


def indicator_bijections(n: int) -> TupleFunction:
    """1_S on X^n: the indicator of bijections [n] -> X."""
    return indicator_injective(n, n, range(n))


def c_pi(n: int, pi: Partition, budget: int = DEFAULT_TABLE_BUDGET) -> TupleFunction:
    """Indicator that x in X^m is constant on every cell of ``pi`` (m = ground size)."""
    m = pi.ground_size
    A = tuple(sorted(pi.support))
    pos = {a: k for k, a in enumerate(A)}
    big = [[pos[i] for i in c] for c in pi.cells if len(c) > 1]
    return TupleFunction.from_callable(
        n, m, A, lambda x: all(len({x[i] for i in c}) == 1 for c in big), budget)


def q_project(f: TupleFunction, B) -> TupleFunction:
    """Average f over the coordinates outside B."""
    B = set(B)
    axes = tuple(k for k, i in enumerate(f.A) if i not in B)
    if not axes:
        return f
    keep = [i for i in f.A if i in B]
    vals = np.asarray(f.values.sum(axis=axes), dtype=object) / f.n ** len(axes)
    return TupleFunction(f.n, f.m, keep, np.asarray(vals, dtype=object))


def p_project(f: TupleFunction, A) -> TupleFunction:
    """P_A f = sum over B in A of (-1)^{|A \\ B|} Q_B f, supported on A."""
    A = tuple(sorted(A))
    total = np.full((f.n,) * len(A), Fraction(0), dtype=object)
    if not set(A) <= set(f.A):
        # f is constant in some coordinate of A, so every term cancels
        return TupleFunction(f.n, f.m, A, total)
    for B in _subsets(A):
        sign = -1 if (len(A) - len(B)) % 2 else 1
        total = total + sign * q_project(f, B).embed(A).values
    return TupleFunction(f.n, f.m, A, total)


# ----------------------------------------------------------------------------------------------
# umbral functional U

class UPoly:
    """Polynomial in z with exact rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        k = max(len(a), len(b))
        return UPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(k)])

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return UPoly([c * Fraction(other) for c in self.coeffs])
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    def __pow__(self, k: int):
        out = UPoly([1])
        for _ in range(k):
            out = out * self
        return out

    @classmethod
    def linear(cls, a, b) -> UPoly:
        """a*z + b"""
        return cls([b, a])


def u_apply(p: UPoly, n: int) -> Fraction:
    """Linear extension of z^k -> n^k / (n)_k for k <= n, and 0 for k > n."""
    total = Fraction(0)
    falling = 1
    for k, c in enumerate(p.coeffs):
        if k > n:
            break
        if k:
            falling *= n - k + 1
        total += c * Fraction(n ** k, falling)
    return total


def density(n: int) -> Fraction:
    return Fraction(math.factorial(n), n ** n)


def kernel_poly(pi: Partition) -> UPoly:
    """prod over cells p of (|p| z - 1)."""
    out = UPoly([1])
    for c in pi.cells:
        out = out * UPoly.linear(len(c), -1)
    return out


def pa1s_kernel_formula(n: int, A, x) -> Fraction:
    """P_A 1_S(x) through the kernel of x on A and the functional U.

    ``x`` is either the tuple of values on sorted A, or a longer tuple indexed
    by coordinate.
    """
    A = tuple(sorted(A))
    xa = tuple(x) if len(x) == len(A) else tuple(x[i] for i in A)
    pi = kernel(xa)
    sign = -1 if pi.rank % 2 else 1
    return sign * density(n) * u_apply(kernel_poly(pi), n)


def pa1s(n: int, A) -> TupleFunction:
    """P_A 1_S on X^A by explicit projection of the bijection indicator."""
    return p_project(indicator_bijections(n), A)


def pa1s_table(n: int, A) -> TupleFunction:
    """P_A 1_S on X^A tabulated from the kernel formula (cheap for large n)."""
    A = tuple(sorted(A))
    cache: dict[tuple, Fraction] = {}

    def value(x):
        key = kernel(x).rgs
        if key not in cache:
            cache[key] = pa1s_kernel_formula(n, A, x)
        return cache[key]

    return TupleFunction.from_callable(n, n, A, value)


def sparseval(n: int, A) -> dict:
    """||P_A 1_S||_2^2 from the projection pipeline versus density^2 U((z-1)^|A|)."""
    lhs = pa1s(n, A).norm2_sq()
    rhs = density(n) ** 2 * u_apply(UPoly.linear(1, -1) ** len(tuple(A)), n)
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def u_shifted_power(n: int, m: int) -> Fraction:
    """U((z-1)^m) by direct expansion sum_k C(m,k) (-1)^{m-k} n^k/(n)_k."""
    total = Fraction(0)
    for k in range(min(m, n) + 1):
        total += math.comb(m, k) * (-1) ** (m - k) * Fraction(n ** k, math.perm(n, k))
    return total


def u_positivity_scan(n_max: int, m_max: int | None = None) -> dict:
    """Check U((z-1)^m) >= 0 exactly for 1 <= n <= n_max, 0 <= m <= min(n, m_max).

    The diagnostic column is U((z-1)^m) (n/m)^{m/2}.
    """
    rows = []
    negatives = []
    for n in range(1, n_max + 1):
        for m in range(0, min(n, n_max if m_max is None else m_max) + 1):
            val = u_shifted_power(n, m)
            if val < 0:
                negatives.append((n, m))
            ratio = float(val) * (n / m) ** (m / 2) if m else float(val)
            rows.append({"n": n, "m": m, "value": val, "ratio": ratio})
    return {"all_nonnegative": not negatives, "negatives": negatives, "rows": rows}


def sign_check(n: int, A, f: TupleFunction | None = None) -> dict:
    """Check sign(P_A 1_S(x)) = (-1)^{rank ker x} at every x in X^A; zeros are reported."""
    A = tuple(sorted(A))
    f = pa1s(n, A) if f is None else f
    bad, zeros = [], []
    for x in itertools.product(range(n), repeat=len(A)):
        v = f.values[x]
        if v == 0:
            zeros.append(x)
            continue
        expected = -1 if kernel(x).rank % 2 else 1
        if (v > 0) != (expected > 0):
            bad.append(x)
    return {"holds": not bad and not zeros, "violations": bad, "zeros": zeros}


def _sqrt_lower(q: Fraction, digits: int = 30) -> Fraction:
    scale = 10 ** digits
    return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator), scale)


def _exp_lower(t: Fraction, terms: int = 40) -> Fraction:
    total, term = Fraction(0), Fraction(1)
    for j in range(terms):
        total += term
        term = term * t / (j + 1)
    # round down to keep the bound one-sided with a small denominator
    scale = 10 ** 30
    return Fraction(math.floor(total * scale), scale)


def majorant_check(n: int, A, C, f: TupleFunction | None = None) -> dict:
    """Check |P_A 1_S(x)| <= density * e^{delta m} * sigma^{(delta)}(ker x) with delta = sqrt(C m / n).

    delta and e^{delta m} are replaced by rational lower bounds, so a reported
    pass is a certified pass of the true inequality.
    """
    A = tuple(sorted(A))
    m = len(A)
    C = Fraction(C)
    delta_sq = C * m / n
    if delta_sq > 1:
        raise DeltaOutOfRange(f"delta^2 = C m / n = {delta_sq} > 1")
    delta = _sqrt_lower(delta_sq)
    growth = _exp_lower(delta * m)
    f = pa1s(n, A) if f is None else f
    dens = density(n)
    violations = []
    max_ratio = Fraction(0)
    for x in itertools.product(range(n), repeat=m):
        pi = kernel(x)
        sigma = Fraction(1)
        for c in pi.cells:
            sigma *= sigma_r(len(c), delta)
        bound = dens * growth * sigma
        v = abs(f.values[x])
        if bound == 0:
            if v:
                violations.append(x)
            continue
        max_ratio = max(max_ratio, v / bound)
        if v > bound:
            violations.append(x)
    return {"n": n, "m": m, "C": C, "delta_lower": delta,
            "violations": violations, "max_ratio": max_ratio, "holds": not violations}


def minimal_majorant_constant(n: int, A, grid=(1, 2, 4, 8)) -> dict:
    """Smallest C in ``grid`` passing majorant_check; C with delta > 1 are skipped."""
    f = pa1s(n, A)
    tried = {}
    for C in sorted(Fraction(c) for c in grid):
        try:
            res = majorant_check(n, A, C, f)
        except DeltaOutOfRange:
            tried[str(C)] = "delta>1"
            continue
        tried[str(C)] = "pass" if res["holds"] else "fail"
        if res["holds"]:
            return {"C": C, "tried": tried}
    return {"C": None, "tried": tried}


class SharpFlatSplit(NamedTuple):
    sharp: TupleFunction
    flat: TupleFunction
    flat_l1: Fraction


def sharp_flat_split(n: int, A, eps, R: TupleFunction | None = None) -> SharpFlatSplit:
    """Split R = |P_A 1_S| by whether ker x has fewer than eps*|A| cells of size >= 3."""
    A = tuple(sorted(A))
    m = len(A)
    eps = Fraction(eps)
    R = pa1s(n, A).abs() if R is None else R
    sharp = np.empty_like(R.values)
    flat = np.empty_like(R.values)
    for x in itertools.product(range(n), repeat=m):
        in_sharp = kernel(x).r3plus() < eps * m
        sharp[x] = R.values[x] if in_sharp else Fraction(0)
        flat[x] = Fraction(0) if in_sharp else R.values[x]
    flat_f = TupleFunction(n, R.m, A, flat)
    return SharpFlatSplit(TupleFunction(n, R.m, A, sharp), flat_f, flat_f.l1())


def mobius_expansion(n: int, m: int, A) -> TupleFunction:
    """sum over pi in Pi_A of mu(pi) c_pi, as a function on X^A."""
    from .partitions import enumerate_partitions

    A = tuple(sorted(A))
    total = TupleFunction(n, m, A, np.full((n,) * len(A), Fraction(0), dtype=object))
    for pi in enumerate_partitions(len(A)):
        c = c_pi(n, pi)
        # c lives on X^{supp pi} with coordinates 0..|A|-1; relabel onto A
        c = TupleFunction(n, m, [A[i] for i in c.A], c.values)
        total = total + c.scale(pi.mobius)
    return total


# ----------------------------------------------------------------------------------------------
# the latin square tensor

def _as_integers(arrays):
    """Scale Fraction arrays by a common denominator; returns (int arrays, denominator)."""
    den = 1
    for a in arrays:
        for v in a.ravel():
            den = math.lcm(den, Fraction(v).denominator)
    ints = [np.array([int(Fraction(v) * den) for v in a.ravel()], dtype=object) for a in arrays]
    return ints, den


def lambda_eval(L: LatinSquare, f: TupleFunction, g: TupleFunction, h: TupleFunction,
                budget: int = DEFAULT_LAMBDA_BUDGET) -> Fraction:
    """E over (x, y, z) in L^m of f(x) g(y) h(z), exactly.

    Coordinates outside every support average out, so only the union of the
    three supports is enumerated: pairs (x, y) with z read from the square.
    """
    n = L.n
    if not (f.n == g.n == h.n == n and f.m == g.m == h.m):
        raise ValueError("f, g, h must share n (= order of L) and m")
    U = tuple(sorted(set(f.A) | set(g.A) | set(h.A)))
    k = len(U)
    if n ** (2 * k) > budget:
        raise BudgetExceeded(f"n^(2k) = {n ** (2 * k)} exceeds budget {budget}")
    (F, G, H), den = _as_integers([f.embed(U).values, g.embed(U).values, h.embed(U).values])
    bound = max(max((abs(v) for v in F), default=0), 1) * max(max((abs(v) for v in G), default=0), 1) \
        * max(max((abs(v) for v in H), default=0), 1) * n ** (2 * k)
    if bound < 2 ** 62:
        F, G, H = (a.astype(np.int64) for a in (F, G, H))
    N = n ** k
    digits = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64).reshape(N, k)
    weights = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    sym = L.sym_at
    total = 0
    block = max(1, min(N, 4_000_000 // max(N, 1)))
    for start in range(0, N, block):
        xd = digits[start:start + block]
        zidx = np.zeros((len(xd), N), dtype=np.int64)
        for d in range(k):
            zidx += sym[xd[:, d][:, None], digits[:, d][None, :]] * weights[d]
        inner = H[zidx] @ G
        total += int((F[start:start + block] * inner).sum())
    return Fraction(total, den ** 3 * n ** (2 * k))


def transversal_lambda(L: LatinSquare) -> Fraction:
    """Lambda(1_S, 1_S, 1_S) on L^n, exactly."""
    f = indicator_bijections(L.n)
    return lambda_eval(L, f, f, f)


def decomposition_check(L: LatinSquare) -> dict:
    """sum_A Lambda(P_A 1_S, P_A 1_S, P_A 1_S) against Lambda(1_S, 1_S, 1_S) and the transversal count."""
    from .transversals import count_transversals

    n = L.n
    total = Fraction(0)
    for A in _subsets(range(n)):
        f = pa1s(n, A)
        total += lambda_eval(L, f, f, f)
    direct = transversal_lambda(L)
    count = count_transversals(L)
    via_count = Fraction(count * math.factorial(n), n ** (2 * n))
    return {"sum": total, "lambda": direct, "from_count": via_count, "transversals": count,
            "equal": total == direct == via_count}


def diagonality_check(L: LatinSquare, max_size: int = 3) -> dict:
    """Lambda(P_A 1_S, P_B 1_S, P_C 1_S) vanishes unless A = B = C."""
    n = L.n
    subsets = [A for A in _subsets(range(n)) if len(A) <= max_size]
    tables = {A: pa1s(n, A) for A in subsets}
    checked, failures = 0, []
    for A in subsets:
        for B in subsets:
            for C in subsets:
                if A == B == C:
                    continue
                val = lambda_eval(L, tables[A], tables[B], tables[C])
                checked += 1
                if val != 0:
                    failures.append((A, B, C, val))
    return {"checked": checked, "failures": failures, "holds": not failures}


def sigma_m(m: int) -> dict:
    """Partial sum sum_{2k <= m} (-1)^k / (2^k k!) and the alternating-series error bound."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    value = sum((Fraction((-1) ** k, 2 ** k * math.factorial(k)) for k in range(m // 2 + 1)),
                Fraction(0))
    k = m // 2 + 1
    bound = Fraction(1, 2 ** k * math.factorial(k))
    return {"m": m, "value": value, "error_bound": bound}


def major_arc_sum(L: LatinSquare, m: int) -> dict:
    """M_m = sum over |A| <= m of Lambda(P_A 1_S, P_A 1_S, P_A 1_S), with its normalized form."""
    n = L.n
    total = Fraction(0)
    for A in _subsets(range(n)):
        if len(A) > m:
            continue
        f = pa1s_table(n, A)
        total += lambda_eval(L, f, f, f)
    normalized = total / density(n) ** 3
    return {"m": m, "M": total, "normalized": normalized, "sigma": sigma_m(m)["value"]}
