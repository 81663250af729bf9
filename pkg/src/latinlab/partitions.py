"""The partition lattice: enumeration, rank, Moebius function, meet/join, kernels.

Partitions are stored as restricted-growth strings (RGS): ``rgs[i]`` is the
label of the cell holding i, labels appear in order of first occurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import DeltaOutOfRange, GroundMismatch, GroundTooLarge

DEFAULT_ENUM_CAP = 12


def _normalize(labels) -> tuple[int, ...]:
    relabel: dict = {}
    return tuple(relabel.setdefault(v, len(relabel)) for v in labels)


@dataclass(frozen=True, order=True)
class Partition:
    rgs: tuple[int, ...]

    def __post_init__(self):
        top = -1
        for v in self.rgs:
            if v > top + 1 or v < 0:
                raise ValueError(f"{self.rgs} is not a restricted-growth string")
            top = max(top, v)

    @classmethod
    def from_labels(cls, labels) -> Partition:
        return cls(_normalize(labels))

    @classmethod
    def from_cells(cls, cells, ground_size: int | None = None) -> Partition:
        cells = [sorted(c) for c in cells if c]
        m = ground_size if ground_size is not None else sum(len(c) for c in cells)
        labels = [None] * m
        for k, cell in enumerate(cells):
            for i in cell:
                if labels[i] is not None:
                    raise ValueError(f"point {i} appears in two cells")
                labels[i] = ("c", k)
        for i in range(m):
            if labels[i] is None:
                labels[i] = ("s", i)
        return cls.from_labels(labels)

    @classmethod
    def discrete(cls, m: int) -> Partition:
        return cls(tuple(range(m)))

    @classmethod
    def indiscrete(cls, m: int) -> Partition:
        return cls((0,) * m)

    @property
    def ground_size(self) -> int:
        return len(self.rgs)

    @cached_property
    def cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_cells)]
        for i, v in enumerate(self.rgs):
            out[v].append(i)
        return tuple(tuple(c) for c in out)

    @property
    def num_cells(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def rank(self) -> int:
        return self.ground_size - self.num_cells

    @property
    def mobius(self) -> int:
        sign = -1 if self.rank % 2 else 1
        return sign * math.prod(math.factorial(len(c) - 1) for c in self.cells)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for c in self.cells if len(c) > 1 for i in c)

    @property
    def is_matching(self) -> bool:
        """All cells are pairs (so the support is the whole ground set)."""
        return all(len(c) == 2 for c in self.cells)

    @property
    def max_cell(self) -> int:
        return max((len(c) for c in self.cells), default=0)

    def cell_sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def r3plus(self) -> int:
        """Number of cells of size at least 3."""
        return sum(1 for c in self.cells if len(c) >= 3)

    def leq(self, other: Partition) -> bool:
        """True if self refines other."""
        _check_ground(self, other)
        seen: dict[int, int] = {}
        for a, b in zip(self.rgs, other.rgs):
            if seen.setdefault(a, b) != b:
                return False
        return True

    def meet(self, other: Partition) -> Partition:
        _check_ground(self, other)
        return Partition.from_labels(zip(self.rgs, other.rgs))

    def join(self, other: Partition) -> Partition:
        _check_ground(self, other)
        return join_all([self, other])

    def restrict(self, subset) -> Partition:
        """Induced partition on the sorted positions ``subset``, relabelled 0..k-1."""
        return Partition.from_labels(self.rgs[i] for i in sorted(subset))

    def embed(self, size: int, positions=None) -> Partition:
        """Place this partition on ``positions`` of a ground set of ``size``; others singletons."""
        if positions is None:
            positions = range(self.ground_size)
        positions = list(positions)
        labels: list = [("s", i) for i in range(size)]
        for i, p in enumerate(positions):
            labels[p] = ("c", self.rgs[i])
        return Partition.from_labels(labels)

    def algebra(self) -> dict:
        return {"rank": self.rank, "mobius": self.mobius,
                "support": sorted(self.support), "is_matching": self.is_matching}

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, c)) + "}" for c in self.cells) + "}"


def _check_ground(a: Partition, b: Partition) -> None:
    if a.ground_size != b.ground_size:
        raise GroundMismatch(f"ground sizes differ: {a.ground_size} vs {b.ground_size}")


def join_all(parts) -> Partition:
    """Finest common coarsening of partitions on a shared ground set."""
    parts = list(parts)
    m = parts[0].ground_size
    for p in parts[1:]:
        _check_ground(parts[0], p)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in parts:
        for cell in p.cells:
            r0 = find(cell[0])
            for i in cell[1:]:
                ri = find(i)
                if ri != r0:
                    parent[ri] = r0
    return Partition.from_labels(find(i) for i in range(m))


def meet_join(a: Partition, b: Partition) -> tuple[Partition, Partition]:
    return a.meet(b), a.join(b)


def enumerate_partitions(m: int, max_cell: int | None = None, full_support: bool = False,
                         cap: int = DEFAULT_ENUM_CAP):
    """Yield every partition of [0, m) once, in lexicographic RGS order.

    ``max_cell`` bounds cell sizes; ``full_support`` drops partitions with singletons.
    """
    if m > cap:
        raise GroundTooLarge(f"ground size {m} exceeds enumeration cap {cap}")
    limit = m if max_cell is None else max_cell
    rgs = [0] * m
    sizes = [0] * (m + 1)

    def rec(i: int, top: int):
        if i == m:
            if full_support and any(sizes[k] == 1 for k in range(top + 1)):
                return
            yield Partition(tuple(rgs))
            return
        for v in range(top + 2):
            if sizes[v] >= limit:
                continue
            rgs[i] = v
            sizes[v] += 1
            yield from rec(i + 1, max(top, v))
            sizes[v] -= 1

    yield from rec(0, -1)


def bell(m: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def kernel(x, A=None) -> Partition:
    """Level-set partition of ``x`` restricted to the positions in A (relabelled 0..|A|-1)."""
    if A is None:
        A = range(len(x))
    return Partition.from_labels(x[i] for i in sorted(A))


def sigma_r(r: int, delta) -> Fraction:
    return Fraction(delta) if r == 1 else Fraction(r - 1)


def sigma_weight(pi: Partition, delta) -> Fraction:
    """Product over cells of sigma_{|p|}: delta for singletons, |p| - 1 otherwise."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise DeltaOutOfRange(f"delta={delta} not in (0, 1]")
    out = Fraction(1)
    for c in pi.cells:
        out *= sigma_r(len(c), delta)
    return out


def exp_formula_check(m: int, x) -> dict:
    """Compare sum over Pi_m of prod x_{|p|} with m! [y^m] exp(sum_k x_k y^k / k!)."""
    x = [Fraction(v) for v in x]
    if len(x) < m:
        x = x + [Fraction(0)] * (m - len(x))

    def xk(k):
        return x[k - 1] if k <= len(x) else Fraction(0)

    lhs = Fraction(0)
    for pi in enumerate_partitions(m):
        term = Fraction(1)
        for c in pi.cells:
            term *= xk(len(c))
        lhs += term
    # truncated series exp(g): E_k = (1/k) sum_j j g_j E_{k-j}
    g = [Fraction(0)] + [xk(k) / math.factorial(k) for k in range(1, m + 1)]
    E = [Fraction(1)] + [Fraction(0)] * m
    for k in range(1, m + 1):
        E[k] = sum((j * g[j] * E[k - j] for j in range(1, k + 1)), Fraction(0)) / k
    rhs = math.factorial(m) * E[m]
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def _integer_partitions(r: int, largest: int):
    """Yield integer partitions of r as dicts {part: multiplicity}, parts <= largest."""
    if r == 0:
        yield {}
        return
    for k in range(min(r, largest), 0, -1):
        for rest in _integer_partitions(r - k, k):
            out = dict(rest)
            out[k] = out.get(k, 0) + 1
            yield out


def _type_count(r: int, mult: dict) -> int:
    """Number of set partitions of an r-set with block-size multiplicities ``mult``."""
    denom = 1
    for k, a in mult.items():
        denom *= math.factorial(k) ** a * math.factorial(a)
    return math.factorial(r) // denom


def breaking_check(r: int, delta, variant: int) -> dict:
    """Both sides of the cell-splitting inequality for a single r-cell.

    variant 1: refinements with cells of size <= 3;
    variant 2: cells <= 4 with exactly as many >=3-cells as the original (0 or 1);
    variant 3: delta^{-r3+} times refinements into cells of size <= 2.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise DeltaOutOfRange(f"delta={delta} not in (0, 1]")
    if not 1 <= r <= 12:
        raise ValueError("r must lie in [1, 12]")
    lhs = sigma_r(r, delta)
    big = 1 if r >= 3 else 0
    largest = {1: 3, 2: 4, 3: 2}[variant]
    rhs = Fraction(0)
    for mult in _integer_partitions(r, largest):
        if variant == 2 and sum(a for k, a in mult.items() if k >= 3) != big:
            continue
        weight = Fraction(1)
        for k, a in mult.items():
            weight *= sigma_r(k, delta) ** a
        rhs += _type_count(r, mult) * weight
    if variant == 3:
        rhs /= delta ** big
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}
