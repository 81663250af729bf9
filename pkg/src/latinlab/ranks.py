"""Partition triples, the infection closure, and the rank functionals.

Cells of a triple (pi1, pi2, pi3) are numbered consecutively: the cells of
pi1 first, then pi2, then pi3.  A set of cells is an int bitmask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import CellTooLarge, GroundMismatch, GroundTooLarge, Infeasible, NotASystem
from .partitions import Partition, enumerate_partitions, join_all
from .square import LatinSquare

DEFAULT_CRANK_CAP = 8
DEFAULT_LAMBDA_NODES = 5 * 10 ** 6


@dataclass(frozen=True)
class PartitionTriple:
    parts: tuple[Partition, Partition, Partition]

    def __post_init__(self):
        sizes = {p.ground_size for p in self.parts}
        if len(sizes) != 1:
            raise GroundMismatch(f"ground sizes differ: {sorted(sizes)}")

    @classmethod
    def of(cls, p1, p2, p3) -> PartitionTriple:
        def conv(p):
            return p if isinstance(p, Partition) else Partition.from_labels(p)
        return cls((conv(p1), conv(p2), conv(p3)))

    @property
    def ground_size(self) -> int:
        return self.parts[0].ground_size

    @property
    def support(self) -> frozenset[int]:
        return frozenset().union(*(p.support for p in self.parts))

    @property
    def is_system(self) -> bool:
        s1, s2, s3 = (p.support for p in self.parts)
        return s1 == s2 == s3

    @cached_property
    def offsets(self) -> tuple[int, int, int]:
        a = self.parts[0].num_cells
        b = a + self.parts[1].num_cells
        return (0, a, b)

    @property
    def num_cells(self) -> int:
        return sum(p.num_cells for p in self.parts)

    @cached_property
    def point_masks(self) -> tuple[int, ...]:
        """For each point, the bitmask of its three cells."""
        out = []
        for a in range(self.ground_size):
            mask = 0
            for off, p in zip(self.offsets, self.parts):
                mask |= 1 << (off + p.rgs[a])
            out.append(mask)
        return tuple(out)

    @cached_property
    def join(self) -> Partition:
        return join_all(self.parts)

    def restrict(self, subset) -> PartitionTriple:
        return PartitionTriple(tuple(p.restrict(subset) for p in self.parts))

    def to_json(self) -> list[list[int]]:
        return [list(p.rgs) for p in self.parts]

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.parts) + ")"


def _close_masks(point_masks, S: int) -> int:
    changed = True
    while changed:
        changed = False
        for pm in point_masks:
            hit = S & pm
            if hit != pm and hit & (hit - 1):
                S |= pm
                changed = True
    return S


def close(psi: PartitionTriple, S: int) -> int:
    """Least closed cell set containing S: two cells through a point infect the third."""
    return _close_masks(psi.point_masks, S)


def _components(psi: PartitionTriple):
    """Point lists of the cells of pi1 v pi2 v pi3."""
    return [list(c) for c in psi.join.cells]


@lru_cache(maxsize=None)
def _min_generating(point_masks: tuple[int, ...]) -> int:
    """Smallest number of cells whose closure is every cell, for one join component.

    Each infection step fills one point, so |S| >= (#cells) - (#points).
    """
    full = 0
    for pm in point_masks:
        full |= pm
    cells = [1 << b for b in range(full.bit_length()) if full >> b & 1]
    lower = max(len(cells) - len(point_masks), 0)
    for k in range(lower, len(cells) + 1):
        for combo in itertools.combinations(cells, k):
            S = 0
            for c in combo:
                S |= c
            if _close_masks(point_masks, S) == full:
                return k
    raise AssertionError("full cell set is always generating")


def _local_masks(psi: PartitionTriple, points) -> tuple[int, ...]:
    """Point masks of one component with its cells renumbered 0, 1, ..."""
    relabel: dict[int, int] = {}
    out = []
    for a in points:
        pm = psi.point_masks[a]
        local = 0
        b = 0
        while pm:
            if pm & 1:
                local |= 1 << relabel.setdefault(b, len(relabel))
            pm >>= 1
            b += 1
        out.append(local)
    return tuple(out)


def min_generating_size(psi: PartitionTriple) -> int:
    return sum(_min_generating(_local_masks(psi, comp)) for comp in _components(psi))


def crank(psi: PartitionTriple, cap: int = DEFAULT_CRANK_CAP) -> int:
    """2|A| minus the least number of cells generating every cell under closure."""
    if psi.ground_size > cap:
        raise GroundTooLarge(f"ground size {psi.ground_size} exceeds crank cap {cap}")
    return 2 * psi.ground_size - min_generating_size(psi)


def trank(psi: PartitionTriple) -> int:
    p = psi.parts
    return max(p[i].rank + p[j].join(p[k]).rank
               for i, j, k in itertools.permutations(range(3)))


def lrank(psi: PartitionTriple) -> Fraction:
    p = psi.parts
    return Fraction(sum(q.rank for q in p) + psi.join.rank, 2)


def cx(psi: PartitionTriple) -> int:
    if not psi.is_system:
        raise NotASystem("complexity needs supp pi1 = supp pi2 = supp pi3")
    return trank(psi) - len(psi.support)


def crank_pi2_formula(psi: PartitionTriple) -> int:
    """rank(pi1) + rank(pi2) + rank(pi3) - k for triples with all cells of size <= 2.

    k counts the join cells on which all three partitions are perfect matchings.
    """
    if any(p.max_cell > 2 for p in psi.parts):
        raise CellTooLarge("all cells must have size at most 2")
    k = 0
    for comp in _components(psi):
        if all(len(p.cells[p.rgs[a]]) == 2 for p in psi.parts for a in comp):
            k += 1
    return sum(p.rank for p in psi.parts) - k


def enumerate_triples(m: int, max_cell: int | None = None, systems_only: bool = False):
    parts = list(enumerate_partitions(m, max_cell))
    for p1 in parts:
        for p2 in parts:
            if systems_only and p2.support != p1.support:
                continue
            for p3 in parts:
                if systems_only and p3.support != p1.support:
                    continue
                yield PartitionTriple((p1, p2, p3))


# ----------------------------------------------------------------------------------------------
# Lambda of cell indicators

def _count_component(L: LatinSquare, psi: PartitionTriple, points, budget: list) -> int:
    """Measurable (f1, f2, f3) restricted to one join component with all triples in L."""
    n = L.n
    sym, col_of, row_of = L.sym_at.tolist(), L.col_of.tolist(), L.row_of.tolist()
    off = psi.offsets
    pts = [tuple(off[i] + psi.parts[i].rgs[a] for i in range(3)) for a in points]
    value = {}

    def rec(idx: int) -> int:
        budget[0] -= 1
        if budget[0] < 0:
            raise Infeasible("lambda_indicator search budget exhausted")
        if idx == len(pts):
            return 1
        c1, c2, c3 = pts[idx]
        v1, v2, v3 = value.get(c1), value.get(c2), value.get(c3)
        known = (v1 is not None) + (v2 is not None) + (v3 is not None)
        if known == 3:
            return rec(idx + 1) if sym[v1][v2] == v3 else 0
        if known == 2:
            if v3 is None:
                cell, v = c3, sym[v1][v2]
            elif v2 is None:
                cell, v = c2, col_of[v1][v3]
            else:
                cell, v = c1, row_of[v2][v3]
            value[cell] = v
            out = rec(idx + 1)
            del value[cell]
            return out
        cell = c1 if v1 is None else c2
        total = 0
        for v in range(n):
            value[cell] = v
            total += rec(idx)
        del value[cell]
        return total

    return rec(0)


def count_measurable(L: LatinSquare, psi: PartitionTriple, budget: int = DEFAULT_LAMBDA_NODES) -> int:
    """Number of measurable triples (f1, f2, f3) with (f1(a), f2(a), f3(a)) in L for all a.

    Backtracking over cells with forward propagation, multiplied across join components.
    """
    left = [budget]
    total = 1
    for comp in _components(psi):
        total *= _count_component(L, psi, comp, left)
        if total == 0:
            return 0
    return total


def lambda_indicator(L: LatinSquare, psi: PartitionTriple, budget: int = DEFAULT_LAMBDA_NODES) -> Fraction:
    """Lambda(c_pi1, c_pi2, c_pi3) = (#measurable triples) / n^{2m}."""
    return Fraction(count_measurable(L, psi, budget), L.n ** (2 * psi.ground_size))


def lambda_indicator_bruteforce(L: LatinSquare, psi: PartitionTriple) -> Fraction:
    """Same quantity by enumerating pi1-measurable x and pi2-measurable y (vectorized)."""
    n, m = L.n, psi.ground_size
    p1, p2, p3 = psi.parts
    xs = np.array(list(itertools.product(range(n), repeat=p1.num_cells)), dtype=np.int64)
    ys = np.array(list(itertools.product(range(n), repeat=p2.num_cells)), dtype=np.int64)
    xs = xs.reshape(len(xs), p1.num_cells)[:, list(p1.rgs)] if m else np.zeros((1, 0), np.int64)
    ys = ys.reshape(len(ys), p2.num_cells)[:, list(p2.rgs)] if m else np.zeros((1, 0), np.int64)
    z = L.sym_at[xs[:, None, :], ys[None, :, :]]
    ok = np.ones(z.shape[:2], dtype=bool)
    for cell in p3.cells:
        for a in cell[1:]:
            ok &= z[:, :, a] == z[:, :, cell[0]]
    return Fraction(int(ok.sum()), n ** (2 * m))


def gamma0(L: LatinSquare, psi: PartitionTriple) -> Fraction:
    """n^{trank} Lambda(c_pi1, c_pi2, c_pi3)."""
    if not psi.is_system:
        raise NotASystem("gamma0 is defined here for partition systems")
    return L.n ** trank(psi) * lambda_indicator(L, psi)


def gamma(L: LatinSquare, psi: PartitionTriple) -> Fraction:
    """n^{trank} Lambda(P_A c_pi1, P_A c_pi2, P_A c_pi3) with A the common support."""
    from .fourier import c_pi, lambda_eval, p_project

    if not psi.is_system:
        raise NotASystem("gamma needs a partition system")
    A = sorted(psi.support)
    local = psi.restrict(A)
    fs = [p_project(c_pi(L.n, p), range(len(A))) for p in local.parts]
    return L.n ** trank(psi) * lambda_eval(L, *fs)
