"""Exact transversal counts."""

from __future__ import annotations

from itertools import permutations

from .errors import OrderTooLarge
from .square import LatinSquare

DEFAULT_ORDER_CAP = 14


def count_transversals(square: LatinSquare, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Number of transversals, by row-wise backtracking over column/symbol bitmasks."""
    n = square.n
    if n > cap:
        raise OrderTooLarge(f"order {n} exceeds cap {cap}")
    # symbit[i][c] = bit of the symbol in cell (i, c)
    symbit = [[1 << int(s) for s in row] for row in square.sym_at]
    full = (1 << n) - 1

    def rec(i: int, cols_free: int, syms_used: int) -> int:
        row = symbit[i]
        if i == n - 1:
            # exactly one free column remains
            c = cols_free.bit_length() - 1
            return 0 if row[c] & syms_used else 1
        total = 0
        avail = cols_free
        while avail:
            low = avail & -avail
            avail ^= low
            sb = row[low.bit_length() - 1]
            if not sb & syms_used:
                total += rec(i + 1, cols_free ^ low, syms_used | sb)
        return total

    return rec(0, full, 0)


def count_transversals_bruteforce(square: LatinSquare) -> int:
    """Permanent-style definition: permutations sigma with distinct symbols at (i, sigma(i))."""
    n = square.n
    grid = square.grid()
    return sum(1 for sigma in permutations(range(n))
               if len({grid[i][sigma[i]] for i in range(n)}) == n)
