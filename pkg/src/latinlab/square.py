"""Latin squares as data: construction, validation, text/JSON I/O."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import NotLatin


class LatinSquare:
    """An order-n latin square with three consistent lookup tables.

    ``sym_at[r, c]`` is the symbol in row r, column c; ``col_of[r, s]`` is
    the column holding symbol s in row r; ``row_of[c, s]`` is the row holding
    symbol s in column c.  All arrays are read-only.
    """

    __slots__ = ("n", "sym_at", "col_of", "row_of")

    def __init__(self, sym_at, col_of, row_of):
        self.n = int(sym_at.shape[0])
        for arr in (sym_at, col_of, row_of):
            arr.setflags(write=False)
        self.sym_at = sym_at
        self.col_of = col_of
        self.row_of = row_of

    def __eq__(self, other):
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.sym_at, other.sym_at)

    def __hash__(self):
        return hash((self.n, self.sym_at.tobytes()))

    def __repr__(self):
        return f"LatinSquare(n={self.n})"

    def grid(self) -> list[list[int]]:
        return self.sym_at.tolist()

    def triples(self):
        """Iterate the n^2 triples (row, col, symbol)."""
        n = self.n
        for r in range(n):
            for c in range(n):
                yield r, c, int(self.sym_at[r, c])

    def validate(self) -> None:
        """Re-check every invariant; raises NotLatin on failure."""
        n = self.n
        full = np.arange(n)
        for r in range(n):
            if not np.array_equal(np.sort(self.sym_at[r]), full):
                raise NotLatin(f"row {r} is not a permutation of 0..{n - 1}")
        for c in range(n):
            if not np.array_equal(np.sort(self.sym_at[:, c]), full):
                raise NotLatin(f"column {c} is not a permutation of 0..{n - 1}")
        rows = np.arange(n)[:, None]
        if not np.array_equal(self.sym_at[rows, self.col_of], np.broadcast_to(full, (n, n))):
            raise NotLatin("col_of table inconsistent with sym_at")
        cols = np.arange(n)[:, None]
        if not np.array_equal(self.sym_at[self.row_of, cols], np.broadcast_to(full, (n, n))):
            raise NotLatin("row_of table inconsistent with sym_at")

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += [" ".join(str(int(v)) for v in row) for row in self.sym_at]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"n": self.n, "grid": self.grid()}


def from_grid(grid) -> LatinSquare:
    """Build a LatinSquare from an n x n table of symbols in [0, n)."""
    sym_at = np.array(grid, dtype=np.int64)
    if sym_at.size == 0:
        raise NotLatin("empty grid")
    if sym_at.ndim != 2 or sym_at.shape[0] != sym_at.shape[1]:
        raise NotLatin(f"grid must be square, got shape {sym_at.shape}")
    n = sym_at.shape[0]
    if sym_at.min() < 0 or sym_at.max() >= n:
        raise NotLatin(f"entries must lie in [0, {n})")
    col_of = np.full((n, n), -1, dtype=np.int64)
    row_of = np.full((n, n), -1, dtype=np.int64)
    for r in range(n):
        for c in range(n):
            s = sym_at[r, c]
            if col_of[r, s] >= 0:
                raise NotLatin(f"row {r} repeats symbol {s}")
            if row_of[c, s] >= 0:
                raise NotLatin(f"column {c} repeats symbol {s}")
            col_of[r, s] = c
            row_of[c, s] = r
    sq = LatinSquare(sym_at, col_of, row_of)
    sq.validate()
    return sq


def cyclic_square(n: int) -> LatinSquare:
    """Addition table of Z/nZ."""
    i = np.arange(n)
    return from_grid((i[:, None] + i[None, :]) % n)


def parse_text(text: str) -> LatinSquare:
    tokens = text.split()
    if not tokens:
        raise NotLatin("empty input")
    n = int(tokens[0])
    vals = [int(t) for t in tokens[1:]]
    if len(vals) != n * n:
        raise NotLatin(f"expected {n * n} entries after the order line, got {len(vals)}")
    return from_grid([vals[i * n:(i + 1) * n] for i in range(n)])


def read_square(path) -> LatinSquare:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return from_grid(json.loads(text)["grid"])
    return parse_text(text)


def write_square(square: LatinSquare, path) -> None:
    Path(path).write_text(square.to_text())


def transversal_asymptotic(n: int) -> tuple[float, Fraction]:
    """Return (e^{-1/2} n!^2 / n^n, the exact rational n!^2 / n^n)."""
    if n < 1:
        raise ValueError("n must be positive")
    exact = Fraction(math.factorial(n) ** 2, n ** n)
    return math.exp(-0.5) * float(exact), exact
