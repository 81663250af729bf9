"""Approximately uniform random latin squares via the Jacobson-Matthews chain."""

from __future__ import annotations

import math

import numpy as np

from .square import LatinSquare, from_grid


def default_steps(n: int) -> int:
    if n <= 1:
        return 0
    return math.ceil(n ** 3 * math.log(n)) + 10 * n ** 3


class _JMChain:
    """Incidence-cube state of the chain.

    ``cube[r][c][s]`` is 1 when (r, c, s) is a triple, 0 otherwise, except in
    an improper state where exactly one cell holds -1.
    """

    def __init__(self, n: int, rng: np.random.Generator):
        self.n = n
        self.rng = rng
        self.cube = [[[1 if (r + c) % n == s else 0 for s in range(n)]
                      for c in range(n)] for r in range(n)]
        self.improper = None
        self._buf = rng.random(4096)
        self._pos = 0

    def _uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self.rng.random(4096)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def _pick(self, options):
        return options[int(self._uniform() * len(options))]

    def step(self) -> None:
        n, cube = self.n, self.cube
        if self.improper is None:
            while True:
                r = int(self._uniform() * n)
                c = int(self._uniform() * n)
                s = int(self._uniform() * n)
                if cube[r][c][s] == 0:
                    break
            r1 = next(i for i in range(n) if cube[i][c][s] == 1)
            c1 = next(j for j in range(n) if cube[r][j][s] == 1)
            s1 = next(k for k in range(n) if cube[r][c][k] == 1)
        else:
            r, c, s = self.improper
            r1 = self._pick([i for i in range(n) if cube[i][c][s] == 1])
            c1 = self._pick([j for j in range(n) if cube[r][j][s] == 1])
            s1 = self._pick([k for k in range(n) if cube[r][c][k] == 1])
        cube[r][c][s] += 1
        cube[r][c1][s1] += 1
        cube[r1][c][s1] += 1
        cube[r1][c1][s] += 1
        cube[r][c][s1] -= 1
        cube[r][c1][s] -= 1
        cube[r1][c][s] -= 1
        cube[r1][c1][s1] -= 1
        self.improper = (r1, c1, s1) if cube[r1][c1][s1] < 0 else None

    def grid(self) -> list[list[int]]:
        n = self.n
        return [[next(s for s in range(n) if self.cube[r][c][s] == 1) for c in range(n)]
                for r in range(n)]


def _advance(chain: _JMChain, visits: int) -> None:
    """Move until ``visits`` proper squares have been visited.

    Stopping at the first proper square after a fixed number of moves is
    biased (squares that end short improper excursions are over-sampled);
    counting proper visits runs the induced chain on proper squares, whose
    stationary law is uniform.
    """
    seen = 0
    while seen < visits:
        chain.step()
        if chain.improper is None:
            seen += 1


def jm_chain(n: int, seed: int, thin: int):
    """Yield proper squares from one long chain, one every ``thin`` proper visits."""
    chain = _JMChain(n, np.random.default_rng(seed))
    while True:
        if n > 1:
            _advance(chain, thin)
        yield from_grid(chain.grid())


def jm_sample(n: int, steps: int | None = None, seed: int = 0) -> LatinSquare:
    """Run the chain from the cyclic square for ``steps`` proper-square visits.

    Deterministic in (n, steps, seed).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if steps is None:
        steps = default_steps(n)
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    chain = _JMChain(n, np.random.default_rng(seed))
    if n > 1:
        _advance(chain, steps)
    return from_grid(chain.grid())
