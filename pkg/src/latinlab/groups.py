"""Group multiplication tables and a small catalog of irreducible dimensions."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass

from .errors import BadIrrepDims, GroupTooLarge
from .square import LatinSquare, from_grid

DEFAULT_GROUP_CAP = 120


@dataclass(frozen=True)
class GroupSpec:
    name: str
    order: int
    irrep_dims: tuple[int, ...]

    def __post_init__(self):
        if sum(d * d for d in self.irrep_dims) != self.order:
            raise BadIrrepDims(
                f"{self.name}: sum of squared irrep dims {self.irrep_dims} != order {self.order}")

    @property
    def min_nontrivial_dim(self) -> int | None:
        """D, the least dimension of a nontrivial irrep (None for the trivial group)."""
        dims = sorted(self.irrep_dims)
        return dims[1] if len(dims) > 1 else None


def _compose(g, h):
    # apply h first, then g
    return tuple(g[i] for i in h)


def closure(generators, cap: int = DEFAULT_GROUP_CAP) -> list[tuple[int, ...]]:
    """All elements of the permutation group generated by ``generators``, sorted."""
    gens = [tuple(g) for g in generators]
    degree = max((len(g) for g in gens), default=0)
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise ValueError(f"{g} is not a permutation of range({degree})")
    identity = tuple(range(degree))
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _compose(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupTooLarge(f"group order exceeds cap {cap}")
                queue.append(y)
    return sorted(seen)


def table_from_elements(elements, mul) -> LatinSquare:
    index = {e: i for i, e in enumerate(elements)}
    grid = [[index[mul(a, b)] for b in elements] for a in elements]
    return from_grid(grid)


def _abelian_invariants(order: int, count_killed) -> tuple[int, ...] | None:
    """Invariant factors d1 | d2 | ... matching #{x : x^d = 1} for all d | order."""

    def factorizations(n, smallest):
        if n == 1:
            yield ()
            return
        for d in range(max(smallest, 2), n + 1):
            if n % d == 0:
                for rest in factorizations(n // d, d):
                    if not rest or rest[0] % d == 0:
                        yield (d,) + rest

    divisors = [d for d in range(1, order + 1) if order % d == 0]
    for factors in factorizations(order, 2):
        if all(math.prod(math.gcd(d, f) for f in factors) == count_killed[d] for d in divisors):
            return factors
    return None


def identify(square: LatinSquare) -> GroupSpec | None:
    """Match a group table against the built-in catalog (None if unknown)."""
    n = square.n
    t = square.sym_at
    if n == 1:
        return GroupSpec("Z1", 1, (1,))
    ident = None
    for e in range(n):
        if all(int(t[e, j]) == j for j in range(n)):
            ident = e
            break
    if ident is None:
        return None
    orders = []
    for g in range(n):
        k, x = 1, g
        while x != ident:
            x = int(t[x, g])
            k += 1
        orders.append(k)
    abelian = all(int(t[a, b]) == int(t[b, a]) for a in range(n) for b in range(a + 1, n))
    if abelian:
        killed = {d: sum(1 for o in orders if d % o == 0) for d in range(1, n + 1) if n % d == 0}
        factors = _abelian_invariants(n, killed)
        name = "x".join(f"Z{f}" for f in factors) if factors else f"Ab{n}"
        return GroupSpec(name, n, (1,) * n)
    hist = Counter(orders)
    if n == 6:
        return GroupSpec("S3", 6, (1, 1, 2))
    if n == 8:
        if hist[2] == 5:
            return GroupSpec("D4", 8, (1, 1, 1, 1, 2))
        if hist[2] == 1:
            return GroupSpec("Q8", 8, (1, 1, 1, 1, 2))
    if n == 12 and hist == Counter({1: 1, 2: 3, 3: 8}):
        return GroupSpec("A4", 12, (1, 1, 1, 3))
    if n == 60 and hist == Counter({1: 1, 2: 15, 3: 20, 5: 24}):
        return GroupSpec("A5", 60, (1, 3, 3, 4, 5))
    return None


def cayley_table(generators, cap: int = DEFAULT_GROUP_CAP) -> tuple[LatinSquare, GroupSpec | None]:
    """Multiplication table of the permutation group generated by ``generators``.

    Elements are enumerated in sorted order (identity first).  The GroupSpec
    is attached when the group is recognised by :func:`identify`.
    """
    elements = closure(generators, cap)
    square = table_from_elements(elements, _compose)
    return square, identify(square)


def _quaternion_table() -> list[list[int]]:
    # index 2*b + s encodes sign (-1)^s times basis unit b in (1, i, j, k)
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    grid = []
    for a in range(8):
        row = []
        for b in range(8):
            sign, basis = unit[a // 2, b // 2]
            s = (a % 2 + b % 2 + (sign < 0)) % 2
            row.append(2 * basis + s)
        grid.append(row)
    return grid


def _cycle(points, degree):
    perm = list(range(degree))
    for a, b in zip(points, points[1:] + points[:1]):
        perm[a] = b
    return tuple(perm)


def catalog_generators(name: str):
    """Permutation generators for catalog names (Zn, ZaxZb, S3, D4, A4, A5)."""
    if name.startswith("Z") and "x" in name:
        a, b = (int(p[1:]) for p in name.split("x"))
        return [_cycle(list(range(a)), a + b), _cycle(list(range(a, a + b)), a + b)]
    if name.startswith("Z"):
        k = int(name[1:])
        return [_cycle(list(range(k)), k)] if k > 1 else [()]
    gens = {
        "S3": [_cycle([0, 1], 3), _cycle([0, 1, 2], 3)],
        "D4": [_cycle([0, 1, 2, 3], 4), _cycle([1, 3], 4)],
        "A4": [_cycle([0, 1, 2], 4), (1, 0, 3, 2)],
        "A5": [_cycle([0, 1, 2, 3, 4], 5), _cycle([0, 1, 2], 5)],
    }
    if name not in gens:
        raise KeyError(f"unknown catalog group {name!r}")
    return gens[name]


def group_square(name: str) -> tuple[LatinSquare, GroupSpec]:
    """Catalog group table by name, e.g. "Z5", "Z2xZ4", "S3", "Q8", "A5"."""
    if name == "Q8":
        square = from_grid(_quaternion_table())
        return square, GroupSpec("Q8", 8, (1, 1, 1, 1, 2))
    square, spec = cayley_table(catalog_generators(name))
    assert spec is not None
    return square, spec


BUILTIN_GROUPS = ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                  "Z2xZ2", "Z2xZ4", "Z3xZ3", "S3", "D4", "Q8", "A4"]
