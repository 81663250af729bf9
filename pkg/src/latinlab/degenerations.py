"""Triple systems, the six-step closed-walk system H1 and its degenerations.

Vertices of a triple system are numbered globally: X first, then Y, then Z.
Vertex and triple sets are int bitmasks.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, NotClosed, Timeout
from .partitions import Partition

ROLE_NAMES = "xyz"
DEFAULT_CANON_FRONTIER = 200_000
MARGIN_MAX_TRIPLES = 12


@dataclass(frozen=True)
class TripleSystem:
    class_sizes: tuple[int, int, int]
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for t in self.triples:
            for r in range(3):
                if not 0 <= t[r] < self.class_sizes[r]:
                    raise ValueError(f"triple {t} out of range for class sizes {self.class_sizes}")
        if len(set(self.triples)) != len(self.triples):
            raise ValueError("duplicate triples")

    @classmethod
    def from_triples(cls, triples, class_sizes=None) -> TripleSystem:
        triples = sorted(set(tuple(int(v) for v in t) for t in triples))
        if class_sizes is None:
            class_sizes = tuple(max((t[r] for t in triples), default=-1) + 1 for r in range(3))
        return cls(tuple(class_sizes), tuple(triples))

    @property
    def v(self) -> int:
        return sum(self.class_sizes)

    @property
    def e(self) -> int:
        return len(self.triples)

    @cached_property
    def triple_masks(self) -> tuple[int, ...]:
        ox, oy = self.class_sizes[0], self.class_sizes[0] + self.class_sizes[1]
        return tuple((1 << x) | (1 << (ox + y)) | (1 << (oy + z)) for x, y, z in self.triples)

    def vertex_index(self, role: int, idx: int) -> int:
        return sum(self.class_sizes[:role]) + idx

    def vertex_name(self, g: int) -> tuple[int, int]:
        for role in range(3):
            if g < self.class_sizes[role]:
                return role, g
            g -= self.class_sizes[role]
        raise IndexError(g)

    def is_latin(self) -> bool:
        seen = set()
        for t in self.triples:
            for a, b in ((0, 1), (0, 2), (1, 2)):
                key = (a, b, t[a], t[b])
                if key in seen:
                    return False
                seen.add(key)
        return True

    def sub(self, mask: int) -> TripleSystem:
        """Subsystem of the triples selected by ``mask``, vertices relabelled."""
        chosen = [t for i, t in enumerate(self.triples) if mask >> i & 1]
        return compact(chosen)

    def to_json(self) -> dict:
        return {"class_sizes": list(self.class_sizes), "triples": [list(t) for t in self.triples]}


def compact(triples) -> TripleSystem:
    """Triple system on the vertices actually used, relabelled in sorted order per class."""
    used = [sorted({t[r] for t in triples}) for r in range(3)]
    maps = [{v: i for i, v in enumerate(u)} for u in used]
    return TripleSystem.from_triples(
        [tuple(maps[r][t[r]] for r in range(3)) for t in triples], tuple(len(u) for u in used))


def build_H1() -> TripleSystem:
    """Closed six-step walk: (x_{i-1}, y_i, z_i) and (x_i, y_{i-1}, z_i), i = 1..6, indices mod 6.

    z_i is stored as index i - 1.
    """
    triples = []
    for i in range(1, 7):
        triples.append(((i - 1) % 6, i % 6, i - 1))
        triples.append((i % 6, (i - 1) % 6, i - 1))
    return TripleSystem.from_triples(triples, (6, 6, 6))


# ----------------------------------------------------------------------------------------------
# closure and generation

def _close_vertices(masks, S: int) -> int:
    changed = True
    while changed:
        changed = False
        for tm in masks:
            hit = S & tm
            if hit != tm and hit & (hit - 1):
                S |= tm
                changed = True
    return S


def vertex_closure(H: TripleSystem, S) -> frozenset[tuple[int, int]]:
    """Least vertex set containing S in which two vertices of a triple force the third.

    S is an iterable of (role, index) pairs with role 0, 1, 2 for X, Y, Z.
    """
    mask = 0
    for role, idx in S:
        mask |= 1 << H.vertex_index(role, idx)
    out = _close_vertices(H.triple_masks, mask)
    return frozenset(H.vertex_name(g) for g in range(H.v) if out >> g & 1)


def _incident(masks, F: int) -> int:
    out = 0
    i = 0
    while F:
        if F & 1:
            out |= masks[i]
        F >>= 1
        i += 1
    return out


def generates(H: TripleSystem, F0: int, F: int | None = None) -> bool:
    """Does the triple subset F0 generate the subsystem F (default: all of H)?"""
    if F is None:
        F = (1 << H.e) - 1
    masks = [m for i, m in enumerate(H.triple_masks) if F >> i & 1]
    target = _incident(H.triple_masks, F)
    return _close_vertices(masks, _incident(H.triple_masks, F0)) == target


def d_value(H: TripleSystem, max_triples: int = 16) -> int:
    """Least number of triples whose vertices close up to every vertex of H."""
    if H.e > max_triples:
        raise BudgetExceeded(f"{H.e} triples exceeds the search limit {max_triples}")
    full = (1 << H.v) - 1
    masks = H.triple_masks
    for k in range(0, H.e + 1):
        for combo in itertools.combinations(masks, k):
            S = 0
            for m in combo:
                S |= m
            if _close_vertices(masks, S) == full:
                return k
    raise AssertionError("the whole system always generates itself")


_PAIRS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _subset_pairs(e: int) -> tuple[np.ndarray, np.ndarray]:
    """All (F, F0) with F0 a subset of F over e triples (3^e pairs)."""
    if e not in _PAIRS_CACHE:
        Fs, F0s = [], []
        for F in range(1, 1 << e):
            sub = np.array(_submasks(F), dtype=np.int64)
            Fs.append(np.full(len(sub), F, dtype=np.int64))
            F0s.append(sub)
        _PAIRS_CACHE[e] = (np.concatenate(Fs), np.concatenate(F0s))
    return _PAIRS_CACHE[e]


def _submasks(F: int) -> list[int]:
    out = []
    s = F
    while True:
        out.append(s)
        if s == 0:
            return out
        s = (s - 1) & F


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    c = np.zeros_like(a)
    while np.any(a):
        c += a & 1
        a >>= 1
    return c


def subsystem_d_values(H: TripleSystem, max_triples: int = MARGIN_MAX_TRIPLES) -> np.ndarray:
    """d(F) for every triple subset F (index = bitmask), all pairs F0 of F at once."""
    e = H.e
    if e > max_triples:
        raise BudgetExceeded(f"{e} triples: 3^{e} subset pairs exceeds the limit")
    masks = np.array(H.triple_masks, dtype=np.int64)
    # vertex set of every triple subset
    inc = np.zeros(1 << e, dtype=np.int64)
    for s in range(1, 1 << e):
        low = s & -s
        inc[s] = inc[s ^ low] | masks[low.bit_length() - 1]
    F, F0 = _subset_pairs(e)
    S = inc[F0].copy()
    bits = [[g for g in range(H.v) if int(m) >> g & 1] for m in masks]
    while True:
        before = S.copy()
        for i in range(e):
            a, b, c = bits[i]
            hits = ((S >> a) & 1) + ((S >> b) & 1) + ((S >> c) & 1)
            fire = ((F >> i) & 1).astype(bool) & (hits >= 2)
            S[fire] |= masks[i]
        if np.array_equal(S, before):
            break
    ok = S == inc[F]
    size = _popcount(F0)
    d = np.full(1 << e, e + 1, dtype=np.int64)
    np.minimum.at(d, F[ok], size[ok])
    d[0] = 0
    return d


def stability_margin(H: TripleSystem, max_triples: int = MARGIN_MAX_TRIPLES) -> int:
    """max over nonempty triple subsets F of d(F) - v(F) + e(F)."""
    d = subsystem_d_values(H, max_triples)
    masks = H.triple_masks
    best = None
    for F in range(1, 1 << H.e):
        val = int(d[F]) - _incident(masks, F).bit_count() + F.bit_count()
        if best is None or val > best:
            best = val
    return best


# ----------------------------------------------------------------------------------------------
# closed vertex-partition triples of H1

@dataclass(frozen=True)
class VertexPartitionTriple:
    parts: tuple[Partition, Partition, Partition]

    def labels(self) -> list[tuple[int, int]]:
        """(role, cell) for every global vertex of the base system."""
        return [(r, c) for r, p in enumerate(self.parts) for c in p.rgs]

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(c for p in self.parts for c in p.rgs)

    def is_discrete(self) -> bool:
        return all(p.rank == 0 for p in self.parts)

    def to_json(self) -> list[list[int]]:
        return [list(p.rgs) for p in self.parts]


class _UnionFind:
    def __init__(self, labels):
        self.parent = list(labels)

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _global_triples(H: TripleSystem):
    ox, oy = H.class_sizes[0], H.class_sizes[0] + H.class_sizes[1]
    return [(x, ox + y, oy + z) for x, y, z in H.triples]


def _close_uf(uf: _UnionFind, gtriples) -> None:
    pairs = list(itertools.combinations(gtriples, 2))
    changed = True
    while changed:
        changed = False
        for s, t in pairs:
            same = [uf.find(s[r]) == uf.find(t[r]) for r in range(3)]
            if sum(same) == 2:
                r = same.index(False)
                uf.union(s[r], t[r])
                changed = True


def _to_vpt(H: TripleSystem, uf: _UnionFind) -> VertexPartitionTriple:
    parts = []
    start = 0
    for size in H.class_sizes:
        parts.append(Partition.from_labels(uf.find(g) for g in range(start, start + size)))
        start += size
    return VertexPartitionTriple(tuple(parts))


def _uf_from_vpt(H: TripleSystem, pt: VertexPartitionTriple) -> _UnionFind:
    uf = _UnionFind(range(H.v))
    start = 0
    for size, p in zip(H.class_sizes, pt.parts):
        for cell in p.cells:
            for i in cell[1:]:
                uf.union(start + cell[0], start + i)
        start += size
    return uf


def closure_of_merges(merges, H: TripleSystem | None = None,
                      base: VertexPartitionTriple | None = None) -> VertexPartitionTriple:
    """Least closed partition triple identifying each ((role, i), (role, j)) pair in ``merges``."""
    H = build_H1() if H is None else H
    uf = _UnionFind(range(H.v)) if base is None else _uf_from_vpt(H, base)
    for (ra, a), (rb, b) in merges:
        if ra != rb:
            raise ValueError("merges must pair vertices of the same class")
        uf.union(H.vertex_index(ra, a), H.vertex_index(rb, b))
    _close_uf(uf, _global_triples(H))
    return _to_vpt(H, uf)


def is_closed(pt: VertexPartitionTriple, H: TripleSystem | None = None) -> bool:
    H = build_H1() if H is None else H
    lab = [c for p in pt.parts for c in p.rgs]
    for s, t in itertools.combinations(_global_triples(H), 2):
        same = [lab[s[r]] == lab[t[r]] for r in range(3)]
        if sum(same) == 2:
            return False
    return True


def quotient_system(pt: VertexPartitionTriple, H: TripleSystem | None = None) -> TripleSystem:
    H = build_H1() if H is None else H
    if not is_closed(pt, H):
        raise NotClosed("partition triple is not closed under the forcing rule")
    images = {tuple(pt.parts[r].rgs[t[r]] for r in range(3)) for t in H.triples}
    Q = TripleSystem.from_triples(images, tuple(p.num_cells for p in pt.parts))
    assert Q.is_latin()
    return Q


# ----------------------------------------------------------------------------------------------
# canonical forms

def _encode(triples, class_sizes, frontier_cap: int) -> tuple:
    """Lexicographically least triple sequence over orderings, labels by first appearance per class.

    Greedy extension of all tied prefixes is exact: every sequence has the same length, so the
    least sequence extends a least prefix.
    """
    e = len(triples)
    # state: (used-triple bitmask, per-class label maps as tuples)
    frontier = {(0, ((), (), ()))}
    seq = []
    for _ in range(e):
        best = None
        nxt = set()
        for used, maps in frontier:
            dmaps = [dict(m) for m in maps]
            for i, t in enumerate(triples):
                if used >> i & 1:
                    continue
                code = tuple(dmaps[r].get(t[r], len(dmaps[r])) for r in range(3))
                if best is None or code < best:
                    best = code
                    nxt = set()
                if code == best:
                    new_maps = []
                    for r in range(3):
                        m = maps[r]
                        if t[r] not in dmaps[r]:
                            m = m + ((t[r], len(m)),)
                        new_maps.append(tuple(sorted(m)))
                    nxt.add((used | 1 << i, tuple(new_maps)))
        if len(nxt) > frontier_cap:
            raise Timeout(f"canonical form frontier exceeded {frontier_cap} states")
        seq.append(best)
        frontier = nxt
    return tuple(class_sizes), tuple(seq)


def canonical_form(H: TripleSystem, allow_role_swap: bool = False,
                   frontier_cap: int = DEFAULT_CANON_FRONTIER) -> str:
    """String equal for two systems iff they are isomorphic (classes kept, or permutable)."""
    perms = list(itertools.permutations(range(3))) if allow_role_swap else [(0, 1, 2)]
    best = None
    for perm in perms:
        triples = [tuple(t[p] for p in perm) for t in H.triples]
        sizes = tuple(H.class_sizes[p] for p in perm)
        code = _encode(triples, sizes, frontier_cap)
        if best is None or code < best:
            best = code
    sizes, seq = best
    return "{}.{}.{}|".format(*sizes) + " ".join("".join(
        f"{ROLE_NAMES[r]}{t[r]}" for r in range(3)) for t in seq)


# ----------------------------------------------------------------------------------------------
# enumeration

@dataclass
class DegenRecord:
    id: int
    partition_triple: VertexPartitionTriple
    quotient: TripleSystem
    witness: tuple
    canon: str = ""
    canon_roles: str = ""
    stability_margin: int | None = None

    @property
    def v(self) -> int:
        return self.quotient.v

    @property
    def e(self) -> int:
        return self.quotient.e

    def to_json(self) -> dict:
        return {"id": self.id, "partition_triple": self.partition_triple.to_json(),
                "v": self.v, "e": self.e, "canon": self.canon,
                "stability_margin": self.stability_margin}


def _candidate_merges(H: TripleSystem, pt: VertexPartitionTriple):
    """One representative pair per two distinct cells in the same class."""
    for r, p in enumerate(pt.parts):
        cells = p.cells
        for a, b in itertools.combinations(range(len(cells)), 2):
            yield ((r, cells[a][0]), (r, cells[b][0]))


def enumerate_degenerations(H: TripleSystem | None = None, reverse: bool = False,
                            canonicalize: bool = True) -> list[DegenRecord]:
    """Breadth-first search over closed partition triples reachable by single merges.

    ``reverse`` flips the neighbour order (used to check order independence).
    Records carry one witness merge sequence from the discrete triple.
    """
    H = build_H1() if H is None else H
    start = closure_of_merges([], H)
    seen = {start.key: (start, ())}
    queue = deque([start.key])
    order = [start.key]
    while queue:
        key = queue.popleft()
        pt, path = seen[key]
        cands = list(_candidate_merges(H, pt))
        if reverse:
            cands.reverse()
        for merge in cands:
            nxt = closure_of_merges([merge], H, base=pt)
            if nxt.key not in seen:
                seen[nxt.key] = (nxt, path + (merge,))
                queue.append(nxt.key)
                order.append(nxt.key)
    records = []
    for i, key in enumerate(sorted(order)):
        pt, path = seen[key]
        Q = quotient_system(pt, H)
        rec = DegenRecord(i, pt, Q, path)
        if canonicalize:
            rec.canon = canonical_form(Q, False)
            rec.canon_roles = canonical_form(Q, True)
        records.append(rec)
    # discrete triple first
    records.sort(key=lambda r: (not r.partition_triple.is_discrete(), r.partition_triple.key))
    for i, rec in enumerate(records):
        rec.id = i
    return records


@dataclass
class DegenReport:
    k: int
    class_count_fixed: int
    class_count_roles: int
    convention: str
    histogram: dict
    classes: list = field(default_factory=list)
    top_classes: list = field(default_factory=list)
    d_H1: int = 0
    max_quantity_other: int | None = None
    quantity_H1: int | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "class_count": self.class_count_fixed if self.convention == "roles-fixed"
            else self.class_count_roles,
            "class_count_roles_fixed": self.class_count_fixed,
            "class_count_roles_permutable": self.class_count_roles,
            "convention": self.convention,
            "histogram": [{"v": v, "e": e, "count": c} for (v, e), c in sorted(self.histogram.items())],
            "margins": [{"canon": c["canon"], "v": c["v"], "e": c["e"], "margin": c["margin"],
                         "quantity": c["quantity"]} for c in self.classes],
            "top_classes": self.top_classes,
            "d_H1": self.d_H1,
            "quantity_H1": self.quantity_H1,
            "max_quantity_other": self.max_quantity_other,
        }

    def certificate(self) -> dict:
        return {"classes": [{"canon": c["canon"], "witness": c["witness"]} for c in self.classes]}


def degeneration_report(records: list[DegenRecord] | None = None, target_classes: int = 154,
                        margins: bool = True) -> DegenReport:
    """Classify records, compute one stability margin per class, and summarize."""
    if records is None:
        records = enumerate_degenerations()
    fixed = {r.canon for r in records}
    roles = {r.canon_roles for r in records}
    if len(fixed) == target_classes:
        convention, attr = "roles-fixed", "canon"
    elif len(roles) == target_classes:
        convention, attr = "roles-permutable", "canon_roles"
    else:
        convention, attr = "roles-fixed", "canon"
    reps: dict[str, DegenRecord] = {}
    for r in records:
        reps.setdefault(getattr(r, attr), r)
    classes = []
    for canon, rep in sorted(reps.items(), key=lambda kv: (-kv[1].v + kv[1].e, kv[0])):
        margin = stability_margin(rep.quotient) if margins else None
        classes.append({
            "canon": canon, "v": rep.v, "e": rep.e, "margin": margin,
            "quantity": None if margin is None else rep.v - rep.e + margin,
            "witness": [[f"{ROLE_NAMES[a[0]]}{a[1]}", f"{ROLE_NAMES[b[0]]}{b[1]}"]
                        for a, b in rep.witness],
            "discrete": rep.partition_triple.is_discrete(),
        })
    for r in records:
        r.stability_margin = next(c["margin"] for c in classes if c["canon"] == getattr(r, attr))
    hist = Counter((c["v"], c["e"]) for c in classes)
    top = [{"canon": c["canon"], "v": c["v"], "e": c["e"]} for c in classes if c["v"] - c["e"] == 5]
    report = DegenReport(len(records), len(fixed), len(roles), convention, dict(hist), classes, top,
                         d_value(build_H1()))
    if margins:
        report.quantity_H1 = next(c["quantity"] for c in classes if c["discrete"])
        report.max_quantity_other = max(c["quantity"] for c in classes if not c["discrete"])
    return report
