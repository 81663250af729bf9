"""Verification suites: bundles of exact checks with lhs/rhs records.

Each suite returns a list of checks ``{"name", "lhs", "rhs", "passed"}``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from . import degenerations as dg
from . import fourier as fo
from . import partitions as pt
from . import ranks as ck
from . import spectral as spc
from .groups import BUILTIN_GROUPS, group_square
from .sampling import jm_sample
from .square import cyclic_square
from .transversals import count_transversals, count_transversals_bruteforce

SUITES = ("transversals", "fourier", "crank", "spectral", "degenerations")


def check(name: str, lhs, rhs, passed: bool) -> dict:
    return {"name": name, "lhs": lhs, "rhs": rhs, "passed": bool(passed)}


def _subsets(n, max_size=None):
    top = n if max_size is None else min(n, max_size)
    for k in range(top + 1):
        yield from itertools.combinations(range(n), k)


def suite_transversals(seed: int = 0) -> list[dict]:
    out = []
    known = {1: 1, 2: 0, 3: 3, 4: 0, 5: 15, 6: 0, 7: 133}
    for n, value in known.items():
        L = cyclic_square(n)
        fast, oracle = count_transversals(L), count_transversals_bruteforce(L)
        out.append(check(f"Z{n} transversals vs permutation oracle", fast, oracle, fast == oracle))
        out.append(check(f"Z{n} transversals known value", fast, value, fast == value))
    for i in range(5):
        L = jm_sample(6, seed=seed + i)
        fast, oracle = count_transversals(L), count_transversals_bruteforce(L)
        out.append(check(f"JM order 6 sample {seed + i} vs oracle", fast, oracle, fast == oracle))
    return out


def _fourier_squares(seed):
    return [("Z3", cyclic_square(3)), ("Z4", cyclic_square(4)),
            ("Z2xZ2", group_square("Z2xZ2")[0]), (f"JM4 seed {seed}", jm_sample(4, seed=seed))]


def suite_fourier(seed: int = 0) -> list[dict]:
    out = []
    for name, L in _fourier_squares(seed):
        r = fo.decomposition_check(L)
        out.append(check(f"{name}: sum_A Lambda(P_A 1_S,...) = Lambda(1_S,...) = T n!/n^2n",
                         r["sum"], r["from_count"], r["equal"]))
    for name, L in _fourier_squares(seed)[:2]:
        r = fo.diagonality_check(L, 3)
        out.append(check(f"{name}: Lambda(P_A 1_S, P_B 1_S, P_C 1_S) = 0 unless A = B = C",
                         len(r["failures"]), 0, r["holds"]))
    for n in range(1, 6):
        for A in _subsets(n):
            r = fo.sparseval(n, A)
            out.append(check(f"sparseval n={n} A={list(A)}", r["lhs"], r["rhs"], r["equal"]))
    for n in range(1, 6):
        for A in _subsets(n, 4):
            f = fo.pa1s(n, A)
            if len(A) == 1:
                # 1_S has uniform one-coordinate marginals, so P_{a} 1_S vanishes
                zero = all(v == 0 for v in f.values.ravel())
                out.append(check(f"P_A 1_S = 0 for n={n} A={list(A)}", "zero" if zero else "nonzero",
                                 "zero", zero))
                continue
            r = fo.sign_check(n, A, f)
            out.append(check(f"sign law n={n} A={list(A)}", len(r["violations"]) + len(r["zeros"]), 0,
                             r["holds"]))
            mob = fo.mobius_expansion(n, n, A)
            inj = fo.indicator_injective(n, n, A)
            out.append(check(f"Moebius inversion n={n} A={list(A)}", "table", "table", mob.equals(inj)))
            formula = fo.pa1s_table(n, A)
            out.append(check(f"kernel formula for P_A 1_S n={n} A={list(A)}", "table", "table",
                             formula.equals(f)))
    scan = fo.u_positivity_scan(40)
    out.append(check("U((z-1)^m) >= 0 for m <= n <= 40", len(scan["negatives"]), 0, scan["all_nonnegative"]))
    for m in range(1, 7):
        x = [Fraction(k, k + 1) for k in range(1, m + 1)]
        r = pt.exp_formula_check(m, x)
        out.append(check(f"exponential formula m={m}", r["lhs"], r["rhs"], r["equal"]))
    for variant in (1, 2, 3):
        for delta in (Fraction(1, 10), Fraction(1, 2), Fraction(1)):
            for r in range(1, 11):
                res = pt.breaking_check(r, delta, variant)
                out.append(check(f"partition breaking variant {variant} r={r} delta={delta}",
                                 res["lhs"], res["rhs"], res["holds"]))
    out.extend(majorant_checks(6, 4))
    return out


def grid_minimal_majorant(n: int, max_size: int, grid=(1, 2, 4, 8)) -> dict:
    """Least grid C that passes the majorant for every A with |A| <= max_size."""
    tables = {A: fo.pa1s_table(n, A) for A in _subsets(n, max_size)}
    for C in sorted(Fraction(c) for c in grid):
        results = {}
        ok = True
        for A, f in tables.items():
            try:
                results[A] = fo.majorant_check(n, A, C, f)
            except fo.DeltaOutOfRange:
                ok = False
                break
            if not results[A]["holds"]:
                ok = False
                break
        if ok:
            return {"C": C, "results": results}
    return {"C": None, "results": {}}


def majorant_checks(n: int, max_size: int) -> list[dict]:
    best = grid_minimal_majorant(n, max_size)
    if best["C"] is None:
        return [check(f"majorant n={n} |A|<={max_size}", None, "some grid C", False)]
    worst = max(float(r["max_ratio"]) for r in best["results"].values())
    return [check(f"majorant n={n} |A|<={max_size} at grid-minimal C={best['C']}",
                  worst, 1.0, worst <= 1.0)]


def _lambda_squares(seed):
    squares = [("Z3", cyclic_square(3)), ("Z4", cyclic_square(4)), ("Z5", cyclic_square(5))]
    squares += [(f"JM5 seed {seed + i}", jm_sample(5, seed=seed + i)) for i in range(5)]
    return squares


def suite_crank(seed: int = 0) -> list[dict]:
    out = []
    for m in range(1, 6):
        bad = total = 0
        for psi in ck.enumerate_triples(m, max_cell=2):
            total += 1
            if ck.crank(psi) != ck.crank_pi2_formula(psi):
                bad += 1
        out.append(check(f"crank = Pi^(2) formula, m={m} ({total} triples)", bad, 0, bad == 0))
    bad = total = 0
    for psi in ck.enumerate_triples(4):
        total += 1
        if not ck.crank(psi) >= ck.trank(psi) >= ck.lrank(psi):
            bad += 1
    out.append(check(f"crank >= trank >= lrank on Pi_4 ({total} triples)", bad, 0, bad == 0))
    for name, L in _lambda_squares(seed):
        bad = total = gbad = 0
        for m in range(1, 5):
            for psi in ck.enumerate_triples(m):
                total += 1
                lam = ck.lambda_indicator(L, psi)
                if not 0 <= lam <= Fraction(1, L.n ** ck.crank(psi)):
                    bad += 1
                if psi.is_system and not 0 <= ck.gamma0(L, psi) <= 1:
                    gbad += 1
        out.append(check(f"{name}: 0 <= Lambda(c,c,c) <= n^-crank ({total} triples)", bad, 0, bad == 0))
        out.append(check(f"{name}: gamma0 in [0, 1] for partition systems", gbad, 0, gbad == 0))
    for n in range(2, 6):
        L = cyclic_square(n)
        for k in (1, 2):
            for pi in pt.enumerate_partitions(2 * k, max_cell=2, full_support=True):
                psi = ck.PartitionTriple((pi, pi, pi))
                g = ck.gamma(L, psi)
                want = (1 - Fraction(1, n)) ** k
                out.append(check(f"gamma(pi,pi,pi) n={n} pi={pi}", g, want, g == want))
    return out


def suite_spectral(seed: int = 0) -> list[dict]:
    out = []
    squares = []
    for name in BUILTIN_GROUPS:
        L, spec = group_square(name)
        r = spc.compare_group_spectrum(L, spec, 1e-8)
        out.append(check(f"{name}: spectrum matches irreducible-dimension prediction", r["worst"], 1e-8,
                         r["match"]))
        squares.append((name, L))
    L, spec = group_square("A5")
    rep = spc.rho(spc.build_operator(L), 1e-9, seed)
    out.append(check("A5: rho = 1/3", rep.rho, 1 / 3, abs(rep.rho - 1 / 3) <= 1e-6))
    squares += [(f"JM6 seed {seed + i}", jm_sample(6, seed=seed + i)) for i in range(20)]
    for name, L in squares:
        op = spc.build_operator(L)
        tr = spc.trace_power(op, 6)
        walks = spc.trace6_by_configurations(L)
        out.append(check(f"{name}: closed 6-walk count = n^6 tr A^6", walks, tr * L.n ** 6,
                         walks == tr * L.n ** 6))
        r = spc.rho(op).rho
        out.append(check(f"{name}: 1 + rho^6 <= tr A^6", 1 + r ** 6, float(tr),
                         1 + r ** 6 <= float(tr) + 1e-6))
        if name.startswith("Z") and "x" not in name:
            out.append(check(f"{name}: tr A^6 = n", tr, L.n, tr == L.n))
    for name, L in [("Z4", cyclic_square(4)), ("JM5", jm_sample(5, seed=seed)), ("S3", group_square("S3")[0])]:
        for A in _subsets(min(L.n, 4), 3):
            r = spc.quasi_use_check(L, A)
            out.append(check(f"{name}: |Lambda(f,f,f)| <= rho^(m/2) ||f||^3 for A={list(A)}",
                             r["lhs"], r["rhs"], r["holds"]))
    return out


def suite_degenerations(seed: int = 0) -> list[dict]:
    rep = dg.degeneration_report()
    top = sorted((c["v"], c["e"]) for c in rep.classes if c["v"] - c["e"] == 5)
    others = [c for c in rep.classes if not c["discrete"]]
    return [
        check("k = number of closed partition triples", rep.k, 1206, rep.k == 1206),
        check(f"isomorphism classes ({rep.convention})",
              rep.class_count_fixed if rep.convention == "roles-fixed" else rep.class_count_roles,
              154, 154 in (rep.class_count_fixed, rep.class_count_roles)),
        check("d(H1)", rep.d_H1, 4, rep.d_H1 == 4),
        check("v - e + margin for H1", rep.quantity_H1, 5, rep.quantity_H1 == 5),
        check("max of v - e + margin over other classes", rep.max_quantity_other, 4,
              rep.max_quantity_other <= 4),
        check("v - e <= 5 for every proper degeneration", max(c["v"] - c["e"] for c in others), 5,
              max(c["v"] - c["e"] for c in others) <= 5),
        check("(v, e) of classes with v - e = 5", top,
              sorted([(11, 6), (11, 6), (15, 10), (16, 11)] + [(17, 12)] * 4),
              top == sorted([(11, 6), (11, 6), (15, 10), (16, 11)] + [(17, 12)] * 4)),
    ]


SUITE_FUNCS = {
    "transversals": suite_transversals,
    "fourier": suite_fourier,
    "crank": suite_crank,
    "spectral": suite_spectral,
    "degenerations": suite_degenerations,
}


def run_suite(name: str, seed: int = 0) -> list[dict]:
    if name == "all":
        out = []
        for s in SUITES:
            out.extend({**c, "suite": s} for c in SUITE_FUNCS[s](seed))
        return out
    if name not in SUITE_FUNCS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return [{**c, "suite": name} for c in SUITE_FUNCS[name](seed)]


def transversal_probe(n: int, samples: int, seed: int, steps: int | None = None) -> dict:
    """Transversal counts of JM samples against e^{-1/2} n!^2 / n^n, with tr A^6 and rho."""
    import numpy as np

    from .square import transversal_asymptotic

    if n > 12:
        raise ValueError("probe supports n <= 12")
    target, _ = transversal_asymptotic(n)
    seeds = np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint32)
    rows = []
    for i, s in enumerate(seeds):
        L = jm_sample(n, steps=steps, seed=int(s))
        count = count_transversals(L)
        op = spc.build_operator(L)
        rows.append({"sample": i, "seed": int(s), "transversals": count,
                     "ratio": count / target if target else math.nan,
                     "trace4": spc.trace_power(op, 4), "trace6": spc.trace_power(op, 6),
                     "rho": spc.rho(op).rho})
    counts = np.array([r["transversals"] for r in rows], dtype=float)
    ratios = counts / target if target else counts * math.nan
    summary = {"mean_count": float(counts.mean()), "target": target,
               "mean_ratio": float(ratios.mean()),
               "quantiles": {str(q): float(np.quantile(ratios, q)) for q in (0.1, 0.5, 0.9)}}
    return {"n": n, "samples": samples, "seed": seed, "summary": summary, "rows": rows}
