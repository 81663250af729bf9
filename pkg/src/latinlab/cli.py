"""Command-line entry point: ``latinlab <command> [options]``.

Exit codes: 0 pass, 1 failure (or invalid input), 2 budget exhausted.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import degenerations as dg
from . import fourier as fo
from . import ranks as ck
from . import spectral as spc
from .errors import BudgetExceeded, LatinLabError, NoConvergence
from .groups import group_square, identify
from .report import envelope, render
from .sampling import default_steps, jm_sample
from .square import cyclic_square, read_square, transversal_asymptotic
from .suites import SUITES, run_suite, transversal_probe
from .transversals import count_transversals

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--budget", type=int, default=None, help="node or table budget")


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--square", metavar="FILE", help="latin square file (text or JSON)")
    g.add_argument("--group", help="Cayley table of a catalogue group, e.g. S3, Q8, A5")
    g.add_argument("--jm", action="store_true", help="Jacobson-Matthews sample of order --n")
    p.add_argument("--n", type=int, default=None, help="order (cyclic square unless --jm)")
    p.add_argument("--steps", type=int, default=None, help="chain steps for --jm")


def _source(args) -> tuple:
    """The square selected by the source flags, plus a description."""
    if args.square:
        return read_square(args.square), {"source": "file", "path": args.square}
    if args.group:
        L, spec = group_square(args.group)
        return L, {"source": "group", "group": spec.name}
    if args.n is None:
        raise SystemExit("one of --square, --group or --n is required")
    if args.jm:
        steps = args.steps if args.steps is not None else default_steps(args.n)
        return jm_sample(args.n, steps, args.seed), {"source": "jm", "n": args.n, "seed": args.seed,
                                                   "steps": steps}
    return cyclic_square(args.n), {"source": "cyclic", "n": args.n}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latinlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a cyclic, group or file square")
    _add_source(p)
    _add_common(p)

    p = sub.add_parser("sample", help="Jacobson-Matthews sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, default=None)
    _add_common(p)

    for name, text in (("transversals", "exact transversal count"),
                       ("rho", "spectral radius of A - U"),
                       ("trace6", "tr A^6 exactly and by closed-walk count")):
        p = sub.add_parser(name, help=text)
        _add_source(p)
        _add_common(p)

    p = sub.add_parser("spectrum", help="dense spectrum against the group prediction")
    p.add_argument("--group", required=True)
    _add_common(p)

    p = sub.add_parser("fourier-check", help="exact Fourier identities at one order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-size", type=int, default=None, help="largest |A| (default n)")
    _add_common(p)

    p = sub.add_parser("crank-check", help="rank functionals over all triples on a ground set")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-cell", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("degenerations", help="closed quotients of H1, classes and margins")
    p.add_argument("--certificate", metavar="FILE", help="write witness merge sequences here")
    p.add_argument("--no-margins", action="store_true")
    _add_common(p)

    p = sub.add_parser("sigma-m", help="partial sums of the e^(-1/2) series")
    p.add_argument("m", type=int)
    _add_common(p)

    p = sub.add_parser("probe", help="transversal counts of random squares")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--steps", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    _add_common(p)
    return parser


def _trace_budget(args) -> int:
    return spc.DEFAULT_TRACE_BUDGET if args.budget is None else args.budget


# ----------------------------------------------------------------------------------------------
# commands: each returns (kind, payload, exit code)

def cmd_gen(args):
    L, src = _source(args)
    spec = identify(L)
    payload = {**src, "n": L.n, "grid": L.grid(), "group": spec.name if spec else None,
               "text": L.to_text()}
    return "square", payload, EXIT_PASS


def cmd_sample(args):
    steps = args.steps if args.steps is not None else default_steps(args.n)
    L = jm_sample(args.n, steps, args.seed)
    return "square", {"source": "jm", "n": L.n, "seed": args.seed, "steps": steps,
                      "grid": L.grid(), "text": L.to_text()}, EXIT_PASS


def cmd_transversals(args):
    L, src = _source(args)
    count = count_transversals(L)
    approx, exact = transversal_asymptotic(L.n)
    return "transversals", {**src, "n": L.n, "transversals": count, "asymptotic": approx,
                             "ratio": count / approx, "factorial_ratio": exact}, EXIT_PASS


def cmd_rho(args):
    L, src = _source(args)
    op = spc.build_operator(L)
    rep = spc.rho(op, args.tol, args.seed)
    rep.trace6 = spc.trace_power(op, 6, _trace_budget(args))
    return "spectral", {**src, **rep.to_json()}, EXIT_PASS


def cmd_trace6(args):
    L, src = _source(args)
    op = spc.build_operator(L)
    tr = spc.trace_power(op, 6, _trace_budget(args))
    walks = spc.trace6_by_configurations(L)
    ok = walks == tr * L.n ** 6
    return "trace6", {**src, "n": L.n, "trace6": tr, "closed_walks": walks,
                      "equal": ok}, EXIT_PASS if ok else EXIT_FAIL


def cmd_spectrum(args):
    L, spec = group_square(args.group)
    pred = spc.predict_group_spectrum(spec)
    r = spc.compare_group_spectrum(L, spec, max(args.tol, 1e-8))
    rows = [{"eigenvalue": v, "multiplicity": k} for v, k in sorted(pred.items(), reverse=True)]
    return "spectrum", {"group": spec.name, "n": L.n, "irrep_dims": list(spec.irrep_dims),
                        "match": r["match"], "worst": r["worst"], "rows": rows}, \
        EXIT_PASS if r["match"] else EXIT_FAIL


def cmd_fourier_check(args):
    n = args.n
    top = n if args.max_size is None else min(n, args.max_size)
    rows = []
    for k in range(top + 1):
        for A in itertools.combinations(range(n), k):
            f = fo.pa1s(n, A)
            sv = fo.sparseval(n, A)
            sign = fo.sign_check(n, A, f)
            rows.append({"A": " ".join(map(str, A)), "size": k, "norm2": sv["lhs"], "sparseval": sv["rhs"],
                         "sparseval_ok": sv["equal"], "sign_ok": sign["holds"],
                         "zeros": len(sign["zeros"]),
                         "formula_ok": fo.pa1s_table(n, A).equals(f)})
    # for |A| = 1 the projection vanishes identically; that is the only sign exception
    ok = all(r["sparseval_ok"] and r["formula_ok"]
             and (r["sign_ok"] or (r["size"] == 1 and r["zeros"] == n)) for r in rows)
    return "fourier-check", {"n": n, "passed": ok, "rows": rows}, EXIT_PASS if ok else EXIT_FAIL


def cmd_crank_check(args):
    rows = []
    ok = True
    for psi in ck.enumerate_triples(args.m, args.max_cell):
        c, t, lr = ck.crank(psi), ck.trank(psi), ck.lrank(psi)
        good = c >= t >= lr
        ok &= good
        rows.append({"triple": json.dumps(psi.to_json()), "crank": c, "trank": t, "lrank": lr,
                     "cx": ck.cx(psi) if psi.is_system else None, "order_ok": good})
    return "crank-check", {"m": args.m, "count": len(rows), "passed": ok, "rows": rows}, \
        EXIT_PASS if ok else EXIT_FAIL


def cmd_degenerations(args):
    records = dg.enumerate_degenerations()
    rep = dg.degeneration_report(records, margins=not args.no_margins)
    if args.certificate:
        Path(args.certificate).write_text(json.dumps(
            envelope("certificate", rep.certificate()), indent=2) + "\n")
    data = rep.to_json()
    ok = data["k"] == 1206 and 154 in (rep.class_count_fixed, rep.class_count_roles)
    if not args.no_margins:
        ok = ok and rep.quantity_H1 == 5 and rep.max_quantity_other <= 4
    data["rows"] = data["margins"]
    return "degenerations", data, EXIT_PASS if ok else EXIT_FAIL


def cmd_sigma_m(args):
    r = fo.sigma_m(args.m)
    return "sigma-m", {"m": args.m, "value": r["value"], "float": float(r["value"]),
                       "error_bound": r["error_bound"]}, EXIT_PASS


def cmd_probe(args):
    data = transversal_probe(args.n, args.samples, args.seed, args.steps)
    return "probe", data, EXIT_PASS


def cmd_verify(args):
    checks = run_suite(args.suite, args.seed)
    ok = all(c["passed"] for c in checks)
    return "verify", {"suite": args.suite, "seed": args.seed, "passed": ok,
                      "failures": sum(not c["passed"] for c in checks), "rows": checks}, \
        EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {
    "gen": cmd_gen, "sample": cmd_sample, "transversals": cmd_transversals, "rho": cmd_rho,
    "spectrum": cmd_spectrum, "trace6": cmd_trace6, "fourier-check": cmd_fourier_check,
    "crank-check": cmd_crank_check, "degenerations": cmd_degenerations, "sigma-m": cmd_sigma_m,
    "probe": cmd_probe, "verify": cmd_verify,
}


def _emit(args, kind: str, payload: dict) -> None:
    data = envelope(kind, payload)
    if args.format == "text" and kind == "square":
        text = payload["text"]
    else:
        if args.format != "text":
            data.pop("text", None)
        text = render(data, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        kind, payload, code = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (LatinLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if "seed" in vars(args) and "seed" not in payload:
        payload = {**payload, "seed": args.seed}
    _emit(args, kind, payload)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
