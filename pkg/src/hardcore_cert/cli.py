"""Command-line front end.

Exit codes: 0 when everything checked passes, 1 on a verification failure,
2 on usage, parse or guard errors.  ``--json FILE`` writes a deterministic
machine-readable copy of the result.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from gmpy2 import mpq

from . import certify as cz
from .exactmath import Poly, parse_rational, poly_serialize
from .graphs import (
    GraphFormatError,
    GraphValidationError,
    independence_number,
    independence_polynomial,
    moore_order,
    named,
    occupancy_exact,
    occupancy_ratfunc,
    resolve_graph,
)
from .localview import (
    ConfigurationError,
    configuration_distribution,
    enumerate_configurations,
    raw_functions,
)
from .lp import ROW_NAMES, build_lp, solve_exact

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

LAMBDA3_QUARTIC = (-7, -36, -50, 0, 21)


class UsageError(Exception):
    pass


def _q(x: mpq) -> str:
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _lambda(text: str) -> mpq:
    try:
        lam = parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad fugacity {text!r}: expected p/q") from exc
    if lam <= 0:
        raise UsageError("fugacity must be positive")
    return lam


def _default_threads() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _emit_json(path: str | None, payload) -> None:
    if path:
        text = json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------- subcommands


def cmd_configs(args) -> int:
    confs = enumerate_configurations(args.girth, args.source)
    rows = []
    for c in confs:
        r = raw_functions(c)
        attach = ";".join("".join(str(u + 1) for u in a) for a in c.attach) or "-"
        e22 = ";".join(f"{i}-{j}" for i, j in c.e22) or "-"
        zs = [poly_serialize(Poly.from_ints(p)) for p in (r.z_plus, r.z_minus, r.z)]
        rows.append({"key": c.canon_key, "label": c.label, "size": c.size, "attach": attach, "e22": e22,
                     "z_plus": zs[0], "z_minus": zs[1], "z": zs[2]})
    print(f"girth class {args.girth} ({args.source}): {len(confs)} configurations, "
          f"{len({c.view_key for c in confs})} distinct views")
    for row in rows:
        print(f"  {row['label'] or '-':<28} {row['key']}")
    if args.dump:
        lines = [
            "\t".join([row["key"], str(row["size"]), row["attach"], row["e22"], row["z_plus"], row["z_minus"], row["z"]])
            for row in rows
        ]
        Path(args.dump).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit_json(args.json, {"girth_class": args.girth, "source": args.source, "count": len(rows), "configurations": rows})
    return EXIT_OK


def cmd_indpoly(args) -> int:
    g = resolve_graph(args.graph)
    p = independence_polynomial(g)
    value_at_one = p(1).a
    print(f"graph {args.graph}: n = {g.n}, m = {len(g.edges())}")
    print(f"P = {p}")
    print(f"P(1) = {int(value_at_one)}")
    print(f"independence number = {independence_number(g)}")
    _emit_json(args.json, {"graph": args.graph, "n": g.n, "coefficients": [int(c) for c in p.int_coeffs()],
                           "value_at_1": int(value_at_one), "independence_number": independence_number(g)})
    return EXIT_OK


def cmd_occupancy(args) -> int:
    g = resolve_graph(args.graph)
    lam = _lambda(args.lam)
    frac = occupancy_exact(g, lam)
    print(f"alpha({_q(lam)}) = {_q(frac)}  (~{float(frac):.10f})")
    rf = occupancy_ratfunc(g)
    print(f"alpha = ({rf.num}) / ({rf.den})")
    _emit_json(args.json, {"graph": args.graph, "lambda": _q(lam), "alpha": _q(frac)})
    return EXIT_OK


def cmd_lp(args) -> int:
    lam = _lambda(args.lam)
    prob = build_lp(args.girth, lam, args.sense, args.source)
    sol = solve_exact(prob)
    if sol.status != "optimal":
        print(f"status = {sol.status}")
        return EXIT_FAIL
    support = [(prob.columns[j], sol.primal[j]) for j in sol.support()]
    print(f"value = {_q(sol.value)}")
    print("support:")
    for c, p in support:
        print(f"  {_q(p):>24}  {c.name}  [{c.canon_key}]")
    print("duals:")
    for name, y in zip(("L_p",) + tuple(f"L_{t}" for t in range(3)), sol.dual):
        print(f"  {name} = {_q(y)}")
    if sol.redundant_rows:
        print("redundant rows: " + ", ".join(ROW_NAMES[i] for i in sol.redundant_rows))
    _emit_json(args.json, {
        "girth_class": args.girth, "lambda": _q(lam), "sense": args.sense, "source": args.source,
        "value": _q(sol.value),
        "support": [{"key": c.canon_key, "label": c.label, "probability": _q(p)} for c, p in support],
        "dual": [_q(y) for y in sol.dual],
    })
    return EXIT_OK


def _certificates(args) -> list[cz.DualCertificate]:
    if args.cert:
        try:
            return [cz.load_certificate(args.cert)]
        except (OSError, cz.CertificateFormatError) as exc:
            raise UsageError(str(exc)) from exc
    builtin = cz.builtin_certificates()
    if args.case:
        if args.case not in builtin:
            raise UsageError(f"unknown case {args.case!r}; known: {', '.join(cz.BUILTIN_NAMES)}")
        return [builtin[args.case]]
    return [builtin[n] for n in cz.BUILTIN_NAMES]


def _run_reports(certs, args) -> list[cz.VerificationReport]:
    reports = []
    for cert in certs:
        rep = cz.verify_certificate(cert, polya_limit=args.polya_limit, threads=args.threads)
        print(rep.text(verbose=getattr(args, "verbose", False), timing=args.timing))
        reports.append(rep)
    return reports


def cmd_certify(args) -> int:
    reports = _run_reports(_certificates(args), args)
    _emit_json(args.json, {"reports": [r.summary() for r in reports]})
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def crosscheck(graph: str, lam: mpq, girth_class: int | None = None) -> dict:
    """Graph-induced configuration law against the LP rows and the exact occupancy."""
    g = resolve_graph(graph)
    dist = configuration_distribution(g, lam, girth_class)
    total = sum(dist.values())
    rows = [mpq(0)] * 3
    mean_alpha = mpq(0)
    for c, p in dist.items():
        vals = raw_functions(c).evaluate(lam)
        mean_alpha += p * vals.alpha
        for t in range(3):
            rows[t] += p * vals.delta[t]
    exact = occupancy_exact(g, lam)
    return {
        "graph": graph,
        "lambda": _q(lam),
        "support": [{"configuration": c.name, "key": c.canon_key, "probability": _q(p)} for c, p in dist.items()],
        "total_probability": _q(total),
        "row_residuals": [_q(r) for r in rows],
        "mean_alpha": _q(mean_alpha),
        "occupancy": _q(exact),
        "passed": total == 1 and not any(rows) and mean_alpha == exact,
    }


def cmd_crosscheck(args) -> int:
    lam = _lambda(args.lam)
    try:
        res = crosscheck(args.graph, lam, args.girth_class)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{res['graph']} at lambda = {res['lambda']}: {'PASS' if res['passed'] else 'FAIL'}")
    for s in res["support"]:
        print(f"  {s['probability']:>28}  {s['configuration']}")
    print(f"  total probability {res['total_probability']}")
    print("  row residuals t=0,1,2: " + ", ".join(res["row_residuals"]))
    print(f"  sum Pr[C] alpha_C = {res['mean_alpha']}, occupancy = {res['occupancy']}")
    _emit_json(args.json, res)
    return EXIT_OK if res["passed"] else EXIT_FAIL


def lp_spot_checks() -> list[dict]:
    """LP optima against the extremal graphs at a few fixed points."""
    heawood, petersen = named("heawood").graph, named("petersen").graph
    out = []
    for girth_class, lam, sense, graph in ((6, mpq(1), "max", heawood), (5, mpq(1), "max", heawood),
                                           (4, mpq(1), "min", petersen), (4, mpq(1, 2), "min", petersen)):
        sol = solve_exact(build_lp(girth_class, lam, sense))
        expected = occupancy_exact(graph, lam)
        out.append({"girth_class": girth_class, "lambda": _q(lam), "sense": sense, "value": _q(sol.value),
                    "expected": _q(expected), "passed": sol.value == expected})
    for cert in cz.builtin_certificates().values():
        for lam in cert.samples:
            agree = cz.lp_agreement(cert, lam)
            ok = agree["certificate_feasible"] and agree["lp_value"] == agree["certificate_value"]
            out.append({"certificate": cert.name, "lambda": agree["lambda"], "value": _q(agree["lp_value"]),
                        "passed": ok})
    return out


def cmd_verify_all(args) -> int:
    reports = _run_reports([cz.builtin_certificates()[n] for n in cz.BUILTIN_NAMES], args)
    checks = lp_spot_checks()
    print("LP spot checks:")
    for c in checks:
        what = c.get("certificate") or f"G{c['girth_class']} {c['sense']}"
        print(f"  {'PASS' if c['passed'] else 'FAIL'}  {what} at {c['lambda']}: {c['value']}")
    ok = all(r.passed for r in reports) and all(c["passed"] for c in checks)
    print("verify-all: " + ("PASS" if ok else "FAIL"))
    _emit_json(args.json, {"passed": ok, "reports": [r.summary() for r in reports], "lp_checks": checks})
    return EXIT_OK if ok else EXIT_FAIL


def _quartic_root(lo: mpq, hi: mpq, steps: int = 60) -> mpq:
    q = Poly.from_ints(list(LAMBDA3_QUARTIC))
    sign_lo = q(lo).sign()
    for _ in range(steps):
        mid = (lo + hi) / 2
        if q(mid).sign() == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo


def evidence() -> dict:
    moore = []
    for d, g, name in ((3, 5, "petersen"), (3, 6, "heawood"), (3, 8, "tutte_coxeter_h38"), (4, 6, "h46")):
        moore.append({"degree": d, "girth": g, "moore_order": moore_order(d, g), "graph": name,
                      "order": named(name).graph.n})
    indep = []
    for name in ("petersen", "heawood", "gp72", "cyclotomic13", "robertson"):
        g = named(name).graph
        a = independence_number(g)
        indep.append({"graph": name, "n": g.n, "independence_number": a, "ratio": f"{a}/{g.n}"})
    p52 = named("petersen").graph
    p72 = named("gp72").graph
    count = int(independence_polynomial(p52)(1).a)
    diff = occupancy_ratfunc(p52) - occupancy_ratfunc(p72)
    lo, hi = mpq(9, 5), mpq(19, 10)
    d_lo = occupancy_exact(p52, lo) - occupancy_exact(p72, lo)
    d_hi = occupancy_exact(p52, hi) - occupancy_exact(p72, hi)
    _, rem = diff.num.divmod(Poly.from_ints(list(LAMBDA3_QUARTIC)))
    lam_test = mpq(15, 8)
    lp_val = solve_exact(build_lp(4, lam_test, "min")).value
    return {
        "moore": moore,
        "independence": indep,
        "log_count_petersen": {"independent_sets": count, "value": f"{math.log(count) / 10:.5f}",
                               "earlier_bound": "0.430703"},
        "crossing": {
            "difference_at_9/5": _q(d_lo),
            "difference_at_19/10": _q(d_hi),
            "sign_change": (d_lo > 0) != (d_hi > 0) and d_lo != 0 and d_hi != 0,
            "root": f"{float(_quartic_root(lo, hi)):.5f}",
            "quartic_divides_difference": rem.is_zero(),
        },
        "lp_beyond_crossing": {
            "lambda": _q(lam_test),
            "lp_min": _q(lp_val),
            "alpha_petersen": _q(occupancy_exact(p52, lam_test)),
            "alpha_gp72": _q(occupancy_exact(p72, lam_test)),
            "lp_at_most_gp72": lp_val <= occupancy_exact(p72, lam_test),
        },
    }


def cmd_evidence(args) -> int:
    ev = evidence()
    print("Moore orders:")
    for m in ev["moore"]:
        print(f"  d={m['degree']} g={m['girth']}: {m['moore_order']}  ({m['graph']} has {m['order']} vertices)")
    print("independence numbers:")
    for i in ev["independence"]:
        print(f"  {i['graph']:<14} {i['independence_number']:>3}  ratio {i['ratio']}")
    lc = ev["log_count_petersen"]
    print(f"(1/10) log {lc['independent_sets']} = {lc['value']}  vs earlier bound {lc['earlier_bound']}")
    cr = ev["crossing"]
    print(f"alpha_P52 - alpha_P72 at 9/5: {float(mpq(cr['difference_at_9/5'])):+.3e}, "
          f"at 19/10: {float(mpq(cr['difference_at_19/10'])):+.3e}, sign change: {cr['sign_change']}")
    print(f"quartic root in (9/5, 19/10): {cr['root']}; quartic divides the difference: {cr['quartic_divides_difference']}")
    lb = ev["lp_beyond_crossing"]
    print(f"min LP over girth-4 configurations at {lb['lambda']}: {lb['lp_min']} "
          f"(alpha_P72 = {lb['alpha_gp72']}, at most: {lb['lp_at_most_gp72']})")
    _emit_json(args.json, ev)
    ok = cr["sign_change"] and lb["lp_at_most_gp72"]
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _add_verify_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--polya-limit", type=int, default=cz.DEFAULT_POLYA_LIMIT, help="largest Polya exponent tried")
    p.add_argument("--threads", type=int, default=_default_threads(), help="worker processes")
    p.add_argument("--timing", action="store_true", help="append wall time to text reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardcore-cert", description="Exact occupancy-fraction certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", metavar="FILE", help="write a machine-readable result")
        p.set_defaults(func=func)
        return p

    p = add("configs", cmd_configs, "list the configurations of a girth class")
    p.add_argument("--girth", type=int, choices=(4, 5, 6), required=True)
    p.add_argument("--source", choices=("catalog", "complete"), default="catalog")
    p.add_argument("--dump", metavar="FILE", help="one tab-separated line per configuration")

    p = add("indpoly", cmd_indpoly, "independence polynomial of a graph")
    p.add_argument("graph", help="bundled name or edge-list file")

    p = add("occupancy", cmd_occupancy, "occupancy fraction at a rational fugacity")
    p.add_argument("graph")
    p.add_argument("--lambda", dest="lam", required=True, metavar="P/Q")

    p = add("lp", cmd_lp, "solve the configuration LP exactly")
    p.add_argument("--girth", type=int, choices=(4, 5, 6), required=True)
    p.add_argument("--lambda", dest="lam", required=True, metavar="P/Q")
    p.add_argument("--sense", choices=("min", "max"), required=True)
    p.add_argument("--source", choices=("catalog", "complete"), default="catalog")

    p = add("certify", cmd_certify, "verify dual certificates")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--case", help="a bundled certificate: " + ", ".join(cz.BUILTIN_NAMES))
    group.add_argument("--cert", metavar="FILE", help="a certificate file")
    p.add_argument("--verbose", action="store_true", help="list every verdict")
    _add_verify_flags(p)

    p = add("crosscheck", cmd_crosscheck, "graph-induced configuration law against the LP rows")
    p.add_argument("graph")
    p.add_argument("--lambda", dest="lam", required=True, metavar="P/Q")
    p.add_argument("--girth-class", type=int, choices=(4, 5, 6), default=None)

    p = add("verify-all", cmd_verify_all, "all bundled certificates plus LP spot checks")
    _add_verify_flags(p)

    add("evidence", cmd_evidence, "numeric side facts")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, GraphValidationError, ConfigurationError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
