"""One test per acceptance criterion; conftest prints a PASS/FAIL line for each."""

import math
import random
import subprocess
import sys
import time

from gmpy2 import mpq

from hardcore_cert.certify import builtin_certificates, derive_dual_from_tight, scaled_slack, verify_case
from hardcore_cert.exactmath import SQRT15, Poly, RatFunc, Scalar
from hardcore_cert.graphs import (
    independence_counts,
    independence_number,
    independence_polynomial,
    moore_order,
    named,
    occupancy_exact,
    occupancy_ratfunc,
)
from hardcore_cert.localview import (
    alpha,
    configuration_distribution,
    enumerate_configurations,
    g6_configuration,
    gamma,
    partition_functions,
    raw_functions,
)
from hardcore_cert.lp import build_lp, constraint_rank, solve_exact
from oracles import F_MAX, HEAWOOD_NUMERATORS, LAM, ONE, P_HEAWOOD, g6_closed_forms

HEAWOOD_SUPPORT = [(0, 0, 0), (0, 0, 1), (1, 1, 1), (2, 2, 2)]

PETERSEN_TIGHT = {
    "petersen-i1": {"C^1_28(1,1,1,1,1,0)", "C^1_29(1,1,1,1,1,1)", "C^1_30(1,1,1,1,1,1)"},
    "petersen-i2": {"C^1_28(1,1,1,1,1,0)", "C^1_29(1,1,1,1,1,1)", "C^1_3(1,1,1,0,1,0)", "C^2_7(1,0,1,1,1)"},
    "petersen-i3": {"C^1_0(1,0,1,0,1,0)", "C^1_29(1,1,1,1,1,1)", "C^1_3(1,1,1,0,1,0)", "C^2_0(1,0,1,1,0)",
                    "C^2_7(1,0,1,1,1)", "C^4_0(1,0,1,1)"},
    "petersen-i4": {"C^1_0(1,0,1,0,1,0)", "C^1_16(1,1,1,1,1,1)", "C^1_24(1,1,1,1,1,1)", "C^1_29(1,1,1,1,1,1)",
                    "C^1_9(1,1,1,1,1,1)", "C^2_0(0,1,0,0,0)", "C^2_0(1,0,1,1,0)", "C^3_0(0,1,0,0)",
                    "C^4_0(1,0,1,1)", "C^5_0(1,0,0)", "C^6_0(0,0,1)"},
}


def nonnegative(verdict: str) -> bool:
    return verdict in ("Zero", "NonnegCoeffs") or verdict.startswith("PolyaPositive")


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - t0


def test_criterion_01_independence_polynomials():
    t0 = time.perf_counter()
    assert independence_counts(named("petersen").graph) == [1, 10, 30, 30, 5]
    assert independence_counts(named("heawood").graph) == [1, 14, 70, 154, 147, 56, 14, 2]
    assert independence_polynomial(named("petersen").graph)(1) == Scalar(76)
    assert independence_polynomial(named("heawood").graph)(1) == Scalar(458)
    assert time.perf_counter() - t0 < 1


def test_criterion_02_configuration_counts():
    # a fresh interpreter so that cached enumerations do not flatter the timing
    script = (
        "import time\n"
        "from hardcore_cert.localview import enumerate_configurations\n"
        "t0 = time.perf_counter()\n"
        "counts = [len(enumerate_configurations(g)) for g in (6, 5, 4)]\n"
        "print(*counts, time.perf_counter() - t0)\n"
    )
    out = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, check=True).stdout.split()
    assert list(map(int, out[:3])) == [10, 46, 207]
    assert float(out[3]) < 10


def test_criterion_03_closed_forms():
    for counts in F_MAX:
        conf = g6_configuration(counts)
        z_plus, z_minus, a, gv, gu = g6_closed_forms(counts)
        zp, zm, _ = partition_functions(conf)
        assert RatFunc(zp) == z_plus and RatFunc(zm) == z_minus
        assert alpha(conf) == a
        for t in range(3):
            assert gamma(conf, "v", t) == gv[t]
            assert gamma(conf, "u", t) == gu[t]


def test_criterion_04_lp_optimum_is_extremal_occupancy():
    rnd = random.Random(20240604)
    heawood, petersen = named("heawood").graph, named("petersen").graph
    for _ in range(20):
        lam = mpq(rnd.randint(1, 400), 100)
        sol, dt = timed(solve_exact, build_lp(6, lam, "max"))
        assert sol.value == occupancy_exact(heawood, lam)
        assert dt < 2
    for _ in range(20):
        lam = mpq(rnd.randint(1, 1000), 1000)
        sol, dt = timed(solve_exact, build_lp(4, lam, "min"))
        assert sol.value == occupancy_exact(petersen, lam)
        assert dt < 30


def test_criterion_05_heawood_g6_certificate():
    rep, dt = timed(verify_case, "heawood-g6")
    assert rep.passed
    cert = builtin_certificates()["heawood-g6"]
    zero = 0
    for counts, expected in F_MAX.items():
        got = scaled_slack(g6_configuration(counts), cert)
        assert got == expected
        if got.is_zero():
            zero += 1
        else:
            signs = [c.sign() for c in got.coeffs]
            low = next(i for i, x in enumerate(signs) if x)
            assert all(x > 0 for x in signs[low:])  # positive after the power of lambda
    assert zero == 4
    assert dt < 5


def test_criterion_06_heawood_g5_certificate():
    rep, dt = timed(verify_case, "heawood-g5")
    assert rep.passed and len(rep.verdicts) == 46
    assert all(nonnegative(v) for _, _, v in rep.verdicts)
    by_label = {c.name: c for c in enumerate_configurations(5)}
    tight = [by_label[t] for t in rep.tight]
    embedded = sorted(tuple(sorted(c.uncovered_counts)) for c in tight if not c.e22)
    assert embedded == sorted(HEAWOOD_SUPPORT)
    # the remaining member: one E22 edge whose endpoints are the only uncovered
    # second neighbours, hanging off two different first neighbours
    (extra,) = [c for c in tight if c.e22]
    assert sorted(extra.uncovered_counts) == [0, 1, 1]
    assert len(extra.attach) == 2 and extra.e22 == ((0, 1),)
    assert dt < 30


def test_criterion_07_petersen_certificates():
    t0 = time.perf_counter()
    for name, expected in PETERSEN_TIGHT.items():
        rep = verify_case(name)
        assert rep.passed
        assert len(rep.verdicts) == 207
        assert all(nonnegative(v) for _, _, v in rep.verdicts)
        assert set(rep.tight) == expected
        irrational = name in ("petersen-i3", "petersen-i4")
        assert rep.field_tag == ("Q(sqrt15)" if irrational else "Q")
    assert [len(PETERSEN_TIGHT[n]) for n in sorted(PETERSEN_TIGHT)] == [3, 4, 6, 11]
    assert (SQRT15 * Scalar(mpq(1, 5))) ** 2 == Scalar(mpq(3, 5))
    assert time.perf_counter() - t0 < 600


def test_criterion_08_dual_rederivation():
    target = occupancy_ratfunc(named("heawood").graph)
    confs = [g6_configuration(c) for c in [(0, 0, 0), (1, 0, 0), (1, 1, 1)]]
    lambdas = derive_dual_from_tight(confs, target)
    common = (LAM + 2 * ONE) * P_HEAWOOD
    expected = (
        RatFunc(HEAWOOD_NUMERATORS[0], (ONE + LAM) * common),
        RatFunc(HEAWOOD_NUMERATORS[1], common),
        RatFunc(HEAWOOD_NUMERATORS[2], common),
    )
    assert tuple(lambdas) == expected


def test_criterion_09_graph_oracle_consistency():
    supports = {}
    for name in ("petersen", "heawood", "gp72"):
        g = named(name).graph
        for lam in (mpq(1, 4), mpq(1), mpq(3, 2)):
            dist = configuration_distribution(g, lam)
            assert sum(dist.values()) == 1
            vals = {c: raw_functions(c).evaluate(lam) for c in dist}
            for t in range(4):
                assert sum(p * vals[c].delta[t] for c, p in dist.items()) == 0
            assert sum(p * vals[c].alpha for c, p in dist.items()) == occupancy_exact(g, lam)
            supports.setdefault(name, set()).update(c.canon_key for c in dist)
    heawood = configuration_distribution(named("heawood").graph, 1)
    assert sorted(tuple(sorted(c.uncovered_counts)) for c in heawood) == sorted(HEAWOOD_SUPPORT)
    assert len(supports["petersen"]) == 1
    assert len(configuration_distribution(named("petersen").graph, 1, girth_class=4)) == 1


def test_criterion_10_uniqueness_rank():
    assert constraint_rank([g6_configuration(c) for c in HEAWOOD_SUPPORT], 1) == 4


def test_criterion_11_side_numerics():
    assert [moore_order(3, 5), moore_order(3, 6), moore_order(3, 8)] == [10, 14, 30]
    assert [named(n).graph.n for n in ("petersen", "heawood", "tutte_coxeter_h38")] == [10, 14, 30]

    assert independence_number(named("gp72").graph) == 5
    assert independence_number(named("cyclotomic13").graph) == 4
    assert mpq(5, named("gp72").graph.n) == mpq(5, 14)
    assert mpq(4, named("cyclotomic13").graph.n) == mpq(4, 13)

    p52, p72 = named("petersen").graph, named("gp72").graph
    diff = lambda lam: occupancy_exact(p52, lam) - occupancy_exact(p72, lam)  # noqa: E731
    assert diff(mpq(9, 5)) < 0 < diff(mpq(19, 10))
    quartic = Poly.from_ints([-7, -36, -50, 0, 21])
    lo, hi = mpq(184592, 100000), mpq(184594, 100000)
    assert quartic(lo).sign() * quartic(hi).sign() < 0
    assert diff(lo) * diff(hi) < 0

    assert f"{math.log(int(independence_polynomial(p52)(1).a)) / 10:.5f}" == "0.43307"
