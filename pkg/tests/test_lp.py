import random

import pytest
from gmpy2 import mpq

from hardcore_cert.graphs import named, occupancy_exact
from hardcore_cert.localview import (
    configuration_distribution,
    enumerate_configurations,
    find_configuration,
    g6_configuration,
    raw_functions,
)
from hardcore_cert.lp import (
    LPProblem,
    build_lp,
    constraint_rank,
    lp_rows,
    reduced_costs,
    solve_exact,
    tight_support,
)

HEAWOOD_SUPPORT = [(0, 0, 0), (1, 0, 0), (1, 1, 1), (2, 2, 2)]


def toy(objective, sense="max"):
    cols = tuple(g6_configuration(c) for c in [(0, 0, 0), (1, 1, 1)][: len(objective)])
    return LPProblem(sense, mpq(1), cols, tuple(map(mpq, objective)), (tuple(mpq(1) for _ in objective),), (mpq(1),))


class TestBuild:
    def test_shapes(self):
        p = build_lp(6, 1, "max")
        assert len(p.columns) == 10 and len(p.eq_rows) == 4
        assert p.columns == tuple(enumerate_configurations(6))
        assert len(build_lp(4, mpq(1, 2), "min").columns) == 207

    def test_omitted_row_is_implied(self):
        cols = enumerate_configurations(4)
        lam = mpq(3, 7)
        for c in cols:
            d = raw_functions(c).evaluate(lam).delta
            assert sum(d) == 0

    def test_argument_checks(self):
        with pytest.raises(ValueError):
            build_lp(6, 1, "maximise")
        with pytest.raises(ValueError):
            build_lp(6, 0, "max")
        with pytest.raises(ValueError):
            build_lp(6, "-1/2", "max")

    def test_string_fugacity(self):
        assert build_lp(6, "1/2", "max").lam == mpq(1, 2)


class TestSolve:
    def test_heawood_at_one(self):
        sol = solve_exact(build_lp(6, 1, "max"))
        assert sol.status == "optimal"
        assert sol.value == mpq(113, 458)
        assert sol.dual[0] == sol.value

    def test_petersen_at_one(self):
        assert solve_exact(build_lp(4, 1, "min")).value == mpq(9, 38)

    def test_girth5_matches_girth6(self):
        for lam in (mpq(1, 3), mpq(2)):
            assert solve_exact(build_lp(5, lam, "max")).value == solve_exact(build_lp(6, lam, "max")).value

    def test_random_points_girth6(self):
        rnd = random.Random(11)
        heawood = named("heawood").graph
        for _ in range(8):
            lam = mpq(rnd.randint(1, 40), rnd.randint(1, 10))
            assert solve_exact(build_lp(6, lam, "max")).value == occupancy_exact(heawood, lam)

    def test_random_points_girth4(self):
        rnd = random.Random(12)
        petersen = named("petersen").graph
        for _ in range(4):
            lam = mpq(rnd.randint(1, 20), 20)
            assert solve_exact(build_lp(4, lam, "min")).value == occupancy_exact(petersen, lam)

    def test_complete_set_gives_the_same_optimum(self):
        lam = mpq(1, 2)
        assert solve_exact(build_lp(4, lam, "min", "complete")).value == occupancy_exact(named("petersen").graph, lam)

    def test_beyond_the_crossing(self):
        lam = mpq(15, 8)
        value = solve_exact(build_lp(4, lam, "min")).value
        assert value <= occupancy_exact(named("gp72").graph, lam) < occupancy_exact(named("petersen").graph, lam)

    def test_toy_single_column(self):
        sol = solve_exact(toy([mpq(2, 7)]))
        assert sol.value == mpq(2, 7) and sol.primal == (1,)

    def test_toy_two_columns(self):
        assert solve_exact(toy([1, 3])).value == 3
        assert solve_exact(toy([1, 3], "min")).value == 1

    def test_infeasible(self):
        p = LPProblem("max", mpq(1), (g6_configuration((0, 0, 0)),), (mpq(1),), ((mpq(1),), (mpq(1),)), (mpq(1), mpq(2)))
        assert solve_exact(p).status == "infeasible"

    def test_unbounded(self):
        cols = (g6_configuration((0, 0, 0)), g6_configuration((1, 1, 1)))
        p = LPProblem("max", mpq(1), cols, (mpq(1), mpq(0)), ((mpq(1), mpq(-1)),), (mpq(0),))
        assert solve_exact(p).status == "unbounded"

    @pytest.mark.parametrize("girth,sense,lam", [(6, "max", mpq(5, 2)), (5, "max", mpq(1, 9)), (4, "min", mpq(7, 9))])
    def test_certified_solution(self, girth, sense, lam):
        p = build_lp(girth, lam, sense)
        sol = solve_exact(p)
        rc = reduced_costs(p, sol.dual)
        assert all(d >= 0 for d in rc)
        assert all(rc[j] == 0 for j in sol.support())
        assert sum(o * x for o, x in zip(p.objective, sol.primal)) == sol.value
        for i, row in enumerate(p.eq_rows):
            assert sum(a * x for a, x in zip(row, sol.primal)) == p.rhs[i]

    @pytest.mark.parametrize("name,girth,sense,class_", [("heawood", 6, "max", None), ("gp72", 5, "max", None), ("gp72", 4, "min", 4)])
    def test_graph_distributions_are_feasible(self, name, girth, sense, class_):
        lam = mpq(2, 3)
        g = named(name).graph
        dist = configuration_distribution(g, lam, class_)
        p = build_lp(girth, lam, sense)
        index = {c.canon_key: j for j, c in enumerate(p.columns)}
        x = [mpq(0)] * len(p.columns)
        for c, prob in dist.items():
            x[index[c.canon_key]] += prob
        for i, row in enumerate(p.eq_rows):
            assert sum(a * xi for a, xi in zip(row, x)) == p.rhs[i]
        value = solve_exact(p).value
        obj = sum(o * xi for o, xi in zip(p.objective, x))
        assert obj == occupancy_exact(g, lam)
        assert (obj <= value) if sense == "max" else (obj >= value)


class TestTightAndRank:
    def test_heawood_tight_support(self):
        p = build_lp(6, 1, "max")
        sol = solve_exact(p)
        tight = {p.columns[j].label for j in tight_support(p, sol)}
        assert {"(0,0,0)", "(0,0,1)", "(1,1,1)", "(2,2,2)"} <= tight

    def test_petersen_tight_support_small_fugacity(self):
        p = build_lp(4, mpq(1, 10), "min")
        sol = solve_exact(p)
        tight = {p.columns[j].label for j in tight_support(p, sol)}
        assert "C^1_29(1,1,1,1,1,1)" in tight
        assert {p.columns[j].label for j in sol.support()} <= tight

    def test_heawood_rank(self):
        cols = [g6_configuration(c) for c in HEAWOOD_SUPPORT]
        assert constraint_rank(cols, 1) == 4

    def test_rank_edge_cases(self):
        c = g6_configuration((0, 1, 2))
        assert constraint_rank([c], 1) == 1
        cols = [g6_configuration(x) for x in HEAWOOD_SUPPORT]
        assert constraint_rank(cols + cols, 1) == 4
        assert constraint_rank([], 1) == 0

    def test_lp_rows_evaluate_functions(self):
        c = find_configuration(4, "C^1_29(1,1,1,1,1,1)")
        obj, rows = lp_rows([c], mpq(1))
        assert obj == (mpq(9, 38),)
        assert rows[0] == (1,)
