import math
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hardcore_cert.exactmath import Poly, RatFunc, Scalar
from hardcore_cert.graphs import (
    Graph,
    GraphFormatError,
    GraphValidationError,
    check_regular,
    format_graph,
    girth,
    independence_counts,
    independence_number,
    independence_polynomial,
    load_graph,
    moore_order,
    named,
    occupancy_exact,
    occupancy_fraction,
    occupancy_ratfunc,
    parse_graph,
    resolve_graph,
)

PETERSEN_P = [1, 10, 30, 30, 5]
HEAWOOD_P = [1, 14, 70, 154, 147, 56, 14, 2]

BUNDLED = ["petersen", "heawood", "gp72", "tutte_coxeter_h38", "h46", "robertson", "cyclotomic13"]


def brute_force_counts(g: Graph) -> list[int]:
    counts = [0] * (g.n + 1)
    for mask in range(1 << g.n):
        if all(not (mask >> u & 1 and mask >> v & 1) for u, v in g.edges()):
            counts[bin(mask).count("1")] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@st.composite
def small_graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


class TestIndependencePolynomial:
    @given(small_graphs())
    @settings(max_examples=80, deadline=None)
    def test_matches_subset_enumeration(self, g):
        assert independence_counts(g) == brute_force_counts(g)

    @given(small_graphs(7), small_graphs(7))
    @settings(max_examples=40, deadline=None)
    def test_multiplicative_over_disjoint_union(self, g, h):
        assert independence_polynomial(g.disjoint_union(h)) == independence_polynomial(g) * independence_polynomial(h)

    @given(small_graphs())
    @settings(max_examples=40, deadline=None)
    def test_low_coefficients(self, g):
        c = independence_counts(g)
        assert c[0] == 1 and all(x > 0 for x in c)
        assert c[1] == g.n
        if len(c) > 2:
            assert c[2] == math.comb(g.n, 2) - len(g.edges())

    def test_petersen_and_heawood(self):
        assert independence_counts(named("petersen").graph) == PETERSEN_P
        assert independence_counts(named("heawood").graph) == HEAWOOD_P
        assert independence_polynomial(named("petersen").graph)(1) == Scalar(76)
        assert independence_polynomial(named("heawood").graph)(1) == Scalar(458)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            independence_counts(Graph.from_edges(41, []))

    def test_largest_bundled_graph(self):
        g = named("tutte_coxeter_h38").graph
        assert independence_number(g) == 15
        assert sum(independence_counts(g)) == independence_polynomial(g)(1).a


class TestOccupancy:
    def test_known_values(self):
        assert occupancy_exact(named("heawood").graph, 1) == mpq(113, 458)
        assert occupancy_exact(named("petersen").graph, 1) == mpq(9, 38)

    @given(small_graphs(8), st.integers(2, 3))
    @settings(max_examples=30, deadline=None)
    def test_copies_share_occupancy(self, g, k):
        assert occupancy_ratfunc(g.copies(k)) == occupancy_ratfunc(g)

    @given(small_graphs(8), st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=20))
    @settings(max_examples=30, deadline=None)
    def test_definition(self, g, lam):
        counts = brute_force_counts(g)
        p = sum(c * mpq(lam) ** k for k, c in enumerate(counts))
        dp = sum(k * c * mpq(lam) ** k for k, c in enumerate(counts))
        assert occupancy_fraction(g, lam) == Scalar(dp / (g.n * p))

    def test_ratfunc_form(self):
        f = occupancy_ratfunc(named("petersen").graph)
        assert f == RatFunc(Poly.from_ints([0, 10, 60, 90, 20]), Poly.from_ints([10, 100, 300, 300, 50]))

    def test_nonpositive_fugacity(self):
        with pytest.raises(ValueError):
            occupancy_fraction(named("petersen").graph, 0)


class TestStructure:
    @given(small_graphs(10))
    @settings(max_examples=60, deadline=None)
    def test_girth_matches_networkx(self, g):
        assert girth(g) == nx.girth(to_nx(g))

    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_graph_validates(self, name):
        ng = named(name)
        assert ng.graph.n == ng.expected_order
        assert check_regular(ng.graph) == ng.expected_regularity
        assert girth(ng.graph) == ng.expected_girth == nx.girth(to_nx(ng.graph))

    @pytest.mark.parametrize(
        "name,reference",
        [
            ("petersen", nx.petersen_graph()),
            ("heawood", nx.heawood_graph()),
            ("tutte_coxeter_h38", nx.LCF_graph(30, [-13, -9, 7, -7, 9, 13], 5)),
        ],
    )
    def test_isomorphic_to_networkx_construction(self, name, reference):
        assert nx.is_isomorphic(to_nx(named(name).graph), reference)

    def test_gp72_is_generalized_petersen(self):
        ref = nx.Graph()
        for i in range(7):
            ref.add_edges_from([(i, (i + 1) % 7), (i, i + 7), (i + 7, (i + 2) % 7 + 7)])
        assert nx.is_isomorphic(to_nx(named("gp72").graph), ref)
        assert not nx.is_isomorphic(to_nx(named("gp72").graph), nx.heawood_graph())

    def test_heawood_edge_count(self):
        assert len(named("heawood").graph.edges()) == 21

    @pytest.mark.parametrize("name,alpha", [("gp72", 5), ("cyclotomic13", 4), ("petersen", 4), ("heawood", 7)])
    def test_independence_number_against_clique_oracle(self, name, alpha):
        g = named(name).graph
        comp = nx.complement(to_nx(g))
        assert independence_number(g) == alpha == max(len(c) for c in nx.find_cliques(comp))

    def test_robertson_independence_number(self):
        g = named("robertson").graph
        comp = nx.complement(to_nx(g))
        assert independence_number(g) == max(len(c) for c in nx.find_cliques(comp))

    @pytest.mark.parametrize("d,g,order", [(3, 5, 10), (3, 6, 14), (3, 8, 30), (4, 6, 26), (4, 5, 17), (3, 4, 6)])
    def test_moore_order(self, d, g, order):
        assert moore_order(d, g) == order

    def test_moore_order_matches_cages(self):
        for name, (d, g) in {"petersen": (3, 5), "heawood": (3, 6), "tutte_coxeter_h38": (3, 8), "h46": (4, 6)}.items():
            assert moore_order(d, g) == named(name).graph.n

    def test_generated_families(self):
        assert len(named("complete(4)").graph.edges()) == 6
        assert girth(named("cycle(7)").graph) == 7
        assert check_regular(named("kdd(3)").graph) == 3
        assert girth(Graph.from_edges(3, [(0, 1), (1, 2)])) == math.inf

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            named("dodecahedron")


class TestFileFormat:
    def test_roundtrip(self, tmp_path):
        g = named("gp72").graph
        path = tmp_path / "g.txt"
        path.write_text(format_graph(g))
        assert load_graph(path) == g
        assert resolve_graph(str(path)) == g

    def test_comments_ignored(self):
        g = parse_graph("# a path\n3 2\n0 1\n# middle\n1 2\n")
        assert g.edges() == [(0, 1), (1, 2)]

    @pytest.mark.parametrize(
        "text",
        ["", "3\n", "3 2\n0 1\n", "3 1\n0 3\n", "3 1\n1 1\n", "3 1\na b\n", "2 2\n0 1\n1 0\n"],
    )
    def test_malformed(self, text):
        with pytest.raises(GraphFormatError):
            parse_graph(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_graph(tmp_path / "absent.txt")

    def test_validation_mismatch(self, monkeypatch):
        from hardcore_cert import graphs

        named.cache_clear()
        monkeypatch.setitem(graphs._EXPECTED, "gp72", (14, 3, 6))
        try:
            with pytest.raises(GraphValidationError):
                named("gp72")
        finally:
            named.cache_clear()
