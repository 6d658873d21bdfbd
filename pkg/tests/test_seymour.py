import json
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from oracles import path_distances, set_neighborhood, subset_sweep, vertex_counts
from snw.digraph import Digraph, from_edges, is_strongly_connected, read_dg, to_set
from snw.enumeration import GeneratorConfig, decode, iter_graphs, random_oriented, universe_size
from snw.errors import (
    EmptyFirstNeighborhood,
    NonPositiveLambda,
    NotACounterexample,
    TooLargeForExact,
)
from snw.seymour import (
    UNBOUNDED,
    analyze,
    best_lambda,
    deficient_in_vertices,
    edge_minimal_reduce,
    in_regular_check,
    is_lambda_counterexample,
    lemma_T_witness,
    minimal_reduce,
    neighborhood_profile,
    seymour_vertices,
    shrinkage_profile,
    subset_inequality_check,
    subset_seymour_search,
)

LAMBDAS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]


@st.composite
def oriented_graphs(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    return decode(n, draw(st.integers(0, universe_size(n) - 1)))


def small_graphs(max_n=4, min_n=1):
    for n in range(min_n, max_n + 1):
        for _, D in iter_graphs(GeneratorConfig(n)):
            yield D


def oracle_is_cex(D, lam, dist=None):
    dist = dist or path_distances(D)
    for v in range(D.n):
        d1, d2 = vertex_counts(dist, v)
        if not d2 < lam * d1:
            return False
    return True


class TestSeymourVertices:
    def test_examples(self, c3, t3):
        assert seymour_vertices(c3) == {0, 1, 2}
        assert seymour_vertices(t3) == {2}

    def test_against_oracle(self):
        for D in small_graphs(4):
            dist = path_distances(D)
            expected = {v for v in range(D.n) if vertex_counts(dist, v)[0] <= vertex_counts(dist, v)[1]}
            assert seymour_vertices(D) == expected

    def test_tournaments_up_to_5(self):
        for n in range(1, 6):
            for _, D in iter_graphs(GeneratorConfig(n, filters={"tournament"})):
                assert seymour_vertices(D)


class TestBestLambda:
    def test_examples(self, c3, t3, c5):
        assert best_lambda(c3) == 1
        assert best_lambda(t3) == UNBOUNDED
        assert best_lambda(c5) == 1
        assert best_lambda(c5) >= 0.8191

    def test_consistency_with_predicate(self):
        for D in small_graphs(4):
            b = best_lambda(D)
            for lam in LAMBDAS:
                assert is_lambda_counterexample(D, lam) == (b != UNBOUNDED and b < lam)

    def test_seymour_iff(self):
        for D in small_graphs(4):
            b = best_lambda(D)
            assert bool(seymour_vertices(D)) == (b == UNBOUNDED or b >= 1)


class TestLambdaCounterexample:
    def test_examples(self, c3, path3):
        assert is_lambda_counterexample(c3, 2)
        assert not is_lambda_counterexample(c3, 1)
        assert not is_lambda_counterexample(path3, 2)

    def test_lambda_forms(self, c3):
        assert is_lambda_counterexample(c3, "3/2")
        assert is_lambda_counterexample(c3, Fraction(101, 100))
        with pytest.raises(TypeError):
            is_lambda_counterexample(c3, 1.5)

    @pytest.mark.parametrize("lam", [0, -1, "-1/2"])
    def test_non_positive(self, c3, lam):
        with pytest.raises(NonPositiveLambda):
            is_lambda_counterexample(c3, lam)

    def test_against_oracle(self):
        for D in small_graphs(4):
            dist = path_distances(D)
            for lam in LAMBDAS:
                assert is_lambda_counterexample(D, lam) == oracle_is_cex(D, lam, dist)


class TestSubsetSearch:
    def test_examples(self, c3, t3):
        assert subset_seymour_search(c3) == {0}
        assert subset_seymour_search(t3) == {2}

    def test_against_oracle(self):
        for D in small_graphs(4, min_n=2):
            expected = subset_sweep(D)
            assert subset_seymour_search(D, "exact") == (None if expected is None else frozenset(expected))

    @settings(max_examples=300, deadline=None)
    @given(oriented_graphs())
    def test_against_oracle_n5(self, D):
        expected = subset_sweep(D)
        assert subset_seymour_search(D, "exact") == (None if expected is None else frozenset(expected))

    @settings(max_examples=300, deadline=None)
    @given(oriented_graphs(max_n=7))
    def test_greedy_never_false_positive(self, D):
        S = subset_seymour_search(D, "greedy")
        if S is not None:
            assert 0 < len(S) < D.n
            dist = path_distances(D)
            assert len(set_neighborhood(dist, S, 1)) <= len(set_neighborhood(dist, S, 2))

    def test_seymour_vertex_gives_singleton(self):
        for D in small_graphs(4, min_n=2):
            if seymour_vertices(D):
                assert len(subset_seymour_search(D)) == 1

    def test_limits(self):
        with pytest.raises(TooLargeForExact):
            subset_seymour_search(Digraph.empty(25))
        with pytest.raises(ValueError):
            subset_seymour_search(Digraph.empty(1))

    def test_greedy_on_large_graph(self):
        D = random_oriented(30, 0.5, 3)
        S = subset_seymour_search(D, "greedy")
        assert S is not None and 0 < len(S) < 30


def oracle_subset_inequality(D, lam):
    dist = path_distances(D)
    for r in range(1, D.n + 1):
        for combo in combinations(range(D.n), r):
            S = set(combo)
            d1 = len(set_neighborhood(dist, S, 1))
            d2 = len(set_neighborhood(dist, S, 2))
            if d1 and not d2 < lam * d1:
                return frozenset(S)
    return None


class TestSubsetInequality:
    def test_examples(self, c3):
        assert subset_inequality_check(c3, 2) is None
        assert subset_inequality_check(c3, 1) == {0}

    def test_seymour_vertex_violates_at_one(self):
        for D in small_graphs(4, min_n=2):
            if seymour_vertices(D) - {v for v in range(D.n) if D.out_degree(v) == 0}:
                assert subset_inequality_check(D, 1) is not None

    @pytest.mark.parametrize("lam", [Fraction(1), Fraction(3, 2), Fraction(2)])
    def test_against_oracle(self, lam):
        for D in small_graphs(4, min_n=2):
            assert subset_inequality_check(D, lam) == oracle_subset_inequality(D, lam)

    def test_errors(self, c3):
        with pytest.raises(NonPositiveLambda):
            subset_inequality_check(c3, 0)
        with pytest.raises(TooLargeForExact):
            subset_inequality_check(Digraph.empty(25), 1)


def all_single_removals_fail(D, lam):
    return not any(is_lambda_counterexample(D.without_edge(u, v), lam) for u, v in D.edges())


class TestEdgeMinimal:
    def test_c3_unchanged(self, c3):
        R, trace = edge_minimal_reduce(c3, 2)
        assert R == c3 and trace.steps == []

    def test_extra_vertex(self):
        D = from_edges(4, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1)])
        R, trace = edge_minimal_reduce(D, 2)
        # dropping 3->0 keeps d2(3) = 1 < 2 * 1; then dropping 3->1 makes a sink
        assert R.edges() == [(0, 1), (1, 2), (2, 0), (3, 1)]
        assert [s.detail for s in trace.steps] == [(3, 0)]
        assert all_single_removals_fail(R, 2)

    def test_not_a_counterexample(self, c3):
        with pytest.raises(NotACounterexample):
            edge_minimal_reduce(c3, 1)

    @pytest.mark.parametrize("lam", [Fraction(3, 2), Fraction(2), Fraction(3)])
    def test_fixpoint_and_trace(self, lam):
        for D in small_graphs(4, min_n=3):
            if not is_lambda_counterexample(D, lam):
                continue
            R, trace = edge_minimal_reduce(D, lam)
            assert set(R.edges()) <= set(D.edges())
            assert all_single_removals_fail(R, lam)
            assert edge_minimal_reduce(R, lam)[0] == R
            assert all(is_lambda_counterexample(s.graph, lam) for s in trace.steps)


class TestMinimalReduce:
    def test_two_c3(self, two_c3, c3):
        R, trace = minimal_reduce(two_c3, 2)
        assert R == c3
        assert [s.kind for s in trace.steps] == ["VertexRestriction"]
        assert trace.steps[0].detail == (0, 1, 2)

    def test_c3_and_c5(self, c3, c5):
        assert minimal_reduce(c3, 2)[0] == c3
        assert minimal_reduce(c5, 2)[0] == c5

    def test_smallest_component_wins(self, c3):
        D = from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 5)])
        R, trace = minimal_reduce(D, 2)
        assert R == c3
        assert trace.steps[-1].detail == (5, 6, 7)

    def test_not_a_counterexample(self, c3):
        with pytest.raises(NotACounterexample):
            minimal_reduce(c3, 1)

    @pytest.mark.parametrize("lam", [Fraction(3, 2), Fraction(2), Fraction(3)])
    def test_strongly_connected_and_minimal(self, lam):
        for seed in range(150):
            D = random_oriented(3 + seed % 5, 0.8, seed)
            if not is_lambda_counterexample(D, lam):
                continue
            R, trace = minimal_reduce(D, lam)
            assert is_strongly_connected(R)
            assert is_lambda_counterexample(R, lam)
            assert all_single_removals_fail(R, lam)
            assert all(is_lambda_counterexample(s.graph, lam) for s in trace.steps)
            assert trace.final == R

    def test_trace_json(self, two_c3):
        _, trace = minimal_reduce(two_c3, "3/2")
        doc = trace.to_json()
        assert doc["lambda"] == {"num": 3, "den": 2}
        assert doc["steps"] == [{"kind": "VertexRestriction", "detail": [0, 1, 2]}]


def oracle_T(D, S, lam):
    first = set()
    for s in S:
        first |= {u for u in range(D.n) if D.has_edge(s, u)}
    best = None
    for r in range(1, len(first) + 1):
        for combo in combinations(sorted(first), r):
            reach = {u for t in combo for u in range(D.n) if D.has_edge(t, u)} - set(S)
            if lam * r > len(reach):
                if best is None or r > len(best):
                    best = frozenset(combo)
    return best


class TestLemmaT:
    def test_examples(self, c3, path3):
        assert lemma_T_witness(c3, {0}, 2) == {1}
        assert lemma_T_witness(path3, {0}, Fraction(1, 2)) is None

    def test_empty_first_neighborhood(self, t3):
        with pytest.raises(EmptyFirstNeighborhood):
            lemma_T_witness(t3, {2}, 1)

    def test_against_oracle(self):
        for D in small_graphs(4, min_n=2):
            for r in (1, 2):
                for S in combinations(range(D.n), r):
                    if not any(D.out_degree(s) for s in S):
                        continue
                    for lam in (Fraction(1, 2), Fraction(1), Fraction(2)):
                        assert lemma_T_witness(D, S, lam) == oracle_T(D, S, lam)


class TestShrinkage:
    def test_c3(self, c3):
        r = shrinkage_profile(c3, 0, 2)
        assert r.profile.out_sizes == (1, 1, 1) and r.holds
        assert r.union_size == 3 and r.within_triangular_bound is None

    def test_t3(self, t3):
        r = shrinkage_profile(t3, 0, 1)
        assert r.profile.out_sizes == (2,) and r.holds
        assert r.min_out_degree == 0 and r.within_triangular_bound is False

    def test_out_star(self):
        D = from_edges(5, [(0, v) for v in range(1, 5)])
        for lam in (Fraction(1, 2), Fraction(1)):
            r = shrinkage_profile(D, 0, lam)
            assert r.profile.out_sizes == (4,) and r.union_size == 4

    def test_chain_breaks_above_one(self):
        # strongly connected, edge-minimal 3/2-counterexample on 8 vertices
        # where vertex 5 has out-profile (3, 2, 3)
        D = read_dg(GOLDEN / "chain_break_lam3_2_n8.dg")
        lam = Fraction(3, 2)
        assert is_lambda_counterexample(D, lam) and is_strongly_connected(D)
        assert edge_minimal_reduce(D, lam)[0] == D
        assert subset_inequality_check(D, lam) is None
        r = shrinkage_profile(D, 5, lam)
        dist = path_distances(D)
        assert r.profile.out_sizes == tuple(len(set_neighborhood(dist, {5}, k)) for k in (1, 2, 3))
        assert r.profile.out_sizes == (3, 2, 3) and not r.holds

    def test_profile_sums(self):
        for D in small_graphs(4):
            for v in range(D.n):
                prof = neighborhood_profile(D, v)
                assert sum(prof.out_sizes) <= D.n
                assert all(prof.out_sizes) and all(prof.in_sizes)


class TestInRegular:
    def test_examples(self, c3, t3):
        assert in_regular_check(c3) == 1
        assert deficient_in_vertices(c3) == frozenset()
        assert in_regular_check(t3) is None

    def test_deficient_against_oracle(self):
        for D in small_graphs(4):
            dist = path_distances(D)
            expected = set()
            for v in range(D.n):
                d1 = sum(1 for u in range(D.n) if dist[u][v] == 1)
                d2 = sum(1 for u in range(D.n) if dist[u][v] == 2)
                if d1 > d2:
                    expected.add(v)
            assert deficient_in_vertices(D) == expected

    @settings(max_examples=300, deadline=None)
    @given(oriented_graphs(min_n=1, max_n=7))
    def test_averaging_identities(self, D):
        out1 = out2 = in1 = in2 = 0
        for v in range(D.n):
            p = neighborhood_profile(D, v)
            out1 += p.out_sizes[0] if p.out_sizes else 0
            out2 += p.out_sizes[1] if len(p.out_sizes) > 1 else 0
            in1 += p.in_sizes[0] if p.in_sizes else 0
            in2 += p.in_sizes[1] if len(p.in_sizes) > 1 else 0
        assert (out1, out2) == (in1, in2)

    def test_in_regular_have_witness(self):
        for n in range(2, 6):
            for _, D in iter_graphs(GeneratorConfig(n, filters={"in_regular"})):
                assert in_regular_check(D) is not None
                assert subset_seymour_search(D) is not None


class TestReport:
    def test_c3_golden(self, c3):
        assert analyze(c3).dumps() == (GOLDEN / "c3_report.json").read_text()

    def test_t3_golden(self, t3):
        assert analyze(t3).dumps() == (GOLDEN / "t3_report.json").read_text()

    def test_fields(self, c3, t3):
        doc = analyze(c3).to_json()
        assert list(doc) == ["n", "girth", "seymour_vertices", "ratios", "best_lambda", "subset_witness"]
        assert doc["best_lambda"] == {"num": 1, "den": 1} and doc["subset_witness"] == [0]
        doc = analyze(t3).to_json()
        assert doc["girth"] == "inf" and doc["best_lambda"] == "unbounded"
        assert doc["seymour_vertices"] == [2]

    def test_edgeless(self):
        doc = analyze(Digraph.empty(2)).to_json()
        assert doc["seymour_vertices"] == [0, 1]

    def test_single_vertex(self):
        assert analyze(Digraph.empty(1)).subset_witness is None

    def test_witness_invariant(self):
        for D in small_graphs(4, min_n=2):
            rep = analyze(D)
            S = rep.subset_witness
            assert S is not None and 0 < len(S) < D.n
            dist = path_distances(D)
            assert len(set_neighborhood(dist, S, 1)) <= len(set_neighborhood(dist, S, 2))
            json.loads(rep.dumps())
