"""Samplers: determinism, marginal frequencies, exact-degree guarantees."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.stats

from matchspread.core import GroundSet, ProbVector
from matchspread.enumeration import enumerate_graphs
from matchspread.models import (
    BlockStructure,
    DegreeSequence,
    Graph,
    RngStream,
    chung_lu_probabilities,
    edge_ground_set,
    edge_item,
    erdos_gallai_graphical,
    sample_block_model,
    sample_chung_lu,
    sample_degree_sequence_graph,
    sample_distinct,
    sample_product,
)


def freq_margin(p, trials, z=2.576):
    return z * math.sqrt(p * (1 - p) / trials)


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(42).generator().random(5)
        b = RngStream(42).generator().random(5)
        assert np.array_equal(a, b)

    def test_children_differ(self):
        a = RngStream(42).child(0).generator().random(5)
        b = RngStream(42).child(1).generator().random(5)
        assert not np.array_equal(a, b)


class TestGraph:
    def test_canonicalizes_and_validates(self):
        g = Graph(3, [(2, 0)])
        assert g.edges == frozenset({(0, 2)})
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])

    def test_degrees(self):
        g = Graph(4, [(0, 1), (1, 2)])
        assert g.degree_array().tolist() == [1, 2, 1, 0]

    def test_json_roundtrip(self):
        g = Graph(4, [(0, 1), (2, 3)])
        assert Graph.from_json(g.to_json()).edges == g.edges

    def test_edge_item_encoding(self):
        assert edge_item(3, 1) == "1-3"
        assert "0-1" in edge_ground_set(3)


class TestSampleDistinct:
    def test_bounds_and_distinctness(self):
        gen = RngStream(0).generator()
        for n, m in [(10, 0), (10, 10), (1000, 7), (1000, 800)]:
            got = sample_distinct(gen, n, m)
            assert len(got) == m == len(set(got.tolist()))
            assert all(0 <= x < n for x in got.tolist())
        with pytest.raises(ValueError):
            sample_distinct(gen, 3, 4)


class TestSampleProduct:
    def test_extremes(self):
        g = GroundSet(["a", "b", "c"])
        rng = RngStream(1)
        assert sample_product(g, ProbVector.uniform(g, 1), rng) == frozenset(g.items)
        assert sample_product(g, ProbVector.uniform(g, 0), rng) == frozenset()

    def test_marginal_frequency(self):
        g = GroundSet(["a", "b"])
        p = ProbVector.uniform(g, Fraction(3, 10))
        master = RngStream(7)
        trials = 10_000
        hits = {"a": 0, "b": 0}
        for i in range(trials):
            s = sample_product(g, p, master.child(i))
            for x in s:
                hits[x] += 1
        for x, h in hits.items():
            assert abs(h / trials - 0.3) < freq_margin(0.3, trials), (x, h)


class TestBlockModel:
    def test_complete_and_empty(self):
        b = BlockStructure.from_sizes([3, 3], [[1, 1], [1, 1]])
        assert sample_block_model(b, RngStream(0)).edge_count() == 15
        b0 = BlockStructure.from_sizes([3, 3], [[0, 0], [0, 0]])
        assert sample_block_model(b0, RngStream(0)).edge_count() == 0

    def test_cross_edge_mean(self):
        b = BlockStructure.from_sizes([3, 3], [[0, Fraction(1, 2)], [Fraction(1, 2), 0]])
        master = RngStream(3)
        trials = 10_000
        total = sum(sample_block_model(b, master.child(i)).edge_count() for i in range(trials))
        mean = total / trials
        # 9 cross pairs at 1/2: mean 4.5, sd 1.5 per draw
        assert abs(mean - 4.5) < 2.576 * 1.5 / math.sqrt(trials)

    def test_disjoint_edges_uncorrelated(self):
        b = BlockStructure.from_sizes([6], [[Fraction(1, 2)]])
        master = RngStream(9)
        trials = 10_000
        xs = np.empty(trials)
        ys = np.empty(trials)
        for i in range(trials):
            g = sample_block_model(b, master.child(i))
            xs[i] = (0, 1) in g.edges
            ys[i] = (2, 3) in g.edges
        cov = float(np.mean(xs * ys) - xs.mean() * ys.mean())
        assert abs(cov) < 2.576 * 0.25 / math.sqrt(trials)

    def test_validation(self):
        with pytest.raises(ValueError):
            BlockStructure.from_sizes([2, 2], [[0, 1], [0.5, 0]])  # asymmetric
        with pytest.raises(ValueError):
            BlockStructure([[0, 1], [1, 2]], [[1, 1], [1, 1]])  # overlap


class TestChungLu:
    def test_uniform_degrees(self):
        b = chung_lu_probabilities(DegreeSequence((2, 2, 2)))
        assert b.k == 1 and b.P[0][0] == Fraction(2, 3)

    def test_capping(self):
        b = chung_lu_probabilities(DegreeSequence((3, 3, 1, 1)))
        assert b.P[0][0] == 1  # 9/8 capped
        assert b.P[0][1] == Fraction(3, 8)
        assert b.P[1][1] == Fraction(1, 8)

    def test_equal_degree_grouping(self):
        b = chung_lu_probabilities(DegreeSequence((5, 5, 3)))
        assert b.blocks == ((0, 1), (2,))

    def test_zero_degree_rejected(self):
        with pytest.raises(ValueError):
            chung_lu_probabilities(DegreeSequence((2, 1, 0)))

    def test_single_edge_frequency(self):
        d = DegreeSequence((1, 1))
        master = RngStream(5)
        trials = 4000
        hits = sum(sample_chung_lu(d, master.child(i)).edge_count() for i in range(trials))
        assert abs(hits / trials - 0.5) < freq_margin(0.5, trials)

    def test_all_pairs_capped_gives_complete_graph(self):
        g = sample_chung_lu(DegreeSequence((4, 4, 4, 4)), RngStream(0))
        assert g.edge_count() == 6

    def test_expected_degree_matches_pair_sum(self):
        d = DegreeSequence((3, 2, 2, 1))
        b = chung_lu_probabilities(d)
        blk = b.vertex_block()
        exact = [
            sum(float(b.P[blk[i]][blk[j]]) for j in range(4) if j != i)
            for i in range(4)
        ]
        master = RngStream(13)
        trials = 20_000
        sums = np.zeros(4)
        for i in range(trials):
            sums += sample_chung_lu(d, master.child(i)).degree_array()
        for i in range(4):
            sd = math.sqrt(sum(float(b.P[blk[i]][blk[j]]) for j in range(4) if j != i))
            assert abs(sums[i] / trials - exact[i]) < 2.576 * max(sd, 0.5) / math.sqrt(trials)


class TestErdosGallai:
    def test_known_cases(self):
        assert erdos_gallai_graphical((2, 2, 2, 2))
        assert erdos_gallai_graphical((3, 3, 3, 3))
        assert not erdos_gallai_graphical((3, 3, 3, 1))
        assert not erdos_gallai_graphical((3, 1))
        assert not erdos_gallai_graphical((1,))
        assert erdos_gallai_graphical(())

    def test_agrees_with_realizability(self):
        # graphical with even sum iff a realization exists (n <= 6)
        from itertools import combinations_with_replacement

        for degs in combinations_with_replacement(range(5, -1, -1), 6):
            d = tuple(sorted(degs, reverse=True))
            realizable = any(True for _ in enumerate_graphs(DegreeSequence(d)))
            assert realizable == (erdos_gallai_graphical(d) and sum(d) % 2 == 0), d


class TestDegreeSequenceSampler:
    def test_unique_realizations(self):
        g = sample_degree_sequence_graph(DegreeSequence((1, 1)), RngStream(0))
        assert g.edges == frozenset({(0, 1)})
        g = sample_degree_sequence_graph(DegreeSequence((2, 2, 2)), RngStream(0))
        assert g.edges == frozenset({(0, 1), (0, 2), (1, 2)})

    def test_rejects_bad_sequences(self):
        with pytest.raises(ValueError):
            sample_degree_sequence_graph(DegreeSequence((3, 1)), RngStream(0))
        with pytest.raises(ValueError):
            sample_degree_sequence_graph(DegreeSequence((1, 1, 1)), RngStream(0))

    def test_exact_degrees(self):
        d = DegreeSequence((4, 3, 2, 2, 2, 1, 1, 1))
        for i in range(20):
            g = sample_degree_sequence_graph(d, RngStream(21).child(i))
            assert tuple(g.degree_array().tolist()) == d.degrees

    def test_deterministic(self):
        d = DegreeSequence((2, 2, 2, 1, 1))
        a = sample_degree_sequence_graph(d, RngStream(33))
        b = sample_degree_sequence_graph(d, RngStream(33))
        assert a.edges == b.edges

    def test_three_matchings_uniform(self):
        # degree sequence (1,1,1,1) has exactly 3 realizations
        d = DegreeSequence((1, 1, 1, 1))
        master = RngStream(17)
        counts = {}
        trials = 30_000
        for i in range(trials):
            g = sample_degree_sequence_graph(d, master.child(i))
            counts[tuple(sorted(g.edges))] = counts.get(tuple(sorted(g.edges)), 0) + 1
        assert len(counts) == 3
        _, p = scipy.stats.chisquare(list(counts.values()))
        assert p > 0.01, counts

    def test_uniform_vs_enumeration(self):
        # chi-square against the exhaustively enumerated realization set
        d = DegreeSequence((2, 2, 1, 1))
        realizations = sorted(enumerate_graphs(d))
        assert len(realizations) == 2
        master = RngStream(29)
        counts = {r: 0 for r in realizations}
        trials = 4000
        for i in range(trials):
            g = sample_degree_sequence_graph(d, master.child(i))
            counts[tuple(sorted(g.edges))] += 1
        _, p = scipy.stats.chisquare(list(counts.values()))
        assert p > 0.01, counts

    def test_five_cycles_uniform(self):
        # (2,2,2,2,2) has the 12 labeled 5-cycles as realizations
        d = DegreeSequence((2,) * 5)
        realizations = sorted(enumerate_graphs(d))
        assert len(realizations) == 12
        master = RngStream(41)
        counts = {r: 0 for r in realizations}
        trials = 6000
        for i in range(trials):
            g = sample_degree_sequence_graph(d, master.child(i))
            counts[tuple(sorted(g.edges))] += 1
        _, p = scipy.stats.chisquare(list(counts.values()))
        assert p > 0.01, counts

    def test_switching_fallback(self):
        d = DegreeSequence((3, 3, 3, 3, 2, 2))
        g = sample_degree_sequence_graph(d, RngStream(3), method="switching")
        assert tuple(g.degree_array().tolist()) == d.degrees

    def test_rejection_budget_error(self):
        d = DegreeSequence((3, 3, 3, 3))  # K4 is the only realization
        with pytest.raises(RuntimeError, match="switching"):
            # with 0 attempts the budget is exhausted immediately
            sample_degree_sequence_graph(d, RngStream(0), max_attempts=0)


class TestDegreeSequenceType:
    def test_sorting_and_classes(self):
        d = DegreeSequence((1, 3, 3, 2))
        assert d.degrees == (3, 3, 2, 1)
        assert d.values == (3, 2, 1)
        assert d.class_sizes == (2, 1, 1)
        assert d.classes() == ((0, 1), (2,), (3,))
        assert d.total == 9

    def test_bivalued_accessor(self):
        assert DegreeSequence((4, 4, 2, 2, 2)).bivalued() == (4, 2, 2, 3)
        with pytest.raises(ValueError):
            DegreeSequence((3, 2, 1)).bivalued()
