import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_h
from scipy import stats

import routgraph.graph as gm
from routgraph import Digraph, generate, generate_simple, loop_vertices
from routgraph.rng import derive_seed


class TestGenerate:
    def test_single_vertex_all_loops(self):
        # only one possible head value exists
        for seed in (0, 1, 99):
            g = generate(1, 2, seed)
            assert g.heads.tolist() == [0, 0]

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            generate(0, 2, 1)
        with pytest.raises(ValueError):
            generate(5, 0, 1)
        with pytest.raises(ValueError):
            generate(5, 2, -1)

    def test_deterministic(self):
        a = generate(200, 3, 123456)
        b = generate(200, 3, 123456)
        assert a.heads.tobytes() == b.heads.tobytes()
        c = generate(200, 3, 123457)
        assert a.heads.tobytes() != c.heads.tobytes()

    @given(
        n=st_h.integers(min_value=1, max_value=40),
        r=st_h.integers(min_value=1, max_value=5),
        seed=st_h.integers(min_value=0, max_value=2**64 - 1),
    )
    def test_out_degree_regular_and_valid(self, n, r, seed):
        g = generate(n, r, seed)
        assert g.heads.shape == (n * r,)
        assert g.heads.min() >= 0 and g.heads.max() < n

    def test_head_marginals_uniform_chisquare(self):
        # fixed slot (i=1, j=0) over many seeds must be uniform on [n]
        n, r, trials = 7, 2, 30000
        values = np.array(
            [generate(n, r, derive_seed(9, t)).heads[r] for t in range(trials)]
        )
        counts = np.bincount(values, minlength=n)
        _, p = stats.chisquare(counts)
        assert p > 1e-3

    def test_all_outcomes_equally_likely_n3_r2(self):
        # all 3^6 = 729 head vectors equally likely: chi-square on encoded draws
        n, r, trials = 3, 2, 150_000
        codes = np.empty(trials, dtype=np.int64)
        powers = 3 ** np.arange(6)
        for t in range(trials):
            codes[t] = int(generate(n, r, derive_seed(31, t)).heads @ powers)
        counts = np.bincount(codes, minlength=729)
        _, p = stats.chisquare(counts)
        assert p > 1e-3

    def test_loop_vertex_frequency_matches_formula(self):
        # P(some vertex has all edges self-looping) = 1 - (1 - n^-r)^n
        n, r, trials = 50, 2, 20000
        hits = sum(
            bool(loop_vertices(generate(n, r, derive_seed(77, t))))
            for t in range(trials)
        )
        p_true = 1.0 - (1.0 - n**-r) ** n
        se = math.sqrt(p_true * (1 - p_true) / trials)
        assert abs(hits / trials - p_true) <= 3 * se


class TestGenerateSimple:
    def test_n3_r2_every_simple_graph_uniform(self):
        # each vertex's heads are an ordering of the two other vertices:
        # 8 possible graphs, sampled uniformly
        trials = 8000
        codes = []
        for t in range(trials):
            g = generate_simple(3, 2, derive_seed(12, t))
            rows = g.heads.reshape(3, 2)
            for i in range(3):
                assert set(rows[i].tolist()) == {0, 1, 2} - {i}
            codes.append(int(g.heads @ (3 ** np.arange(6))))
        counts = np.bincount(np.array(codes))
        counts = counts[counts > 0]
        assert len(counts) == 8
        _, p = stats.chisquare(counts)
        assert p > 1e-3

    def test_acceptance_rate_stable_across_seed_batches(self):
        # acceptance probability is per-vertex (n-1)(n-2)/n^2 to the n-th power,
        # bounded away from zero; two disjoint batches must agree within 3 SE
        n, r, batch = 100, 2, 4000
        p_vertex = (n - 1) * (n - 2) / n**2
        p_true = p_vertex**n

        def batch_rate(offset):
            accepted = 0
            for t in range(batch):
                g = generate(n, r, derive_seed(55, offset + t))
                accepted += gm._is_simple(n, r, g.heads)
            return accepted / batch

        r1, r2 = batch_rate(0), batch_rate(batch)
        se = math.sqrt(2 * p_true * (1 - p_true) / batch)
        assert r1 > 0.01 and r2 > 0.01
        assert abs(r1 - r2) <= 3 * se
        assert abs(r1 - p_true) <= 4 * math.sqrt(p_true * (1 - p_true) / batch)

    def test_rejects_when_no_simple_graph_exists(self):
        with pytest.raises(ValueError):
            generate_simple(2, 2, 0)

    def test_retry_cap_reported(self):
        with pytest.raises(RuntimeError, match="attempts"):
            generate_simple(3, 2, 0, retry_cap=0)

    @given(seed=st_h.integers(min_value=0, max_value=2**32))
    @settings(max_examples=20)
    def test_output_has_no_loops_or_parallel_edges(self, seed):
        g = generate_simple(12, 3, seed)
        rows = g.heads.reshape(12, 3)
        for i in range(12):
            row = rows[i].tolist()
            assert i not in row
            assert len(set(row)) == 3


class TestLoopVertices:
    def test_all_loops(self, all_loops_graph):
        g = all_loops_graph(6)
        assert loop_vertices(g) == set(range(6))

    def test_cycle_has_none(self, cycle_graph):
        assert loop_vertices(cycle_graph(6)) == set()

    def test_partial(self):
        g = Digraph(3, 2, np.array([0, 0, 2, 0, 1, 0]))
        assert loop_vertices(g) == {0}


class TestDigraphType:
    def test_immutable(self):
        g = generate(5, 2, 1)
        with pytest.raises(AttributeError):
            g.n = 10
        with pytest.raises(ValueError):
            g.heads[0] = 3

    def test_invalid_heads_rejected(self):
        with pytest.raises(ValueError):
            Digraph(3, 1, np.array([0, 1, 3]))
        with pytest.raises(ValueError):
            Digraph(3, 1, np.array([0, -1, 2]))
        with pytest.raises(ValueError):
            Digraph(3, 2, np.array([0, 1, 2]))

    def test_in_csr_lists_tails_with_multiplicity(self):
        g = Digraph(3, 2, np.array([1, 1, 2, 0, 0, 0]))
        indptr, tails = g.in_csr()
        assert indptr.tolist() == [0, 3, 5, 6]
        assert tails[0:3].tolist() == [1, 2, 2]  # two parallel edges 2->0
        assert tails[3:5].tolist() == [0, 0]  # two parallel edges 0->1
        assert tails[5:6].tolist() == [1]

    def test_equality_and_hash(self):
        a = generate(10, 2, 3)
        b = generate(10, 2, 3)
        assert a == b and hash(a) == hash(b)


class TestSerialization:
    @given(
        n=st_h.integers(min_value=1, max_value=25),
        r=st_h.integers(min_value=1, max_value=4),
        seed=st_h.integers(min_value=0, max_value=2**40),
    )
    def test_text_round_trip(self, n, r, seed):
        g = generate(n, r, seed)
        assert gm.from_text(gm.to_text(g)) == g

    @given(
        n=st_h.integers(min_value=1, max_value=25),
        r=st_h.integers(min_value=1, max_value=4),
        seed=st_h.integers(min_value=0, max_value=2**40),
    )
    def test_json_round_trip(self, n, r, seed):
        g = generate(n, r, seed)
        assert gm.from_json(gm.to_json(g)) == g

    def test_text_is_one_based(self):
        g = Digraph(2, 1, np.array([1, 0]))
        text = gm.to_text(g)
        assert text.splitlines() == ["n=2 r=1", "1: 2", "2: 1"]

    def test_induced_csr(self):
        g = Digraph(4, 2, np.array([1, 2, 0, 3, 1, 1, 0, 2]))
        indptr, indices, members = gm.induced_csr(g, np.array([0, 1, 2]))
        assert members.tolist() == [0, 1, 2]
        # vertex 0 edges to 1, 2 kept; vertex 1 edge to 3 dropped; vertex 2 both kept
        assert indptr.tolist() == [0, 2, 3, 5]
        assert indices.tolist() == [1, 2, 0, 1, 1]
