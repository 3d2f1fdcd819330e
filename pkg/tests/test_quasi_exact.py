from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from cutsparsify.generators import gen_random_quasi
from cutsparsify.graph import Instance, InstanceError
from cutsparsify.mincut import enumerate_bipartitions, min_cut_value
from cutsparsify.quasi_exact import (
    NotQuasiBipartiteError,
    count_distinct_profiles,
    exact_sparsifier,
    find_similar_pair,
    gen_profile_lowerbound,
    is_similar_pair,
    profiles,
    quasi_bipartite_cut_value,
    star_profile,
    subset_order,
)
from cutsparsify.verify import verify_quality

from conftest import brute_force_cut


class TestProfile:
    def test_star_bits_with_tie(self, star123):
        p = star_profile(star123, "v")
        assert p.subsets() == [("t1",), ("t2",), ("t3",), ("t1", "t2"), ("t1", "t3"), ("t2", "t3")]
        assert p.bits == (0, 0, 0, 0, 1, 1)

    def test_single_edge(self):
        g = Instance.build(["v", "t1", "t2", "t3"], [("v", "t1", 4)], ["t1", "t2", "t3"])
        p = star_profile(g, "v")
        assert all(b == int("t1" in s) for s, b in zip(p.subsets(), p.bits))

    def test_symmetric_half_is_zero(self):
        ts = ["a", "b", "c", "d"]
        g = Instance.build(["v", *ts], [("v", t, 1) for t in ts], ts)
        p = star_profile(g, "v")
        assert all(b == 0 for s, b in zip(p.subsets(), p.bits) if len(s) == 2)

    def test_errors(self, star123):
        with pytest.raises(InstanceError):
            star_profile(star123, "t1")
        bad = Instance.build(["t1", "u", "v"], [("t1", "u", 1), ("u", "v", 1)], ["t1"])
        with pytest.raises(NotQuasiBipartiteError):
            star_profile(bad, "u")

    def test_length_and_order(self):
        assert len(subset_order(5)) == 2**5 - 2
        assert [len(c) for c in subset_order(4)] == sorted(len(c) for c in subset_order(4))

    @pytest.mark.parametrize("seed", range(10))
    def test_complement_antisymmetry(self, seed):
        g = gen_random_quasi(5, 10, seed=seed)
        for p in profiles(g).values():
            sel = p.selected()
            for s in sel:
                assert frozenset(g.terminals) - s not in sel

    @pytest.mark.parametrize("seed", range(5))
    def test_threshold_matches_flow(self, seed):
        g = gen_random_quasi(4, 8, seed=seed, fractional=True)
        for v in g.non_terminals():
            assert star_profile(g, v).bits == star_profile(g, v, method="flow").bits


class TestExactSparsifier:
    def test_identical_stars_merge(self):
        ts = ["t1", "t2", "t3"]
        edges = [(v, t, w) for v in ("x", "y") for t, w in zip(ts, (1, 2, 4))]
        g = Instance.build(["x", "y", *ts], edges, ts)
        h, m = exact_sparsifier(g)
        assert h.n == 4 and verify_quality(g, h).quality == 1

    def test_no_nonterminals(self):
        g = Instance.build(["a", "b"], [("a", "b", 2)], ["a", "b"])
        h, _ = exact_sparsifier(g)
        assert h.same_as(g)

    def test_size_formula(self):
        g = gen_random_quasi(4, 20, seed=5)
        h, _ = exact_sparsifier(g)
        assert h.n == count_distinct_profiles(g) + g.k

    @pytest.mark.parametrize("seed", range(15))
    def test_quality_one_against_brute_force(self, seed):
        g = gen_random_quasi(4, 10, seed=seed, max_weight=3)
        h, _ = exact_sparsifier(g)
        for b in enumerate_bipartitions(g.terminals):
            assert brute_force_cut(h, b.side_a) == brute_force_cut(g, b.side_a)

    def test_lowerbound_equal_weights_k4(self):
        g = gen_profile_lowerbound(4, 0, jitter=False)
        h, _ = exact_sparsifier(g)
        assert h.n == 10

    def test_lowerbound_equal_weights_k5_count(self):
        assert count_distinct_profiles(gen_profile_lowerbound(5, 0, jitter=False)) == comb(5, 2) + comb(5, 4)

    @pytest.mark.parametrize("k", [4, 5, 6])
    def test_two_leaf_centres_bounded_by_k_profiles(self, k):
        # A two-leaf star's profile only depends on its heavier leaf, so with
        # tie-free weights at most k distinct profiles occur among them.
        g = gen_profile_lowerbound(k, 1)
        ps = profiles(g)
        two = {ps[v].bits for v in g.non_terminals() if g.degree(v) == 2}
        assert len(two) <= k < comb(k, 2)


class TestClosedForm:
    @pytest.mark.parametrize("seed", range(8))
    def test_matches_flow_and_brute_force(self, seed):
        g = gen_random_quasi(4, 9, seed=seed, fractional=True)
        for b in enumerate_bipartitions(g.terminals):
            v = quasi_bipartite_cut_value(g, b.side_a)
            assert v == min_cut_value(g, b) == brute_force_cut(g, b.side_a)


class TestGenerator:
    def test_k4_counts(self):
        g = gen_profile_lowerbound(4, 7)
        assert g.n == 10 and g.m == 12 and g.k == 4

    def test_k5_centres(self):
        assert len(gen_profile_lowerbound(5, 1).non_terminals()) == comb(5, 2) + comb(5, 4)

    def test_deterministic(self):
        a, b = gen_profile_lowerbound(5, 3), gen_profile_lowerbound(5, 3)
        assert a.same_as(b)

    def test_weight_interval(self):
        k = 5
        g = gen_profile_lowerbound(k, 2)
        lo, hi = 1 - Fraction(1, 2**k), 1 + Fraction(1, 2**k)
        assert all(lo < e.w < hi and e.w.denominator <= 2 ** (3 * k) for e in g.edges)

    @pytest.mark.parametrize("k", [1, 21])
    def test_range(self, k):
        with pytest.raises(InstanceError):
            gen_profile_lowerbound(k)


class TestSimilarPairs:
    def test_worked_example(self):
        fam = [{"t1", "t2"}, {"t3", "t4"}, {"t1", "t3"}, {"t2", "t4"}]
        u1, u2 = find_similar_pair(fam)
        assert {frozenset(s) for s in u1} == {frozenset({"t1", "t2"}), frozenset({"t3", "t4"})}
        assert {frozenset(s) for s in u2} == {frozenset({"t1", "t3"}), frozenset({"t2", "t4"})}
        assert is_similar_pair(u1, u2)

    def test_none(self):
        assert find_similar_pair([{"t1"}]) is None

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            find_similar_pair([{"t1"}, {"t1"}])

    @pytest.mark.parametrize("seed", range(20))
    def test_no_profile_selects_u1_but_not_u2(self, seed):
        # shattering obstruction, checked against random stars
        fam = [{"t1", "t2"}, {"t3", "t4"}, {"t1", "t3"}, {"t2", "t4"}]
        u1, u2 = find_similar_pair(fam)
        g = gen_random_quasi(6, 30, seed=seed, terminal_edge_prob=0)
        for p in profiles(g).values():
            sel = p.selected()
            assert not (all(s in sel for s in u1) and not any(s in sel for s in u2))

    def test_found_pairs_are_similar(self):
        ts = [f"t{i}" for i in range(5)]
        fam = [set(c) for c in combinations(ts, 2)]
        u1, u2 = find_similar_pair(fam)
        assert is_similar_pair(u1, u2) and len(u1) == len(u2)
