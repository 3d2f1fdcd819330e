import math
import random
from fractions import Fraction

import pytest

from cutsparsify.generators import gen_random_graph, gen_random_quasi
from cutsparsify.graph import ContractionMap, Instance, InvalidContractionError, contract
from cutsparsify.verify import (
    EnumerationCapError,
    TerminalMismatchError,
    observed_quality_chain,
    sample_bipartitions,
    verify_contraction,
    verify_quality,
)

from conftest import brute_force_quality


def scaled(g: Instance, f) -> Instance:
    return Instance.build(g.vertices, [(e.u, e.v, e.w * f) for e in g.edges], g.terminals)


@pytest.fixture
def g():
    return gen_random_quasi(4, 6, seed=11)


def test_identity(g):
    r = verify_quality(g, g)
    assert r.quality == 1 and not r.lower_violations and not r.dominance_violations
    assert r.exhaustive and len(r.per_cut) == 7


def test_halved(g):
    r = verify_quality(g, scaled(g, Fraction(1, 2)))
    assert r.quality == 2 and not r.lower_violations


def test_doubled(g):
    r = verify_quality(g, scaled(g, 2))
    assert len(r.lower_violations) == len(r.per_cut) == 7
    assert r.upper_quality == 2


def test_terminal_mismatch(g):
    with pytest.raises(TerminalMismatchError):
        verify_quality(g, g.with_terminals(list(reversed(g.terminals))))


def test_infinite_flag():
    g = Instance.build(["a", "b"], [("a", "b", 1)], ["a", "b"])
    h = Instance.build(["a", "b"], [], ["a", "b"])
    r = verify_quality(g, h)
    assert r.infinite and r.quality == math.inf


def test_zero_zero_is_one():
    g = Instance.build(["a", "b"], [], ["a", "b"])
    assert verify_quality(g, g).quality == 1


def test_cap_and_sampling():
    g = gen_random_quasi(7, 5, seed=1)
    with pytest.raises(EnumerationCapError):
        verify_quality(g, g, cap=5)
    r = verify_quality(g, g, cap=5, sample=10)
    assert not r.exhaustive and len(r.per_cut) == 10


def test_sampling_distinct_and_bounded():
    ts = [f"t{i}" for i in range(4)]
    assert len(set(sample_bipartitions(ts, 100, seed=3))) == 7


@pytest.mark.parametrize("seed", range(5))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    g = gen_random_graph(3, 7, p=0.4, seed=seed)
    groups = {t: [t] for t in g.terminals}
    for v in g.non_terminals():
        groups.setdefault(rng.choice(list(g.terminals) + ["p", "q"]), []).append(v)
    h = contract(g, ContractionMap.from_groups(groups.values(), g.terminals))
    r = verify_quality(g, h)
    assert r.quality == brute_force_quality(g, h)
    assert not r.dominance_violations  # contractions never lower a cut


def test_parallel_jobs_same_report(g):
    h = scaled(g, Fraction(2, 3))
    a = verify_quality(g, h, n_jobs=1)
    b = verify_quality(g, h, n_jobs=2)
    assert a.quality == b.quality and [r.bipartition for r in a.per_cut] == [r.bipartition for r in b.per_cut]


class TestContractionCheck:
    def test_true(self, g):
        m = ContractionMap.from_groups([[t] for t in g.terminals] + [g.non_terminals()], g.terminals)
        assert verify_contraction(g, contract(g, m), m)

    def test_missing_parallel_edge(self):
        g = Instance.build(["a", "b", "x"], [("a", "x", 1), ("b", "x", 1), ("a", "b", 1)], ["a", "b"])
        m = ContractionMap.from_groups([["a", "x"], ["b"]], g.terminals)
        h = contract(g, m)
        broken = Instance.build(h.vertices, h.edges[1:], h.terminals)
        check = verify_contraction(g, broken, m)
        assert not check and check.missing

    def test_merging_terminals_raises(self, g):
        m = ContractionMap.from_groups([g.terminals[:2], *[[t] for t in g.terminals[2:]], g.non_terminals()], g.terminals)
        with pytest.raises(InvalidContractionError):
            verify_contraction(g, g, m)


class TestChain:
    def test_values(self):
        assert observed_quality_chain(1, 1) == 1
        assert observed_quality_chain(Fraction(3, 2), Fraction(4, 3)) == 2

    def test_rejects_below_one(self):
        with pytest.raises(ValueError):
            observed_quality_chain(Fraction(1, 2), 1)

    @pytest.mark.parametrize("seed", range(6))
    def test_chained_verification(self, seed):
        rng = random.Random(seed)
        g = gen_random_quasi(4, 8, seed=seed)
        g1 = contract(g, _random_map(g, rng))
        g2 = contract(g1, _random_map(g1, rng))
        q = verify_quality(g, g2).quality
        assert q <= observed_quality_chain(verify_quality(g, g1).quality, verify_quality(g1, g2).quality)


def _random_map(g, rng):
    groups = {t: [t] for t in g.terminals}
    for v in g.non_terminals():
        groups.setdefault(rng.choice(list(g.terminals) + ["a", "b", "c"]), []).append(v)
    return ContractionMap.from_groups(groups.values(), g.terminals)
