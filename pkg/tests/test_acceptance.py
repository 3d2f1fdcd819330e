"""End-to-end checks at their stated tolerances and time budgets.

Each test prints one PASS/FAIL line; the terminal summary repeats them.
"""

import math
import random
import time
from fractions import Fraction

import networkx as nx
import numpy as np

from cutsparsify.bhc import gen_hypercube_instance, hamming, random_contraction, sparsifier_to_mapping, stretch
from cutsparsify.generators import gen_random_quasi
from cutsparsify.graph import Instance, contract
from cutsparsify.mincut import enumerate_bipartitions
from cutsparsify.planar import (
    build_dual,
    covers,
    decompose_mincut_dual,
    epsilon_cover,
    from_coordinates,
    gen_grid_oneface,
    one_face_sparsify,
    split_at_separator_terminals,
)
from cutsparsify.quasi_approx import (
    SamplingParams,
    approx_sparsifier,
    approx_sparsifier_verified,
    dominating_cut_violations,
    flip_cost_estimate,
    sketch_model,
    sparsify_star,
)
from cutsparsify.quasi_exact import exact_sparsifier, gen_profile_lowerbound, profiles
from cutsparsify.verify import verify_quality

from conftest import nx_cut, to_networkx


class Check:
    """Times a block and prints a one-line verdict."""

    def __init__(self, number: int, title: str, budget_s: float):
        self.number, self.title, self.budget = number, title, budget_s
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.start
        ok = exc_type is None and self.elapsed <= self.budget
        verdict = "PASS" if ok else "FAIL"
        print(f"\n[{self.number:2d}] {verdict} {self.title} ({self.elapsed:.1f}s / {self.budget:.0f}s) {self.detail}")
        if exc_type is None:
            assert self.elapsed <= self.budget, f"took {self.elapsed:.1f}s, budget {self.budget}s"
        return False


def test_01_exact_sparsifier_quality():
    with Check(1, "exact profile sparsifier has quality 1", 30) as c:
        worst = Fraction(1)
        for seed in range(50):
            g = gen_random_quasi(5, 30, seed=seed)
            h, _ = exact_sparsifier(g)
            worst = max(worst, verify_quality(g, h).quality)
        c.detail = f"worst quality {worst} over 50 instances"
        assert worst == 1


def test_02_lowerbound_profiles_distinct():
    with Check(2, "lower-bound centres have pairwise distinct profiles", 10) as c:
        failures = []
        for k in (4, 5, 6):
            for seed in range(10):
                g = gen_profile_lowerbound(k, seed)
                centres = g.non_terminals()
                ps = profiles(g)
                distinct = len({ps[v].bits for v in centres})
                h, _ = exact_sparsifier(g)
                merged = len(centres) - (h.n - g.k)
                if distinct != len(centres) or merged:
                    failures.append((k, seed, len(centres), distinct, merged))
        c.detail = f"{len(failures)}/30 instances with repeated profiles"
        if failures:
            k, seed, n, distinct, merged = failures[0]
            c.detail += f"; first: k={k} seed={seed} {n} centres, {distinct} profiles, {merged} merged"
        assert not failures


def _crafted_stars():
    rng = random.Random(3)
    out = []
    for i in range(20):
        n = rng.randint(1, 60)
        if i % 4 == 0:
            ws = [1] * n
        elif i % 4 == 1:
            ws = [rng.randint(1, 100) for _ in range(n)]
        elif i % 4 == 2:
            ws = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
        else:
            ws = [1000] + [1] * (n - 1)
        ts = [f"t{j}" for j in range(n)]
        out.append(Instance.build(["v", *ts], [("v", t, w) for t, w in zip(ts, ws)], ts))
    return out


def test_03_star_sketch_mass_and_unbiasedness():
    with Check(3, "star sketches keep mass, size <= c, and are unbiased", 60) as c:
        for idx, g in enumerate(_crafted_stars()):
            for eps in (Fraction(1, 2), Fraction(2), Fraction(5)):
                p = SamplingParams(eps, g.k, seed=idx)
                sk = sparsify_star(g, p)
                assert sk.n_edges <= p.c
                assert sum(sk.weights().values(), Fraction(0)) == sk.total_weight == sum(e.w for e in g.edges)

        rng = random.Random(11)
        ts = [f"t{j}" for j in range(40)]
        g = Instance.build(["v", *ts], [("v", t, rng.randint(1, 20)) for t in ts], ts)
        p = SamplingParams(Fraction(2), g.k)
        subsets = [rng.sample(ts, rng.randint(1, 39)) for _ in range(10)]
        trials = 10_000
        draws = np.zeros((len(subsets), trials))
        for s in range(trials):
            w = sparsify_star(g, p, seed=s).weights()
            for i, sub in enumerate(subsets):
                draws[i, s] = float(sum((w.get(t, 0) for t in sub), Fraction(0)))
        worst = 0.0
        for i, sub in enumerate(subsets):
            w_s = float(sum(e.w for e in g.edges if e.v in sub or e.u in sub))
            se = draws[i].std(ddof=1) / math.sqrt(trials)
            z = abs(draws[i].mean() - w_s) / se if se else 0.0
            worst = max(worst, z)
        c.detail = f"max |z| = {worst:.2f} over 10 subsets"
        assert worst <= 4


def test_04_flip_cost_bound():
    with Check(4, "flip cost (w - 2 w_S) Pr[w'_S > w/2] <= eps w_S", 120) as c:
        worst = -math.inf
        for eps in (Fraction(1, 2), Fraction(1), Fraction(2)):
            p = SamplingParams(eps, 2)
            n = 2 * p.c + 1
            ts = [f"t{j}" for j in range(n)]
            g = Instance.build(["v", *ts], [("v", t, 1) for t in ts], ts)
            for ratio in (0.1, 0.3, 0.45):
                s = ts[: round(ratio * n)]
                model = sketch_model(g, p, s)
                est, se = flip_cost_estimate(model, 100_000, seed=7)
                bound = float(eps * model.w_s)
                worst = max(worst, est - bound - 4 * se)
                assert est <= bound + 4 * se, (eps, ratio, est, bound, se)
        c.detail = f"max (estimate - bound - 4se) = {worst:.4g}"


def test_05_end_to_end_quality():
    with Check(5, "sampling sparsifier quality <= 1 + 3 eps", 300) as c:
        lines = []
        for eps in (1, 2):
            target = 1 + 3 * eps
            first, retried = 0, 0
            for seed in range(20):
                g = gen_random_quasi(6, 60, seed=seed)
                p = SamplingParams(eps, g.k, seed)
                if verify_quality(g, approx_sparsifier(g, p).sparsifier).quality <= target:
                    first += 1
                out = approx_sparsifier_verified(g, p, retries=5)
                retried += out.success and out.quality <= target
            lines.append(f"eps={eps}: {first}/20 first try, {retried}/20 with retries")
            assert first >= 18 and retried == 20
        c.detail = "; ".join(lines)


def test_06_dominating_special_cut():
    with Check(6, "every cut is dominated by a special cut within 1/k", 60) as c:
        total = 0
        for seed in range(10):
            k = 3 + seed % 3
            g = gen_random_quasi(k, 20, seed=seed, terminal_edge_prob=0.3)
            bad = dominating_cut_violations(g)
            total += len(bad)
        c.detail = f"{total} violations"
        assert total == 0


def test_07_bhc_reduction():
    with Check(7, "hypercube stretch <= contraction quality", 120) as c:
        b4 = gen_hypercube_instance(4, Fraction(1, 4))
        assert sum(e.w * hamming(e.u, e.v) for e in b4.instance.edges) == 72
        worst = Fraction(0)
        for b, exhaustive in ((b4, True), (gen_hypercube_instance(8, Fraction(1, 4)), False)):
            for seed in range(10):
                m = random_contraction(b, seed=seed)
                h = contract(b.instance, m)
                f = sparsifier_to_mapping(b, h, m)
                assert all(f[t] == b.labels[t] for t in b.instance.terminals)
                if exhaustive:
                    q = verify_quality(b.instance, h).quality
                else:
                    # k = 58: quality measured on the coordinate cuts only, a lower bound on the true quality
                    q = verify_quality(b.instance, h, cap=0, sample=0, extra=b.coordinate_bipartitions()).quality
                st = stretch(b, f)
                assert st <= q
                worst = max(worst, st / q)
        c.detail = f"max stretch/quality = {float(worst):.3f}"


def _nx_dist(g: Instance, a: str, b: str):
    return nx.dijkstra_path_length(to_networkx(g), a, b, weight=lambda u, v, d: min(x["w"] for x in d.values()))


def test_08_mincut_dual_decomposition():
    with Check(8, "min-cuts decompose into disjoint dual shortest paths", 180) as c:
        rng = random.Random(8)
        n_cuts = 0
        for seed in range(20):
            rows = rng.randint(3, 10)
            cols = rng.randint(3, 100 // rows)
            k = rng.randint(2, min(8, 2 * (rows + cols) - 4))
            e = gen_grid_oneface(rows, cols, k, seed=seed)
            d = build_dual(e)
            g = e.instance
            bips = list(enumerate_bipartitions(g.terminals))
            assert len(bips) == 2 ** (k - 1) - 1
            for bp in bips:
                dec = decompose_mincut_dual(e, bp.side_a, dual=d)
                used = [i for p in dec.paths for i in p.edges]
                assert len(used) == len(set(used))
                for p in dec.paths:
                    assert p.length == _nx_dist(d.dual, *p.ends)
                assert dec.total_length == dec.cut_value == nx_cut(g, bp.side_a)
                n_cuts += 1
        c.detail = f"{n_cuts} cuts decomposed"


def test_09_epsilon_cover():
    with Check(9, "greedy covers are sound and small", 10) as c:
        rng = random.Random(9)
        biggest = {}
        for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
            for _ in range(50):
                n = rng.randint(1, 60)
                prefix = [0]
                for _ in range(n - 1):
                    prefix.append(prefix[-1] + rng.randint(1, 6))
                span = prefix[-1]
                contacts = rng.sample(range(n), rng.randint(1, min(5, n)))
                w = {j: rng.randint(span // 2 + 1, span + 5) for j in contacts}
                dists = [min(w[j] + abs(prefix[x] - prefix[j]) for j in contacts) for x in range(n)]
                cover = epsilon_cover(dists, prefix, epsilon=eps)
                assert covers(dists, prefix, cover, eps)
                assert len(cover) <= math.ceil(8 / eps) + 2
                biggest[eps] = max(biggest.get(eps, 0), len(cover))
        c.detail = "largest covers " + ", ".join(f"eps={e}: {s}" for e, s in biggest.items())


def _separator_embeddings():
    # bowtie, a chain of three triangles, and a path of terminals
    yield from_coordinates(
        Instance.build(
            ["t", "a", "b", "c", "d"],
            [("t", "a", 1), ("a", "b", 2), ("b", "t", 3), ("t", "c", 4), ("c", "d", 5), ("d", "t", 6)],
            ["a", "t", "c"],
        ),
        {"t": (0, 0), "a": (-1, 1), "b": (-1, -1), "c": (1, 1), "d": (1, -1)},
    )
    pos = {"p0": (0, 0), "x0": (1, 1), "p1": (2, 0), "x1": (3, 1), "p2": (4, 0), "x2": (5, 1), "p3": (6, 0)}
    edges = []
    for i in range(3):
        edges += [(f"p{i}", f"x{i}", i + 1), (f"x{i}", f"p{i + 1}", 2), (f"p{i}", f"p{i + 1}", 3)]
    yield from_coordinates(Instance.build(pos, edges, ["p0", "p1", "p2", "p3", "x1"]), pos)
    yield from_coordinates(
        Instance.build(["t1", "t2", "t3"], [("t1", "t2", 2), ("t2", "t3", 5)], ["t1", "t2", "t3"]),
        {"t1": (0, 0), "t2": (1, 0), "t3": (2, 0)},
    )


def test_10_identity_pipeline():
    with Check(10, "identity emulator pipeline has quality 1", 60) as c:
        cases = [gen_grid_oneface(r, col, k, seed=r * 31 + col) for r, col, k in [(2, 2, 2), (3, 5, 4), (6, 6, 8), (8, 4, 6)]]
        cases += list(_separator_embeddings())
        split = 0
        for e in cases:
            split += len(split_at_separator_terminals(e)) > 1
            res = one_face_sparsify(e, "identity")
            assert verify_quality(e.instance, res.sparsifier).quality == 1
        c.detail = f"{len(cases)} embeddings, {split} with separator terminals"
        assert split >= 3
