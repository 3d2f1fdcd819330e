"""Random instance generators used by tests, benchmarks and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import Instance, InstanceError


def gen_random_quasi(
    k: int,
    n: int,
    seed: int = 0,
    max_degree: int | None = None,
    max_weight: int = 10,
    terminal_edge_prob: float = 0.2,
    fractional: bool = False,
) -> Instance:
    """Random quasi-bipartite instance with ``k`` terminals and ``n`` non-terminals.

    Each non-terminal ``v<i>`` picks between 1 and ``max_degree`` distinct
    terminals with integer weights in ``[1, max_weight]`` (halved at random
    when ``fractional``). Each terminal pair is joined with probability
    ``terminal_edge_prob``.
    """
    if k < 2 or n < 0:
        raise InstanceError("need k >= 2 and n >= 0")
    rng = random.Random(seed)
    max_degree = k if max_degree is None else min(max_degree, k)
    terminals = [f"t{i}" for i in range(1, k + 1)]
    width = len(str(max(n - 1, 0)))
    centers = [f"v{i:0{width}d}" for i in range(n)]
    edges = []
    for a in range(k):
        for b in range(a + 1, k):
            if rng.random() < terminal_edge_prob:
                edges.append((terminals[a], terminals[b], rng.randint(1, max_weight)))
    for v in centers:
        for t in rng.sample(terminals, rng.randint(1, max_degree)):
            w = Fraction(rng.randint(1, max_weight))
            if fractional and rng.random() < 0.5:
                w /= 2
            edges.append((v, t, w))
    return Instance.build(terminals + centers, edges, terminals)


def gen_random_graph(k: int, n: int, p: float = 0.3, seed: int = 0, max_weight: int = 5) -> Instance:
    """Erdos-Renyi style instance on ``k + n`` vertices (not quasi-bipartite)."""
    rng = random.Random(seed)
    vs = [f"t{i}" for i in range(1, k + 1)] + [f"u{i}" for i in range(n)]
    edges = [
        (vs[i], vs[j], rng.randint(1, max_weight))
        for i in range(len(vs))
        for j in range(i + 1, len(vs))
        if rng.random() < p
    ]
    return Instance.build(vs, edges, vs[:k])
