"""Exact terminal min-cuts via max-flow with a canonical (source-minimal) side.

Capacities are scaled to integers by the lcm of the weight denominators, so the
flow runs on Python ints and the returned values are exact Fractions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .graph import Instance


class InvalidBipartitionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Bipartition:
    """Two complementary non-empty terminal sides.

    ``side_a`` is the lexicographically smaller side with respect to the
    terminal order, i.e. the side holding the first terminal.
    """

    side_a: tuple[str, ...]
    side_b: tuple[str, ...]

    @classmethod
    def of(cls, terminals: Sequence[str], s: Iterable[str]) -> "Bipartition":
        s = set(s)
        if not s <= set(terminals):
            raise InvalidBipartitionError(f"{sorted(s - set(terminals))} are not terminals")
        a = tuple(t for t in terminals if t in s)
        b = tuple(t for t in terminals if t not in s)
        if not a or not b:
            raise InvalidBipartitionError("both sides of a bipartition must be non-empty")
        if terminals[0] in s:
            return cls(a, b)
        return cls(b, a)

    def to_json(self) -> list[list[str]]:
        return [list(self.side_a), list(self.side_b)]


@dataclass(frozen=True)
class CutResult:
    bipartition: Bipartition
    source_terminals: frozenset[str]
    value: Fraction
    source_side: frozenset[str]
    cut_edges: tuple[int, ...]


def enumerate_bipartitions(terminals: Sequence[str]) -> Iterator[Bipartition]:
    """Yield the 2^(k-1) - 1 terminal bipartitions in a fixed order."""
    terminals = tuple(terminals)
    k = len(terminals)
    if k < 2:
        raise InvalidBipartitionError("need at least two terminals")
    rest = terminals[1:]
    for mask in range((1 << (k - 1)) - 1):
        a = (terminals[0],) + tuple(t for i, t in enumerate(rest) if mask >> i & 1)
        b = tuple(t for i, t in enumerate(rest) if not mask >> i & 1)
        yield Bipartition(a, b)


def _scale(g: Instance) -> tuple[int, list[int]]:
    den = 1
    for e in g.edges:
        den = math.lcm(den, e.w.denominator)
    return den, [int(e.w * den) for e in g.edges]


class _FlowNetwork:
    """Residual network for Dinic's algorithm (shortest augmenting paths by phase)."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c_uv: int, c_vu: int) -> int:
        a = len(self.to)
        self.to += [v, u]
        self.cap += [c_uv, c_vu]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def _levels(self, s: int) -> list[int]:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        to, cap, adj = self.to, self.cap, self.adj
        while q:
            u = q.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[u] + 1
                    q.append(to[a])
        return level

    def max_flow(self, s: int, t: int) -> int:
        to, cap, adj = self.to, self.cap, self.adj
        total = 0
        while True:
            level = self._levels(s)
            if level[t] < 0:
                return total
            it = [0] * self.n
            while True:
                path: list[int] = []
                u = s
                while u != t:
                    au = adj[u]
                    while it[u] < len(au):
                        a = au[it[u]]
                        if cap[a] > 0 and level[to[a]] == level[u] + 1:
                            break
                        it[u] += 1
                    else:
                        if u == s:
                            break
                        level[u] = -1
                        a = path.pop()
                        u = to[a ^ 1]
                        it[u] += 1
                        continue
                    path.append(a)
                    u = to[a]
                if u != t:
                    break
                f = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= f
                    cap[a ^ 1] += f
                total += f

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.to[a]
                if self.cap[a] > 0 and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return seen


def min_cut(g: Instance, sources: Iterable[str], sinks: Iterable[str]) -> tuple[Fraction, frozenset[str], tuple[int, ...]]:
    """Minimum cut separating ``sources`` from ``sinks``; other vertices are free.

    Returns ``(value, source_side, cut_edge_indices)`` where ``source_side`` is
    the residual-reachable set from the super-source, i.e. the unique
    inclusion-minimal min-cut side.
    """
    sources, sinks = set(sources), set(sinks)
    if sources & sinks:
        raise InvalidBipartitionError("source and sink sets overlap")
    den, caps = _scale(g)
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    s, t = n, n + 1
    net = _FlowNetwork(n + 2)
    for e, c in zip(g.edges, caps):
        net.add_edge(index[e.u], index[e.v], c, c)
    inf = 1 + sum(caps)
    for v in sorted(sources):
        net.add_edge(s, index[v], inf, 0)
    for v in sorted(sinks):
        net.add_edge(index[v], t, inf, 0)
    flow = net.max_flow(s, t)
    seen = net.reachable(s)
    side = frozenset(v for v in g.vertices if seen[index[v]])
    cut = tuple(i for i, e in enumerate(g.edges) if (e.u in side) != (e.v in side))
    value = Fraction(flow, den)
    assert value == sum((g.edges[i].w for i in cut), Fraction(0))
    return value, side, cut


def min_terminal_cut(g: Instance, s: Iterable[str]) -> CutResult:
    """Min-cut separating terminal subset ``s`` from the remaining terminals."""
    s = frozenset(s)
    bip = Bipartition.of(g.terminals, s)
    value, side, cut = min_cut(g, s, g.terminal_set - s)
    return CutResult(bip, s, value, side, cut)


def min_cut_value(g: Instance, bip: Bipartition) -> Fraction:
    return min_cut(g, bip.side_a, bip.side_b)[0]


def canonical_side_map(g: Instance, s: Iterable[str]) -> dict[str, str]:
    """``'A'`` for vertices on the source-minimal side containing ``s``, else ``'B'``."""
    side = min_terminal_cut(g, s).source_side
    return {v: "A" if v in side else "B" for v in g.vertices}
