"""Distance-emulator plug-ins for the dual of a one-face instance.

An emulator receives a :class:`DualInstance` and returns another one with
the same dual terminals, in the same boundary order, whose terminal-to-terminal
distances are within a factor ``1 + epsilon`` of the input's.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations
from typing import Protocol

from ..graph import Instance, as_weight
from .dual import DualInstance, dual_distances
from .embedding import EmbeddedInstance


class Emulator(Protocol):
    name: str

    def __call__(self, dual: DualInstance, epsilon: Fraction) -> DualInstance: ...


class IdentityEmulator:
    """Returns the dual unchanged (exact, epsilon = 0)."""

    name = "identity"

    def __call__(self, dual: DualInstance, epsilon=0) -> DualInstance:
        return dual


def _shortest_path(g: Instance, source: str, target: str, allowed: set[int] | None):
    dist = {source: Fraction(0)}
    pred: dict[str, int] = {}
    heap = [(Fraction(0), source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        if u == target:
            break
        for i in g.incident(u):
            if allowed is not None and i not in allowed:
                continue
            e = g.edges[i]
            w = e.other(u)
            nd = du + e.w
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                pred[w] = i
                heapq.heappush(heap, (nd, w))
    if target not in dist:
        return None, []
    path = []
    u = target
    while u != source:
        i = pred[u]
        path.append(i)
        u = g.edges[i].other(u)
    return dist[target], path[::-1]


class PortalGreedyEmulator:
    """Heuristic emulator: keeps a greedy (1+eps)-spanner of the dual terminals.

    Terminal pairs are processed by increasing dual distance; a shortest path
    is added only when the edges kept so far do not already connect the pair
    within ``1 + epsilon``. Unused edges are dropped and non-terminals of
    degree two are suppressed by merging their two edges. Since the result is
    a subgraph of the dual (up to series merges), distances never shrink.
    """

    name = "portal-greedy"

    def __call__(self, dual: DualInstance, epsilon=Fraction(1, 2)) -> DualInstance:
        eps = as_weight(epsilon)
        g = dual.dual
        ts = list(dual.dual_terminals)
        dist = {s: dual_distances(g, s) for s in ts}
        pairs = sorted(
            ((dist[a].get(b), i, j) for (i, a), (j, b) in combinations(enumerate(ts), 2) if b in dist[a]),
        )
        kept: set[int] = set()
        for d, i, j in pairs:
            a, b = ts[i], ts[j]
            have, _ = _shortest_path(g, a, b, kept)
            if have is not None and have <= (1 + eps) * d:
                continue
            _, path = _shortest_path(g, a, b, None)
            kept.update(path)
        return _contract_series(dual, kept)


def _contract_series(dual: DualInstance, kept: set[int]) -> DualInstance:
    g = dual.dual
    emb = dual.embedded
    terms = set(g.terminals)
    edges = {i: (g.edges[i].u, g.edges[i].v, g.edges[i].w, dual.primal_edge_map[i]) for i in sorted(kept)}
    rot = {v: [i for i in emb.rotation[v] if i in edges] for v in g.vertices}
    rot = {v: r for v, r in rot.items() if r or v in terms}
    nxt = g.m
    changed = True
    while changed:
        changed = False
        for y in sorted(rot):
            r = rot[y]
            if y in terms or len(r) != 2:
                continue
            a, b = r
            p = edges[a][0] if edges[a][1] == y else edges[a][1]
            q = edges[b][0] if edges[b][1] == y else edges[b][1]
            if p == y or q == y or p == q:
                continue
            c = nxt
            nxt += 1
            edges[c] = (p, q, edges[a][2] + edges[b][2], edges[a][3] + edges[b][3])
            rot[p] = [c if i == a else i for i in rot[p]]
            rot[q] = [c if i == b else i for i in rot[q]]
            del edges[a], edges[b], rot[y]
            changed = True
    order = sorted(edges)
    new = {old: i for i, old in enumerate(order)}
    inst = Instance.build(sorted(rot), [edges[i][:3] for i in order], g.terminals)
    rotation = {v: tuple(new[i] for i in r) for v, r in rot.items()}
    s0 = dual.dual_terminals[0]
    first = rotation[s0][0]
    outer = 2 * first + (0 if inst.edges[first].u == s0 else 1)
    out = EmbeddedInstance(inst, rotation, outer)
    out.validate()
    pmap = {new[i]: edges[i][3] for i in order}
    return DualInstance(out, dual.dual_terminals, dual.terminal_ends, pmap, dual.primal_terminals)


EMULATORS = {"identity": IdentityEmulator, "portal-greedy": PortalGreedyEmulator}


def get_emulator(name_or_obj) -> Emulator:
    if callable(name_or_obj) and not isinstance(name_or_obj, str):
        return name_or_obj
    try:
        return EMULATORS[name_or_obj]()
    except KeyError:
        raise ValueError(f"unknown emulator {name_or_obj!r}; choose from {sorted(EMULATORS)}") from None
