"""Independent oracles shared by the test modules.

None of these call into the flow code: cut values come from exhaustive
enumeration of non-terminal side assignments or from networkx.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import networkx as nx
import pytest

from cutsparsify.graph import Instance


def brute_force_cut(g: Instance, s) -> Fraction:
    """min over all 2^(n-k) placements of non-terminals of the induced cut weight."""
    s = set(s)
    free = g.non_terminals()
    assert len(free) <= 14, "oracle limited to 14 free vertices"
    best = None
    for bits in product((0, 1), repeat=len(free)):
        side = {t: t in s for t in g.terminals}
        side.update({v: bool(b) for v, b in zip(free, bits)})
        val = sum((e.w for e in g.edges if side[e.u] != side[e.v]), Fraction(0))
        if best is None or val < best:
            best = val
    return best


def brute_force_quality(g: Instance, h: Instance):
    from cutsparsify.mincut import enumerate_bipartitions

    q = Fraction(1)
    for b in enumerate_bipartitions(g.terminals):
        a, c = brute_force_cut(g, b.side_a), brute_force_cut(h, b.side_a)
        if a == c:
            continue
        if a == 0 or c == 0:
            return math.inf
        q = max(q, a / c, c / a)
    return q


def nx_cut(g: Instance, s) -> Fraction:
    """Terminal min-cut through networkx on integer-scaled capacities."""
    s = set(s)
    den = math.lcm(1, *(e.w.denominator for e in g.edges))
    G = nx.DiGraph()
    G.add_nodes_from(g.vertices)
    for e in g.edges:
        c = int(e.w * den)
        for a, b in ((e.u, e.v), (e.v, e.u)):
            if G.has_edge(a, b):
                G[a][b]["capacity"] += c
            else:
                G.add_edge(a, b, capacity=c)
    src, snk = "__src__", "__snk__"
    for t in g.terminals:
        if t in s:
            G.add_edge(src, t)  # no capacity attribute = infinite
        else:
            G.add_edge(t, snk)
    value, _ = nx.minimum_cut(G, src, snk)
    return Fraction(value, den)


def to_networkx(g: Instance) -> nx.MultiGraph:
    G = nx.MultiGraph()
    for v in g.vertices:
        G.add_node(v, terminal=g.is_terminal(v))
    for e in g.edges:
        G.add_edge(e.u, e.v, w=e.w)
    return G


def isomorphic(g: Instance, h: Instance) -> bool:
    """Weighted isomorphism fixing every terminal by name."""
    G, H = to_networkx(g), to_networkx(h)
    for X, inst in ((G, g), (H, h)):
        for v in X.nodes:
            X.nodes[v]["label"] = v if inst.is_terminal(v) else "*"
    if tuple(g.terminals) != tuple(h.terminals):
        return False

    def node_match(a, b):
        return a["label"] == b["label"]

    def edge_match(a, b):
        return sorted(x["w"] for x in a.values()) == sorted(x["w"] for x in b.values())

    return nx.is_isomorphic(G, H, node_match=node_match, edge_match=edge_match)


@pytest.fixture
def star123() -> Instance:
    return Instance.build(["v", "t1", "t2", "t3"], [("v", "t1", 1), ("v", "t2", 2), ("v", "t3", 3)], ["t1", "t2", "t3"])


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                rows.append((rep.nodeid.rsplit("::", 1)[-1], outcome.upper(), rep.duration))
    if rows:
        terminalreporter.section("end-to-end checks")
        for name, outcome, secs in sorted(rows):
            terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}  ({secs:.1f}s)")
