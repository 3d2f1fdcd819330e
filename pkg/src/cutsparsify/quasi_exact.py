"""Profiles of quasi-bipartite graphs and the quality-1 contraction sparsifier."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .graph import ContractionMap, Instance, InstanceError, contract, is_quasi_bipartite
from .mincut import canonical_side_map

PROFILE_CAP = 16


class NotQuasiBipartiteError(ValueError):
    pass


@lru_cache(maxsize=64)
def subset_order(k: int) -> tuple[tuple[int, ...], ...]:
    """Proper non-empty subsets of ``range(k)``, by size then lexicographically."""
    return tuple(c for r in range(1, k) for c in combinations(range(k), r))


@dataclass(frozen=True)
class Profile:
    """Bit vector over the proper terminal subsets in :func:`subset_order`."""

    terminals: tuple[str, ...]
    bits: tuple[int, ...]

    def subsets(self) -> list[tuple[str, ...]]:
        return [tuple(self.terminals[i] for i in c) for c in subset_order(len(self.terminals))]

    def bit(self, s) -> int:
        idx = tuple(sorted(self.terminals.index(t) for t in s))
        return self.bits[_subset_index(len(self.terminals))[idx]]

    def selected(self) -> frozenset[frozenset[str]]:
        """The profile viewed as a set of terminal subsets (those with bit 1)."""
        return frozenset(frozenset(s) for s, b in zip(self.subsets(), self.bits) if b)


@lru_cache(maxsize=64)
def _subset_index(k: int) -> dict[tuple[int, ...], int]:
    return {c: i for i, c in enumerate(subset_order(k))}


def _check(g: Instance, cap: int = PROFILE_CAP) -> None:
    if not is_quasi_bipartite(g):
        raise NotQuasiBipartiteError("input graph has an edge between two non-terminals")
    if g.k > cap:
        raise InstanceError(f"k={g.k} exceeds the profile cap {cap}")


def star_weights(g: Instance, v: str) -> list[Fraction]:
    """Weight from ``v`` to each terminal, in terminal order."""
    w = g.weights_to(v)
    return [w.get(t, Fraction(0)) for t in g.terminals]


def _threshold_bits(weights: Sequence[Fraction]) -> tuple[int, ...]:
    total = sum(weights, Fraction(0))
    return tuple(int(2 * sum((weights[i] for i in c), Fraction(0)) > total) for c in subset_order(len(weights)))


def star_profile(g: Instance, v: str, method: str = "threshold", cap: int = PROFILE_CAP) -> Profile:
    """Profile of non-terminal ``v``.

    ``method="threshold"`` uses bit(S) = [w_v(S) > w_v(T \\ S)], valid for
    quasi-bipartite graphs. ``method="flow"`` reads sides off the canonical
    min-cut of every subset and works on any graph (slow; experimental).
    """
    if v not in g:
        raise InstanceError(f"unknown vertex {v!r}")
    if g.is_terminal(v):
        raise InstanceError(f"{v!r} is a terminal")
    if method == "threshold":
        _check(g, cap)
        return Profile(g.terminals, _threshold_bits(star_weights(g, v)))
    if method == "flow":
        if g.k > cap:
            raise InstanceError(f"k={g.k} exceeds the profile cap {cap}")
        bits = []
        for c in subset_order(g.k):
            side = canonical_side_map(g, [g.terminals[i] for i in c])
            bits.append(int(side[v] == "A"))
        return Profile(g.terminals, tuple(bits))
    raise ValueError(f"unknown method {method!r}")


def profiles(g: Instance, cap: int = PROFILE_CAP) -> dict[str, Profile]:
    _check(g, cap)
    return {v: Profile(g.terminals, _threshold_bits(star_weights(g, v))) for v in g.non_terminals()}


def profile_groups(g: Instance, cap: int = PROFILE_CAP) -> list[list[str]]:
    """Non-terminals grouped by identical profile, in sorted order."""
    groups: dict[tuple[int, ...], list[str]] = defaultdict(list)
    for v, p in profiles(g, cap).items():
        groups[p.bits].append(v)
    return sorted(groups.values())


def exact_sparsifier(g: Instance, cap: int = PROFILE_CAP) -> tuple[Instance, ContractionMap]:
    """Contract non-terminals with equal profiles; terminals stay singletons."""
    groups = profile_groups(g, cap) + [[t] for t in g.terminals]
    m = ContractionMap.from_groups(groups, g.terminals)
    return contract(g, m), m


def count_distinct_profiles(g: Instance, cap: int = PROFILE_CAP) -> int:
    return len(profile_groups(g, cap))


def quasi_bipartite_cut_value(g: Instance, s) -> Fraction:
    """Closed-form terminal min-cut of a quasi-bipartite graph.

    Each non-terminal star independently picks its cheaper side; terminal-terminal
    edges crossing the bipartition are always cut.
    """
    _check(g, cap=10**9)
    s = set(s)
    ts = g.terminal_set
    value = Fraction(0)
    for e in g.edges:
        if e.u in ts and e.v in ts and (e.u in s) != (e.v in s):
            value += e.w
    for v in g.non_terminals():
        ws = Fraction(0)
        wt = Fraction(0)
        for t, w in g.weights_to(v).items():
            wt += w
            if t in s:
                ws += w
        value += min(ws, wt - ws)
    return value


def gen_profile_lowerbound(k: int, seed: int = 0, jitter: bool = True) -> Instance:
    """Terminals t1..tk and one centre per even-size proper subset S, joined to S.

    Weights are uniform on the open interval (1 - 2^-k, 1 + 2^-k) with
    denominator 2^(3k). With ``jitter=False`` every weight is 1; then the
    exact ties at |S|/2 keep all centre profiles distinct, which random
    weights cannot do (a two-leaf star's profile only sees its heavier leaf).
    """
    if not 2 <= k <= 20:
        raise InstanceError("k must lie in [2, 20]")
    rng = random.Random(seed)
    den = 1 << (3 * k)
    lo = den - (1 << (2 * k))
    hi = den + (1 << (2 * k))
    terminals = [f"t{i}" for i in range(1, k + 1)]
    vertices = list(terminals)
    edges = []
    for size in range(2, k, 2):
        for c in combinations(range(1, k + 1), size):
            v = "v_" + "_".join(map(str, c))
            vertices.append(v)
            for i in c:
                w = Fraction(rng.randint(lo + 1, hi - 1), den) if jitter else Fraction(1)
                edges.append((v, f"t{i}", w))
    return Instance.build(vertices, edges, terminals)


def find_similar_pair(family: Sequence) -> tuple[list, list] | None:
    """Smallest disjoint, equal-size sub-families with equal per-terminal counts.

    Searches by increasing size; at the first size where two sub-families have
    identical count vectors, they are necessarily disjoint. Entries are returned
    as frozensets, in the order of ``family``.
    """
    fam = [frozenset(s) for s in family]
    if len(set(fam)) != len(fam):
        raise ValueError("family contains duplicate subsets")
    if len(fam) > 24:
        raise ValueError("family too large for brute force (max 24)")
    universe = sorted(set().union(*fam)) if fam else []
    vecs = [tuple(int(t in s) for t in universe) for s in fam]
    n = len(fam)
    for m in range(1, n // 2 + 1):
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        for combo in combinations(range(n), m):
            key = tuple(map(sum, zip(*(vecs[i] for i in combo))))
            if key in seen:
                first = seen[key]
                assert not set(first) & set(combo)
                return [fam[i] for i in first], [fam[i] for i in combo]
            seen[key] = combo
    return None


def is_similar_pair(u1, u2) -> bool:
    u1 = [frozenset(s) for s in u1]
    u2 = [frozenset(s) for s in u2]
    if set(u1) & set(u2) or len(u1) != len(u2) or not u1:
        return False
    terms = set().union(*u1, *u2)
    return all(sum(t in s for s in u1) == sum(t in s for s in u2) for t in terms)
