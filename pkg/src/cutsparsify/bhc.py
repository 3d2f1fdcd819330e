"""Boolean hypercube contraction: hard instances, stretch, and the reduction
from contraction sparsifiers to hypercube mappings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping

from .graph import ContractionMap, Instance, InstanceError
from .mincut import Bipartition, canonical_side_map
from .verify import verify_contraction


class BhcError(ValueError):
    pass


def hamming(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b))


@dataclass(frozen=True)
class BhcInstance:
    d: int
    labels: Mapping[str, str]
    instance: Instance
    epsilon: Fraction | None = None

    def __post_init__(self):
        missing = [v for v in self.instance.vertices if v not in self.labels]
        if missing:
            raise BhcError(f"vertices without labels: {missing[:5]}")
        vals = [self.labels[v] for v in self.instance.vertices]
        if len(set(vals)) != len(vals):
            raise BhcError("labels must be injective")
        if any(len(x) != self.d or set(x) - {"0", "1"} for x in vals):
            raise BhcError(f"labels must be {self.d}-bit strings")

    def coordinate_cut(self, i: int) -> list[str]:
        """Terminals whose i-th bit is 0."""
        return [t for t in self.instance.terminals if self.labels[t][i] == "0"]

    def coordinate_bipartitions(self) -> list[Bipartition]:
        out = []
        for i in range(self.d):
            zero = self.coordinate_cut(i)
            if 0 < len(zero) < self.instance.k:
                out.append(Bipartition.of(self.instance.terminals, zero))
        return out

    @property
    def middle(self) -> list[str]:
        return self.instance.non_terminals()


def gen_hypercube_instance(d: int, epsilon) -> BhcInstance:
    """Hypercube instance with terminals at weights eps*d, (1-eps)*d, 0 and d.

    Every weight-d/2 string is joined by unit edges to the terminals at Hamming
    distance (1/2 - eps) d, and by an edge of capacity C(d/2, eps*d) to each of
    the all-zeros and all-ones strings. Vertex ids are the bit strings.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise BhcError("epsilon must lie in (0, 1/2)")
    if d % 2 or (eps * d).denominator != 1:
        raise BhcError("eps*d and d/2 must be integers")
    r = int(eps * d)
    if r == 0:
        raise BhcError("eps*d must be positive")

    def strings(weight: int) -> list[str]:
        out = []
        for ones in combinations(range(d), weight):
            s = ["0"] * d
            for i in ones:
                s[i] = "1"
            out.append("".join(s))
        return sorted(out)

    zero, one = "0" * d, "1" * d
    t0, t1, mid = strings(r), strings(d - r), strings(d // 2)
    terminals = [zero] + t0 + t1 + [one]
    target = d // 2 - r
    cap = comb(d // 2, r)
    edges = []
    for v in mid:
        for t in t0 + t1:
            if hamming(v, t) == target:
                edges.append((v, t, 1))
        edges.append((v, zero, cap))
        edges.append((v, one, cap))
    inst = Instance.build(terminals + mid, edges, terminals)
    return BhcInstance(d, {v: v for v in inst.vertices}, inst, eps)


def stretch(b: BhcInstance, mapping: Mapping[str, str]) -> Fraction:
    """Capacity-weighted l1 length of the mapped edges over the original length."""
    for v in b.instance.vertices:
        if v not in mapping:
            raise BhcError(f"mapping misses vertex {v!r}")
    num = Fraction(0)
    den = Fraction(0)
    for e in b.instance.edges:
        num += e.w * hamming(mapping[e.u], mapping[e.v])
        den += e.w * hamming(b.labels[e.u], b.labels[e.v])
    if den == 0:
        raise BhcError("zero total edge length")
    return num / den


def sparsifier_to_mapping(b: BhcInstance, h: Instance, m: ContractionMap) -> dict[str, str]:
    """Read a hypercube mapping off a contraction sparsifier.

    Bit i of a supernode is 0 iff it lies on the source-minimal side of the
    min-cut in ``h`` separating the terminals with bit i = 0 from the rest;
    every vertex inherits its supernode's string.
    """
    check = verify_contraction(b.instance, h, m)
    if not check:
        raise BhcError("h is not the contraction of the instance under m")
    bits = {u: [] for u in h.vertices}
    for i in range(b.d):
        zero = b.coordinate_cut(i)
        if len(zero) == h.k:
            side = {u: "A" for u in h.vertices}
        elif not zero:
            side = {u: "B" for u in h.vertices}
        else:
            side = canonical_side_map(h, zero)
        for u in h.vertices:
            bits[u].append("0" if side[u] == "A" else "1")
    g = {u: "".join(x) for u, x in bits.items()}
    rep = m.class_of()
    f = {v: g[rep[v]] for v in b.instance.vertices}
    for t in b.instance.terminals:
        if f[t] != b.labels[t]:
            raise BhcError(f"terminal {t} not fixed by the mapping")
    return f


def image_size(mapping: Mapping[str, str]) -> int:
    return len(set(mapping.values()))


def random_contraction(b: BhcInstance, seed: int = 0, p_terminal: float = 0.3, bins: int | None = None) -> ContractionMap:
    """A random valid contraction: middle vertices are merged into a terminal
    (probability ``p_terminal``) or into one of ``bins`` non-terminal groups."""
    rng = random.Random(seed)
    ts = list(b.instance.terminals)
    mid = b.middle
    bins = bins if bins is not None else rng.randint(1, max(1, len(mid) // 2))
    groups: dict[str, list[str]] = {t: [t] for t in ts}
    extra: dict[int, list[str]] = {}
    for v in mid:
        if rng.random() < p_terminal:
            groups[rng.choice(ts)].append(v)
        else:
            extra.setdefault(rng.randrange(bins), []).append(v)
    return ContractionMap.from_groups(list(groups.values()) + list(extra.values()), ts)


__all__ = [
    "BhcInstance",
    "gen_hypercube_instance",
    "stretch",
    "sparsifier_to_mapping",
    "image_size",
    "random_contraction",
    "hamming",
    "InstanceError",
]
