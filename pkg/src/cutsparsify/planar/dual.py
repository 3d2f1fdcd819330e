"""Modified planar dual of a one-face instance, its reversal, and the
decomposition of terminal min-cuts into dual shortest paths."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..graph import Instance
from ..mincut import min_terminal_cut
from .embedding import EmbeddedInstance, EmbeddingError, NotOneFaceError


class DualError(EmbeddingError):
    pass


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DualInstance:
    """Dual with one terminal per outer-face segment between consecutive terminals.

    Dual edge ``i`` crosses the primal edges ``primal_edge_map[i]`` (a single
    edge for a freshly built dual; an emulator may merge several).
    ``terminal_ends[s]`` names the primal terminals at the start and end of
    segment ``s`` along the outer walk.
    """

    embedded: EmbeddedInstance
    dual_terminals: tuple[str, ...]
    terminal_ends: Mapping[str, tuple[str, str]]
    primal_edge_map: Mapping[int, tuple[int, ...]]
    primal_terminals: tuple[str, ...]

    @property
    def dual(self) -> Instance:
        return self.embedded.instance

    def segment_between(self, t: str, u: str) -> str:
        """Dual terminal for the segment from ``t`` to ``u``."""
        for s, (a, b) in self.terminal_ends.items():
            if a == t and b == u:
                return s
        raise KeyError((t, u))


def build_dual(e: EmbeddedInstance, strict: bool = True) -> DualInstance:
    """Dual of ``e`` after splitting its outer face at the terminals.

    Each primal edge becomes the dual edge joining the faces (or outer
    segments) on its two sides. With ``strict`` any edge whose two sides lie
    in the same face is rejected; otherwise only those whose two sides lie in
    the same face *and* segment are.
    """
    g = e.instance
    if g.k < 2:
        raise DualError("need at least two terminals")
    if e.outer_dart is None:
        raise DualError("embedding has no edges")
    corners = {t: e.corner(t) for t in g.terminals}
    order = e.terminal_face_order()
    walk = e.outer_walk(corners[order[0]])
    if len(walk) != len(set(walk)):
        raise DualError("outer walk repeats a dart")
    k = len(order)
    seg_names = [f"s{j + 1}" for j in range(k)]
    segment_of: dict[int, int] = {}
    j = -1
    at = {corners[t]: i for i, t in enumerate(order)}
    for d in walk:
        if d in at:
            j = at[d]
        segment_of[d] = j
    outer = e.outer_face
    inner = [i for i in range(len(e.faces)) if i != outer]
    face_name = {f: f"f{n}" for n, f in enumerate(inner)}

    def node(d: int) -> str:
        return seg_names[segment_of[d]] if d in segment_of else face_name[e.face_of[d]]

    edges = []
    for i, ed in enumerate(g.edges):
        a, b = node(2 * i), node(2 * i + 1)
        if a == b or (strict and e.face_of[2 * i] == e.face_of[2 * i + 1]):
            raise DualError(
                f"edge {ed.u}-{ed.v} has the same face on both sides (bridge); degenerate one-face instance"
            )
        edges.append((a, b, ed.w))
    vertices = seg_names + [face_name[f] for f in inner]
    inst = Instance.build(vertices, edges, seg_names)

    rotation: dict[str, list[int]] = {v: [] for v in vertices}
    for f in inner:
        rotation[face_name[f]] = [d >> 1 for d in e.faces[f]]
    for d in walk:
        rotation[seg_names[segment_of[d]]].append(d >> 1)
    rot = {v: tuple(r) for v, r in rotation.items()}
    first = rot[seg_names[0]][0]
    emb = EmbeddedInstance(inst, rot, 2 * first + (0 if inst.edges[first].u == seg_names[0] else 1))
    emb.validate()
    ends = {seg_names[i]: (order[i], order[(i + 1) % k]) for i in range(k)}
    d = DualInstance(emb, tuple(seg_names), ends, {i: (i,) for i in range(g.m)}, tuple(g.terminals))
    if not is_aligned(d):
        raise DualError("dual terminals are not in boundary order")
    return d


def is_aligned(d: DualInstance) -> bool:
    """Dual terminals appear around the dual's outer face in reverse segment order.

    Walking the dual's outer face goes around each primal terminal in turn,
    which visits the segments backwards.
    """
    ts = list(d.dual_terminals)
    try:
        seen = d.embedded.terminal_face_order()
    except EmbeddingError:
        return False
    return seen == ts[:1] + ts[:0:-1] and tuple(d.dual.terminals) == tuple(ts)


def reverse_dual(d: DualInstance, names: Mapping[str, str] | None = None) -> EmbeddedInstance:
    """Primal instance whose modified dual is ``d``.

    Terminals are restored from ``terminal_ends``: the outer segment that starts
    at the corner of dual terminal ``s`` surrounds the primal terminal at the
    start of ``s``. Inner faces become non-terminals; they are named by
    ``names`` (dual face name -> primal name) when given, else freshly.
    """
    back = build_dual(d.embedded, strict=False)
    pt = set(d.primal_terminals)
    ren: dict[str, str] = {}
    for seg, (sa, _) in back.terminal_ends.items():
        if sa not in d.terminal_ends:
            raise DualError(f"unknown dual terminal {sa!r}")
        ren[seg] = d.terminal_ends[sa][0]
    if sorted(ren.values()) != sorted(pt):
        raise DualError("dual terminals do not restore the primal terminals one-to-one")
    taken = set(pt)
    counter = 0
    faces = [v for v in back.dual.vertices if v not in back.terminal_ends]
    for f in sorted(faces, key=_face_key):
        name = names.get(f) if names else None
        if name is None or name in taken:
            while f"n{counter}" in taken:
                counter += 1
            name = f"n{counter}"
        taken.add(name)
        ren[f] = name
    out = back.embedded.rename(ren)
    return out.with_terminals(d.primal_terminals)


def _face_key(name: str):
    return (len(name), name)


def dual_face_names(d: DualInstance, primal: Instance) -> dict[str, str]:
    """Names for the inner faces of ``d``'s dual, recovered from ``primal``.

    A dual face surrounds the primal vertex shared by all edges on it; faces
    without a unique such non-terminal get no entry.
    """
    back = build_dual(d.embedded, strict=False)
    out = {}
    for f in back.dual.vertices:
        if f in back.terminal_ends:
            continue
        common = None
        for i in back.embedded.rotation[f]:
            ends: set[str] = set()
            for p in d.primal_edge_map[i]:
                ends |= {primal.edges[p].u, primal.edges[p].v}
            common = ends if common is None else common & ends
        cand = sorted((common or set()) - primal.terminal_set)
        if len(cand) == 1:
            out[f] = cand[0]
    return out


def dual_distances(g: Instance, source: str) -> dict[str, Fraction]:
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for i in g.incident(u):
            e = g.edges[i]
            w = e.other(u)
            nd = du + e.w
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


@dataclass(frozen=True)
class DualPath:
    ends: tuple[str, str]
    edges: tuple[int, ...]
    length: Fraction
    terminals: tuple[str, ...]


@dataclass(frozen=True)
class PathDecomposition:
    paths: tuple[DualPath, ...]
    covered_edges: frozenset[int]
    cut_value: Fraction
    source_terminals: tuple[str, ...]

    @property
    def total_length(self) -> Fraction:
        return sum((p.length for p in self.paths), Fraction(0))


def _components(g: Instance, removed: set[int]) -> dict[str, int]:
    comp: dict[str, int] = {}
    c = 0
    for s in g.vertices:
        if s in comp:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            u = stack.pop()
            for i in g.incident(u):
                if i in removed:
                    continue
                w = g.edges[i].other(u)
                if w not in comp:
                    comp[w] = c
                    stack.append(w)
        c += 1
    return comp


def _order_path(dual: Instance, edge_ids: Sequence[int], start: str, end: str) -> tuple[int, ...]:
    adj: dict[str, list[int]] = {}
    for i in edge_ids:
        e = dual.edges[i]
        adj.setdefault(e.u, []).append(i)
        adj.setdefault(e.v, []).append(i)
    out = []
    used: set[int] = set()
    u = start
    while u != end or len(out) < len(edge_ids):
        nxt = [i for i in adj.get(u, []) if i not in used]
        if len(nxt) != 1:
            raise DecompositionError(f"cut edges do not form a simple dual path from {start} to {end}")
        i = nxt[0]
        used.add(i)
        out.append(i)
        u = dual.edges[i].other(u)
        if u == end and len(out) == len(edge_ids):
            break
    if u != end:
        raise DecompositionError("dual path does not end at the expected terminal")
    return tuple(out)


def _intervals(order: Sequence[str], comp: Mapping[str, int]) -> list[list[str]]:
    """Maximal cyclic runs of consecutive terminals lying in one component."""
    k = len(order)
    if len({comp[t] for t in order}) == 1:
        return [list(order)]
    start = next(i for i in range(k) if comp[order[i]] != comp[order[i - 1]])
    runs: list[list[str]] = []
    for j in range(k):
        t = order[(start + j) % k]
        if runs and comp[runs[-1][-1]] == comp[t]:
            runs[-1].append(t)
        else:
            runs.append([t])
    return runs


def decompose_mincut_dual(
    e: EmbeddedInstance, s: Iterable[str], dual: DualInstance | None = None
) -> PathDecomposition:
    """Split the canonical min-cut for ``(s, T \\ s)`` into edge-disjoint dual
    shortest paths between dual terminals.

    Repeatedly finds a run of consecutive terminals forming the terminal set
    of a component of ``G - cut``, peels that component's boundary off the cut
    as one dual path, and moves the run to the other side.
    """
    g = e.instance
    d = dual or build_dual(e)
    s = set(s)
    cut = min_terminal_cut(g, s)
    remaining = set(cut.cut_edges)
    side = {t: t in s for t in g.terminals}
    order = e.terminal_face_order()
    dist_cache: dict[str, dict[str, Fraction]] = {}
    paths = []
    while remaining:
        comp = _components(g, remaining)
        runs = _intervals(order, comp)
        chosen = None
        for run in runs:
            c = comp[run[0]]
            if {t for t in order if comp[t] == c} == set(run):
                chosen = run
                break
        if chosen is None:
            raise DecompositionError("no terminal interval is cut off by the remaining cut")
        c = comp[chosen[0]]
        boundary = [i for i in remaining if (comp[g.edges[i].u] == c) != (comp[g.edges[i].v] == c)]
        inside = {v for v, x in comp.items() if x == c}
        delta = [i for i, ed in enumerate(g.edges) if (ed.u in inside) != (ed.v in inside)]
        if sorted(delta) != sorted(boundary):
            raise DecompositionError("component boundary is not contained in the cut")
        if not boundary:
            raise DecompositionError("empty component boundary")
        first, last = chosen[0], chosen[-1]
        k = len(order)
        prev_t = order[(order.index(first) - 1) % k]
        next_t = order[(order.index(last) + 1) % k]
        a = d.segment_between(prev_t, first)
        b = d.segment_between(last, next_t)
        inv = {p: i for i, ps in d.primal_edge_map.items() for p in ps}
        dual_ids = [inv[i] for i in boundary]
        seq = _order_path(d.dual, dual_ids, a, b)
        length = sum((d.dual.edges[i].w for i in seq), Fraction(0))
        if a not in dist_cache:
            dist_cache[a] = dual_distances(d.dual, a)
        if dist_cache[a].get(b) != length:
            raise DecompositionError(
                f"extracted path {a}->{b} has length {length}, shortest is {dist_cache[a].get(b)}"
            )
        paths.append(DualPath((a, b), seq, length, tuple(chosen)))
        remaining -= set(boundary)
        for t in chosen:
            side[t] = not side[t]
    covered = frozenset(i for p in paths for i in p.edges)
    total = sum((p.length for p in paths), Fraction(0))
    if total != cut.value:
        raise DecompositionError(f"path lengths sum to {total}, cut value is {cut.value}")
    return PathDecomposition(tuple(paths), covered, cut.value, tuple(sorted(s)))


def one_two_node_check(g: Instance, cut_edges: Iterable[int], s: Iterable[str]) -> bool:
    """Every cut edge joins a component reaching only side-``s`` terminals to
    one reaching only the other side's terminals."""
    removed = set(cut_edges)
    s = set(s)
    comp = _components(g, removed)
    kind: dict[int, set[bool]] = {}
    for t in g.terminals:
        kind.setdefault(comp[t], set()).add(t in s)
    for i in removed:
        e = g.edges[i]
        ku, kv = kind.get(comp[e.u], set()), kind.get(comp[e.v], set())
        if len(ku) != 1 or len(kv) != 1 or ku == kv:
            return False
    return True


__all__ = [
    "DualInstance",
    "DualPath",
    "PathDecomposition",
    "build_dual",
    "reverse_dual",
    "is_aligned",
    "dual_face_names",
    "dual_distances",
    "decompose_mincut_dual",
    "one_two_node_check",
    "DualError",
    "DecompositionError",
    "NotOneFaceError",
]
