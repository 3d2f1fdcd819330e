"""Combinatorial planar embeddings given by rotation systems over edge indices.

A dart is ``2*i`` (edge ``i`` traversed u->v) or ``2*i+1`` (v->u). Faces are
traced with ``next(u->v) = v->w`` where ``(v, w)`` follows ``(u, v)`` in the
rotation at ``v``. In a *normalised* embedding every terminal's rotation list
starts right after its corner on the outer face, so the out-dart along
``rotation[t][0]`` lies on the outer face.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from ..graph import Instance, InstanceError


class EmbeddingError(ValueError):
    pass


class NotOneFaceError(EmbeddingError):
    pass


class SeparatorTerminalError(EmbeddingError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddedInstance:
    instance: Instance
    rotation: Mapping[str, tuple[int, ...]]
    outer_dart: int | None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # --- darts --------------------------------------------------------------

    def tail(self, d: int) -> str:
        e = self.instance.edges[d >> 1]
        return e.u if d & 1 == 0 else e.v

    def head(self, d: int) -> str:
        e = self.instance.edges[d >> 1]
        return e.v if d & 1 == 0 else e.u

    def out_dart(self, v: str, edge: int) -> int:
        return 2 * edge + (0 if self.instance.edges[edge].u == v else 1)

    @cached_property
    def _pos(self) -> dict[tuple[str, int], int]:
        return {(v, e): i for v, rot in self.rotation.items() for i, e in enumerate(rot)}

    def next_dart(self, d: int) -> int:
        v = self.head(d)
        rot = self.rotation[v]
        e = rot[(self._pos[(v, d >> 1)] + 1) % len(rot)]
        return self.out_dart(v, e)

    # --- faces --------------------------------------------------------------

    @cached_property
    def faces(self) -> list[list[int]]:
        """Facial walks as dart lists, traced from the smallest unused dart."""
        n = 2 * self.instance.m
        seen = [False] * n
        out = []
        for d0 in range(n):
            if seen[d0]:
                continue
            walk = []
            d = d0
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.next_dart(d)
            if d != d0:
                raise EmbeddingError("face tracing did not close")
            out.append(walk)
        return out

    @cached_property
    def face_of(self) -> list[int]:
        out = [0] * (2 * self.instance.m)
        for i, walk in enumerate(self.faces):
            for d in walk:
                out[d] = i
        return out

    @property
    def outer_face(self) -> int | None:
        return None if self.outer_dart is None else self.face_of[self.outer_dart]

    def outer_walk(self, start: int | None = None) -> list[int]:
        """Darts of the outer face, starting at ``start`` (default: ``outer_dart``)."""
        if self.outer_dart is None:
            return []
        walk = self.faces[self.outer_face]
        start = self.outer_dart if start is None else start
        i = walk.index(start)
        return walk[i:] + walk[:i]

    # --- validation ---------------------------------------------------------

    def validate(self) -> None:
        g = self.instance
        if set(self.rotation) != set(g.vertices):
            raise EmbeddingError("rotation must list every vertex")
        for v in g.vertices:
            if sorted(self.rotation[v]) != sorted(g.incident(v)):
                raise EmbeddingError(f"rotation at {v!r} does not match its incident edges")
        self.faces  # noqa: B018 - raises if tracing fails
        comps = _components(g)
        faces_per = {}
        comp_of = {v: i for i, c in enumerate(comps) for v in c}
        for walk in self.faces:
            c = comp_of[self.tail(walk[0])]
            faces_per[c] = faces_per.get(c, 0) + 1
        for i, c in enumerate(comps):
            ne = sum(1 for e in g.edges if e.u in c)
            nf = faces_per.get(i, 1)
            if len(c) - ne + nf != 2:
                raise EmbeddingError(f"Euler check failed on component {sorted(c)[:3]}...: V-E+F={len(c) - ne + nf}")

    # --- terminals on the outer face ----------------------------------------

    def corner(self, t: str) -> int:
        """Out-dart of terminal ``t`` on the outer face (normalised embeddings)."""
        rot = self.rotation[t]
        if not rot:
            raise NotOneFaceError(f"terminal {t!r} is isolated")
        d = self.out_dart(t, rot[0])
        if self.face_of[d] != self.outer_face:
            raise NotOneFaceError(f"terminal {t!r} is not normalised onto the outer face")
        return d

    def terminal_face_order(self) -> list[str]:
        """Terminals in the order their corners appear along the outer walk."""
        g = self.instance
        if g.k == 0:
            return []
        corners = {self.corner(t): t for t in g.terminals}
        walk = self.outer_walk(self.corner(g.terminals[0]))
        return [corners[d] for d in walk if d in corners]

    def normalized(self) -> "EmbeddedInstance":
        """Rotate every terminal's rotation list to start at its outer corner.

        Raises if a terminal is not on the outer face or occurs on it more than
        once (i.e. is a separator).
        """
        g = self.instance
        if self.outer_dart is None:
            if g.m:
                raise EmbeddingError("outer dart missing")
            return self
        outer = set(self.outer_walk())
        rot = dict(self.rotation)
        for t in g.terminals:
            outs = [i for i, e in enumerate(rot[t]) if self.out_dart(t, e) in outer]
            if not outs:
                raise NotOneFaceError(f"terminal {t!r} is not on the outer face")
            if len(outs) > 1:
                raise SeparatorTerminalError(f"terminal {t!r} occurs {len(outs)} times on the outer face")
            i = outs[0]
            rot[t] = rot[t][i:] + rot[t][:i]
        return EmbeddedInstance(g, rot, self.outer_dart)

    # --- conversion ---------------------------------------------------------

    def neighbor_rotation(self) -> dict[str, list[str]]:
        return {v: [self.instance.edges[e].other(v) for e in rot] for v, rot in self.rotation.items()}

    def outer_pair(self) -> list[str] | None:
        if self.outer_dart is None:
            return None
        return [self.tail(self.outer_dart), self.head(self.outer_dart)]

    def rename(self, mapping: Mapping[str, str]) -> "EmbeddedInstance":
        inst = self.instance.rename(mapping)
        rot = {mapping.get(v, v): r for v, r in self.rotation.items()}
        return EmbeddedInstance(inst, rot, self.outer_dart)

    def with_terminals(self, terminals: Sequence[str]) -> "EmbeddedInstance":
        return EmbeddedInstance(self.instance.with_terminals(terminals), self.rotation, self.outer_dart)

    def __repr__(self) -> str:
        return f"EmbeddedInstance({self.instance!r})"


def _components(g: Instance) -> list[set[str]]:
    seen: set[str] = set()
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for i in g.incident(u):
                w = g.edges[i].other(u)
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(comp)
    return out


def from_neighbor_rotation(
    g: Instance, rotation: Mapping[str, Sequence[str]], outer_face: Sequence[str] | None
) -> EmbeddedInstance:
    """Build an embedding from cyclic neighbour lists (simple graphs only).

    ``outer_face`` is a directed edge ``[u, v]`` whose dart lies on the outer face.
    """
    lookup: dict[tuple[str, str], int] = {}
    for i, e in enumerate(g.edges):
        key = (min(e.u, e.v), max(e.u, e.v))
        if key in lookup:
            raise EmbeddingError("neighbour rotations need a simple graph (parallel edge found)")
        lookup[key] = i
    rot = {}
    for v in g.vertices:
        nbrs = [str(x) for x in rotation.get(v, [])]
        try:
            rot[v] = tuple(lookup[(min(v, x), max(v, x))] for x in nbrs)
        except KeyError as exc:
            raise EmbeddingError(f"rotation at {v!r} names a non-neighbour") from exc
    outer = None
    if outer_face is not None and g.m:
        u, v = map(str, outer_face)
        i = lookup.get((min(u, v), max(u, v)))
        if i is None:
            raise EmbeddingError(f"outer face dart ({u}, {v}) is not an edge")
        outer = 2 * i + (0 if g.edges[i].u == u else 1)
    elif g.m:
        raise EmbeddingError("outer face dart missing")
    emb = EmbeddedInstance(g, rot, outer)
    emb.validate()
    return emb


def _signed_area(emb: EmbeddedInstance, walk: Sequence[int], coords) -> float:
    a = 0.0
    for d in walk:
        x1, y1 = coords[emb.tail(d)]
        x2, y2 = coords[emb.head(d)]
        a += x1 * y2 - x2 * y1
    return a / 2


def from_coordinates(g: Instance, coords: Mapping[str, tuple[float, float]]) -> EmbeddedInstance:
    """Embedding of a straight-line planar drawing; inner faces trace clockwise,
    so the outer face is the one with the largest signed area."""
    rot = {}
    for v in g.vertices:
        x0, y0 = coords[v]

        def angle(i, v=v, x0=x0, y0=y0):
            x1, y1 = coords[g.edges[i].other(v)]
            return math.atan2(y1 - y0, x1 - x0)

        rot[v] = tuple(sorted(g.incident(v), key=angle))
    emb = EmbeddedInstance(g, rot, None)
    if not g.m:
        return emb
    areas = [_signed_area(emb, w, coords) for w in emb.faces]
    outer = max(range(len(areas)), key=lambda i: areas[i])
    emb = EmbeddedInstance(g, rot, emb.faces[outer][0])
    emb.validate()
    return emb


def _restrict(emb: EmbeddedInstance, edge_ids: Sequence[int], vertices: set[str]) -> EmbeddedInstance:
    """Sub-embedding on the given edges; its outer face contains the first
    dart of ``emb``'s outer walk that survives."""
    g = emb.instance
    idx = sorted(edge_ids)
    new = {old: i for i, old in enumerate(idx)}
    inst = Instance.build(vertices, [g.edges[i] for i in idx], [t for t in g.terminals if t in vertices])
    rot = {v: tuple(new[e] for e in emb.rotation[v] if e in new) for v in inst.vertices}
    outer = None
    for d in emb.outer_walk():
        if d >> 1 in new:
            outer = 2 * new[d >> 1] + (d & 1)
            break
    if outer is None and idx:
        raise EmbeddingError("piece does not touch the outer face")
    return EmbeddedInstance(inst, rot, outer)


def split_at_separator_terminals(e: EmbeddedInstance) -> list[EmbeddedInstance]:
    """Split into connected pieces and then at terminals whose removal
    disconnects a piece, until no piece has a separator terminal.

    Edge sets of the pieces partition the edges; a split terminal is kept in
    every piece. Pieces without terminals are dropped. Returned pieces are
    normalised.
    """
    g0 = e.instance
    work = []
    for comp in _components(g0):
        edges = [i for i, ed in enumerate(g0.edges) if ed.u in comp]
        if not edges and not (comp & g0.terminal_set):
            continue
        work.append(_restrict(e, edges, comp))
    done = []
    while work:
        p = work.pop(0)
        g = p.instance
        split = None
        for t in g.terminals:
            comps = _components_without(g, t)
            if len(comps) > 1:
                split = (t, comps)
                break
        if split is None:
            done.append(p if not g.m else p.normalized())
            continue
        t, comps = split
        for comp in comps:
            vs = comp | {t}
            edges = [i for i, ed in enumerate(g.edges) if ed.u in vs and ed.v in vs]
            work.append(_restrict(p, edges, vs))
    return done


def _components_without(g: Instance, cut: str) -> list[set[str]]:
    seen = {cut}
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for i in g.incident(u):
                w = g.edges[i].other(u)
                if w not in comp and w != cut:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(comp)
    return out


def _boundary_cycle(rows: int, cols: int) -> list[tuple[int, int]]:
    top = [(0, j) for j in range(cols)]
    right = [(i, cols - 1) for i in range(1, rows)]
    bottom = [(rows - 1, j) for j in range(cols - 2, -1, -1)]
    left = [(i, 0) for i in range(rows - 2, 0, -1)]
    return top + right + bottom + left


def grid_coordinates(rows: int, cols: int, prefix: str = "g", offset=(0, 0)) -> dict[str, tuple[float, float]]:
    return {f"{prefix}{i}_{j}": (j + offset[0], -i + offset[1]) for i in range(rows) for j in range(cols)}


def gen_grid_oneface(
    rows: int, cols: int, terminals: int, seed: int = 0, max_weight: int = 9
) -> EmbeddedInstance:
    """Grid graph with random integer weights and terminals on the boundary.

    Terminals are listed in boundary order.
    """
    if rows < 2 or cols < 2:
        raise InstanceError("grid needs at least 2 rows and 2 columns")
    boundary = _boundary_cycle(rows, cols)
    if not 2 <= terminals <= len(boundary):
        raise InstanceError(f"terminals must lie in [2, {len(boundary)}]")
    rng = random.Random(seed)
    name = lambda i, j: f"g{i}_{j}"  # noqa: E731
    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((name(i, j), name(i, j + 1), rng.randint(1, max_weight)))
            if i + 1 < rows:
                edges.append((name(i, j), name(i + 1, j), rng.randint(1, max_weight)))
    picks = sorted(rng.sample(range(len(boundary)), terminals))
    ts = [name(*boundary[p]) for p in picks]
    coords = grid_coordinates(rows, cols)
    g = Instance.build(coords, edges, ts)
    return from_coordinates(g, coords).normalized()


def random_weights(emb: EmbeddedInstance, seed: int, max_weight: int = 9) -> EmbeddedInstance:
    """Same embedding with fresh random integer weights."""
    rng = random.Random(seed)
    g = emb.instance
    inst = Instance.build(g.vertices, [(e.u, e.v, Fraction(rng.randint(1, max_weight))) for e in g.edges], g.terminals)
    return EmbeddedInstance(inst, emb.rotation, emb.outer_dart)
