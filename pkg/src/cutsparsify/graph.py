"""Weighted terminal multigraphs with exact rational weights, and contraction."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class InstanceError(ValueError):
    """Raised for malformed graphs or unknown vertex ids."""


class InvalidContractionError(ValueError):
    """Raised when a partition is not a valid contraction map for a graph."""


def as_weight(value) -> Fraction:
    """Parse an int, Fraction, or decimal / ``"p/q"`` string into an exact Fraction.

    Floats are converted through their shortest repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InstanceError(f"invalid weight {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"invalid weight {value!r}") from exc
    raise InstanceError(f"invalid weight {value!r}")


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    w: Fraction

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    def key(self) -> tuple[str, str, Fraction]:
        a, b = (self.u, self.v) if self.u <= self.v else (self.v, self.u)
        return a, b, self.w


@dataclass(frozen=True, eq=False)
class Instance:
    """An undirected weighted multigraph with an ordered terminal list.

    Use :meth:`build` to construct one; it validates and normalises the input.
    Parallel edges are kept as separate records.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    terminals: tuple[str, ...]
    _adj: Mapping[str, tuple[int, ...]] = field(repr=False, compare=False)

    @classmethod
    def build(
        cls,
        vertices: Iterable,
        edges: Iterable[Sequence],
        terminals: Iterable,
    ) -> "Instance":
        vs = {str(v) for v in vertices}
        ts = [str(t) for t in terminals]
        if len(set(ts)) != len(ts):
            raise InstanceError("duplicate terminal ids")
        missing = [t for t in ts if t not in vs]
        if missing:
            raise InstanceError(f"terminals not among vertices: {missing}")
        out = []
        for rec in edges:
            if isinstance(rec, Edge):
                u, v, w = rec.u, rec.v, rec.w
            else:
                u, v, w = rec
            u, v, w = str(u), str(v), as_weight(w)
            if u not in vs or v not in vs:
                raise InstanceError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise InstanceError(f"self-loop at {u}")
            if w < 0:
                raise InstanceError(f"negative weight on ({u}, {v})")
            if w == 0:
                continue
            out.append(Edge(u, v, w))
        adj: dict[str, list[int]] = {v: [] for v in vs}
        for i, e in enumerate(out):
            adj[e.u].append(i)
            adj[e.v].append(i)
        return cls(
            vertices=tuple(sorted(vs)),
            edges=tuple(out),
            terminals=tuple(ts),
            _adj={v: tuple(ix) for v, ix in adj.items()},
        )

    # --- basic queries -------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.terminals)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __contains__(self, v: str) -> bool:
        return v in self._adj

    def incident(self, v: str) -> tuple[int, ...]:
        """Indices of the edges incident to ``v``."""
        try:
            return self._adj[v]
        except KeyError:
            raise InstanceError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def neighbors(self, v: str) -> list[str]:
        return sorted({self.edges[i].other(v) for i in self.incident(v)})

    def is_terminal(self, v: str) -> bool:
        return v in self.terminal_set

    @property
    def terminal_set(self) -> frozenset[str]:
        return frozenset(self.terminals)

    def non_terminals(self) -> list[str]:
        ts = self.terminal_set
        return [v for v in self.vertices if v not in ts]

    def weights_to(self, v: str) -> dict[str, Fraction]:
        """Total edge weight from ``v`` to each neighbour (parallel edges summed)."""
        out: dict[str, Fraction] = defaultdict(Fraction)
        for i in self.incident(v):
            e = self.edges[i]
            out[e.other(v)] += e.w
        return dict(out)

    def edge_multiset(self) -> dict[tuple[str, str, Fraction], int]:
        counts: dict[tuple[str, str, Fraction], int] = defaultdict(int)
        for e in self.edges:
            counts[e.key()] += 1
        return dict(counts)

    def same_as(self, other: "Instance") -> bool:
        """Equality of vertex sets, terminal lists and edge multisets."""
        return (
            self.vertices == other.vertices
            and self.terminals == other.terminals
            and self.edge_multiset() == other.edge_multiset()
        )

    def with_terminals(self, terminals: Iterable) -> "Instance":
        return Instance.build(self.vertices, self.edges, terminals)

    def rename(self, mapping: Mapping[str, str]) -> "Instance":
        """Rename vertices; ids missing from ``mapping`` are kept."""
        f = lambda x: mapping.get(x, x)  # noqa: E731
        names = [f(v) for v in self.vertices]
        if len(set(names)) != len(names):
            raise InstanceError("renaming is not injective")
        return Instance.build(
            names,
            [(f(e.u), f(e.v), e.w) for e in self.edges],
            [f(t) for t in self.terminals],
        )

    def subgraph(self, edge_indices: Iterable[int], vertices: Iterable[str] = ()) -> "Instance":
        """Subgraph on the given edges (plus extra vertices); terminals restricted."""
        idx = sorted(set(edge_indices))
        vs = set(vertices)
        for i in idx:
            vs.add(self.edges[i].u)
            vs.add(self.edges[i].v)
        return Instance.build(
            vs,
            [self.edges[i] for i in idx],
            [t for t in self.terminals if t in vs],
        )

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, k={self.k})"


def total_weight(g: Instance) -> Fraction:
    return sum((e.w for e in g.edges), Fraction(0))


def is_quasi_bipartite(g: Instance) -> bool:
    """True iff every edge has at least one terminal endpoint."""
    ts = g.terminal_set
    return all(e.u in ts or e.v in ts for e in g.edges)


def star_of(g: Instance, v: str) -> Instance:
    """The star of ``v``: ``v``, its neighbours and exactly its incident edges."""
    inc = g.incident(v)
    return g.subgraph(inc, vertices=[v])


@dataclass(frozen=True)
class ContractionMap:
    """A partition of the vertex set into classes, each named by a representative.

    The default representative of a class is its terminal if it has one,
    otherwise its smallest member id.
    """

    parts: tuple[frozenset[str], ...]
    representative: tuple[str, ...]

    @classmethod
    def from_groups(
        cls,
        groups: Iterable[Iterable[str]],
        terminals: Iterable[str] = (),
        names: Sequence[str] | None = None,
    ) -> "ContractionMap":
        ts = set(terminals)
        parts = [frozenset(map(str, grp)) for grp in groups]
        if any(not p for p in parts):
            raise InvalidContractionError("empty class in partition")
        if names is None:
            reps = []
            for p in parts:
                tp = sorted(p & ts)
                reps.append(tp[0] if tp else min(p))
        else:
            reps = [str(x) for x in names]
            if len(reps) != len(parts):
                raise InvalidContractionError("one name per class required")
        order = sorted(range(len(parts)), key=lambda i: reps[i])
        return cls(tuple(parts[i] for i in order), tuple(reps[i] for i in order))

    @classmethod
    def identity(cls, g: Instance) -> "ContractionMap":
        return cls.from_groups([[v] for v in g.vertices], g.terminals)

    def class_of(self) -> dict[str, str]:
        """Vertex id -> representative id."""
        return {v: rep for p, rep in zip(self.parts, self.representative) for v in p}

    def validate(self, g: Instance) -> None:
        seen: set[str] = set()
        for p in self.parts:
            if seen & p:
                raise InvalidContractionError("classes overlap")
            seen |= p
        if seen != set(g.vertices):
            extra = sorted(seen - set(g.vertices))
            lost = sorted(set(g.vertices) - seen)
            raise InvalidContractionError(
                f"classes must cover the vertex set exactly (unknown={extra}, uncovered={lost})"
            )
        if len(set(self.representative)) != len(self.representative):
            raise InvalidContractionError("class names are not distinct")
        ts = g.terminal_set
        for p, rep in zip(self.parts, self.representative):
            tp = sorted(p & ts)
            if len(tp) > 1:
                raise InvalidContractionError(f"terminals {tp} share a class")
            if tp and rep != tp[0]:
                raise InvalidContractionError(f"class of terminal {tp[0]} must be named by it")

    def __len__(self) -> int:
        return len(self.parts)


def contract(g: Instance, m: ContractionMap) -> Instance:
    """Merge each class of ``m`` into its representative.

    Parallel edges are kept and intra-class edges (self-loops) are discarded.
    """
    m.validate(g)
    rep = m.class_of()
    edges = [(rep[e.u], rep[e.v], e.w) for e in g.edges if rep[e.u] != rep[e.v]]
    return Instance.build(m.representative, edges, [rep[t] for t in g.terminals])
