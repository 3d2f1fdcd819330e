"""Divide-and-glue and the dual -> emulator -> reverse sparsifier for one-face instances."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..graph import Instance, as_weight
from ..verify import TerminalMismatchError
from .dual import DualError, build_dual, dual_face_names, is_aligned, reverse_dual
from .embedding import EmbeddedInstance, split_at_separator_terminals
from .emulators import get_emulator


class MisalignedEmulatorError(DualError):
    pass


def _instance(p) -> Instance:
    return p.instance if isinstance(p, EmbeddedInstance) else p


def glue_sparsifiers(pieces: Sequence[tuple], terminals: Sequence[str] | None = None) -> Instance:
    """Union of piece sparsifiers, identified on the pieces' shared terminals.

    ``pieces`` holds ``(piece, sparsifier)`` pairs where ``piece`` is an
    :class:`EmbeddedInstance` or :class:`Instance`. Every vertex shared by two
    pieces must be a terminal of both, and each sparsifier must carry its
    piece's terminal list. Non-terminals that are not vertices of their own
    piece are prefixed with the piece index to keep them apart.
    """
    if not pieces:
        raise ValueError("nothing to glue")
    seen: dict[str, int] = {}
    for i, (p, h) in enumerate(pieces):
        g = _instance(p)
        if tuple(g.terminals) != tuple(h.terminals):
            raise TerminalMismatchError(f"piece {i}: sparsifier terminals differ from the piece's")
        for v in g.vertices:
            if v in seen and not (g.is_terminal(v) and _instance(pieces[seen[v]][0]).is_terminal(v)):
                raise TerminalMismatchError(f"vertex {v!r} is shared by pieces {seen[v]} and {i} but is not a terminal of both")
            seen.setdefault(v, i)
    originals = set(seen)
    vertices: set[str] = set()
    edges = []
    for i, (p, h) in enumerate(pieces):
        own = set(_instance(p).vertices)
        ren = {}
        for v in h.non_terminals():
            name = v if v in own else f"p{i}:{v}"
            if name in vertices or (name not in own and name in originals):
                raise ValueError(f"name clash while gluing at {name!r}")
            ren[v] = name
        vertices.update(ren.get(v, v) for v in h.vertices)
        edges.extend((ren.get(e.u, e.u), ren.get(e.v, e.v), e.w) for e in h.edges)
    if terminals is None:
        terminals = []
        for p, _ in pieces:
            terminals.extend(t for t in _instance(p).terminals if t not in terminals)
    return Instance.build(sorted(vertices), edges, terminals)


@dataclass
class PieceResult:
    piece: EmbeddedInstance
    sparsifier: Instance
    dual_size: int = 0


@dataclass
class OneFaceResult:
    sparsifier: Instance
    pieces: list[PieceResult] = field(default_factory=list)
    emulator: str = "identity"
    epsilon: Fraction = Fraction(0)


def sparsify_piece(piece: EmbeddedInstance, emulator="identity", epsilon=0) -> PieceResult:
    g = piece.instance
    if g.k < 2:
        return PieceResult(piece, Instance.build(g.terminals, [], g.terminals))
    if not g.non_terminals():
        return PieceResult(piece, g)
    dual = build_dual(piece)
    em = get_emulator(emulator)(dual, as_weight(epsilon))
    if tuple(em.dual_terminals) != tuple(dual.dual_terminals) or not is_aligned(em):
        raise MisalignedEmulatorError("emulator output misaligned (terminal order changed)")
    names = dual_face_names(em, g)
    back = reverse_dual(em, names)
    return PieceResult(piece, back.instance, em.dual.n)


def _run_piece(args):
    return sparsify_piece(*args)


def one_face_sparsify(e: EmbeddedInstance, emulator="identity", epsilon=0, n_jobs: int = 1) -> OneFaceResult:
    """Split at separator terminals, sparsify each piece through its dual, glue.

    ``emulator`` is ``"identity"``, ``"portal-greedy"`` or any callable
    ``(DualInstance, epsilon) -> DualInstance``.
    """
    pieces = split_at_separator_terminals(e)
    jobs = [(p, emulator, epsilon) for p in pieces]
    if n_jobs > 1 and len(pieces) > 1 and isinstance(emulator, str):
        with ProcessPoolExecutor(n_jobs) as ex:
            results = list(ex.map(_run_piece, jobs))
    else:
        results = [_run_piece(j) for j in jobs]
    glued = glue_sparsifiers([(r.piece, r.sparsifier) for r in results], e.instance.terminals)
    name = emulator if isinstance(emulator, str) else getattr(emulator, "name", type(emulator).__name__)
    return OneFaceResult(glued, results, name, as_weight(epsilon))
