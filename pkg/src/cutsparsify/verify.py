"""Brute-force certification of sparsifier quality over terminal bipartitions."""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import ContractionMap, Instance, InvalidContractionError, contract
from .mincut import Bipartition, enumerate_bipartitions, min_cut_value

DEFAULT_CAP = 16


class TerminalMismatchError(ValueError):
    pass


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class CutRow:
    bipartition: Bipartition
    value_g: Fraction
    value_h: Fraction

    @property
    def ratio(self) -> Fraction | float:
        """Two-sided distortion max(G/H, H/G); 1 when both are zero."""
        g, h = self.value_g, self.value_h
        if g == h:
            return Fraction(1)
        if g == 0 or h == 0:
            return math.inf
        return max(g / h, h / g)


@dataclass
class QualityReport:
    """Per-bipartition comparison of ``mincut_G`` and ``mincut_H``.

    ``quality`` is the least ``q >= 1`` with ``H/q <= G <= q*H`` on every
    evaluated bipartition (``math.inf`` if some side is zero and the other is not).
    ``lower_violations`` lists bipartitions with ``H > G`` and
    ``dominance_violations`` those with ``H < G``; a contraction of G can only
    produce the former.
    """

    quality: Fraction | float
    witness: Bipartition | None
    lower_violations: list[Bipartition]
    dominance_violations: list[Bipartition]
    per_cut: list[CutRow]
    exhaustive: bool = True
    infinite: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def upper_quality(self) -> Fraction | float:
        """max H/G: the factor by which cuts grew (the relevant side for contractions)."""
        best: Fraction | float = Fraction(1)
        for r in self.per_cut:
            if r.value_h > r.value_g:
                best = math.inf if r.value_g == 0 else max(best, r.value_h / r.value_g)
        return best

    def to_json(self, table: bool = False) -> dict:
        out = {
            "quality": _num(self.quality),
            "upper_quality": _num(self.upper_quality),
            "infinite": self.infinite,
            "exhaustive": self.exhaustive,
            "n_cuts": len(self.per_cut),
            "witness": self.witness.to_json() if self.witness else None,
            "lower_violations": [b.to_json() for b in self.lower_violations],
            "dominance_violations": [b.to_json() for b in self.dominance_violations],
        }
        if table:
            out["per_cut"] = [
                {"cut": r.bipartition.to_json(), "value_g": _num(r.value_g), "value_h": _num(r.value_h)}
                for r in self.per_cut
            ]
        return out


def _num(x) -> str:
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pair_values(args):
    g, h, bips = args
    return [(min_cut_value(g, b), min_cut_value(h, b)) for b in bips]


def sample_bipartitions(terminals: Sequence[str], n: int, seed: int = 0) -> list[Bipartition]:
    """``n`` distinct bipartitions drawn uniformly (fewer if not that many exist)."""
    rng = random.Random(seed)
    terminals = tuple(terminals)
    k = len(terminals)
    total = (1 << (k - 1)) - 1
    n = min(n, total)
    seen: set[int] = set()
    while len(seen) < n:
        seen.add(rng.randrange(total))
    rest = terminals[1:]
    out = []
    for mask in sorted(seen):
        a = (terminals[0],) + tuple(t for i, t in enumerate(rest) if mask >> i & 1)
        out.append(Bipartition.of(terminals, a))
    return out


def verify_quality(
    g: Instance,
    h: Instance,
    cap: int = DEFAULT_CAP,
    sample: int | None = None,
    extra: Iterable[Bipartition] = (),
    seed: int = 0,
    n_jobs: int | None = None,
) -> QualityReport:
    """Compare terminal min-cuts of ``g`` and ``h`` on every bipartition.

    With more than ``cap`` terminals a full enumeration is refused unless
    ``sample`` is given; then ``sample`` random bipartitions plus ``extra`` are
    evaluated and the report is marked non-exhaustive.
    """
    if tuple(g.terminals) != tuple(h.terminals):
        raise TerminalMismatchError("g and h must share the same terminal list")
    k = g.k
    if k <= cap:
        bips = list(enumerate_bipartitions(g.terminals))
        exhaustive = True
    elif sample is not None:
        chosen = set(sample_bipartitions(g.terminals, sample, seed))
        chosen.update(extra)
        bips = sorted(chosen, key=lambda b: _mask(g.terminals, b))
        exhaustive = False
    else:
        raise EnumerationCapError(f"k={k} exceeds enumeration cap {cap}; pass sample=")

    n_jobs = n_jobs or 1
    if n_jobs > 1 and len(bips) > 4 * n_jobs:
        chunks = [bips[i::n_jobs] for i in range(n_jobs)]
        with ProcessPoolExecutor(n_jobs) as ex:
            parts = list(ex.map(_pair_values, [(g, h, c) for c in chunks]))
        values: dict[Bipartition, tuple] = {}
        for c, p in zip(chunks, parts):
            values.update(zip(c, p))
        rows = [CutRow(b, *values[b]) for b in bips]
    else:
        rows = [CutRow(b, *v) for b, v in zip(bips, _pair_values((g, h, bips)))]

    quality: Fraction | float = Fraction(1)
    witness = None
    for r in rows:
        if r.ratio > quality:
            quality, witness = r.ratio, r.bipartition
    if witness is None and rows:
        witness = rows[0].bipartition
    return QualityReport(
        quality=quality,
        witness=witness,
        lower_violations=[r.bipartition for r in rows if r.value_h > r.value_g],
        dominance_violations=[r.bipartition for r in rows if r.value_h < r.value_g],
        per_cut=rows,
        exhaustive=exhaustive,
        infinite=quality == math.inf,
    )


def _mask(terminals: Sequence[str], b: Bipartition) -> int:
    pos = {t: i for i, t in enumerate(terminals)}
    return sum(1 << (pos[t] - 1) for t in b.side_a if pos[t] > 0)


@dataclass
class ContractionCheck:
    ok: bool
    missing: dict = field(default_factory=dict)
    unexpected: dict = field(default_factory=dict)
    vertex_diff: tuple = ((), ())

    def __bool__(self) -> bool:
        return self.ok


def verify_contraction(g: Instance, h: Instance, m: ContractionMap) -> ContractionCheck:
    """Check that ``h`` equals ``contract(g, m)`` under the representative names.

    Invalid maps raise :class:`InvalidContractionError` from :func:`contract`.
    """
    c = contract(g, m)
    want, got = c.edge_multiset(), h.edge_multiset()
    missing = {k: n - got.get(k, 0) for k, n in want.items() if got.get(k, 0) < n}
    unexpected = {k: n - want.get(k, 0) for k, n in got.items() if want.get(k, 0) < n}
    vdiff = (
        tuple(sorted(set(c.vertices) - set(h.vertices))),
        tuple(sorted(set(h.vertices) - set(c.vertices))),
    )
    ok = not missing and not unexpected and vdiff == ((), ()) and c.terminals == h.terminals
    return ContractionCheck(ok, missing, unexpected, vdiff)


def observed_quality_chain(q1, q2):
    """Quality bound for a sparsifier of a sparsifier: the product of the two."""
    q1, q2 = (x if x == math.inf else Fraction(x) for x in (q1, q2))
    if q1 < 1 or q2 < 1:
        raise ValueError("qualities are at least 1")
    return q1 * q2


def default_jobs() -> int:
    env = os.environ.get("CUTSPARSIFY_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


__all__ = [
    "CutRow",
    "QualityReport",
    "verify_quality",
    "verify_contraction",
    "observed_quality_chain",
    "sample_bipartitions",
    "InvalidContractionError",
]
