"""Greedy epsilon-covers of a vertex on a shortest path."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..graph import as_weight


class CoverInputError(ValueError):
    pass


def _check_inputs(dists: Sequence[Fraction], prefix: Sequence[Fraction]) -> None:
    if len(dists) != len(prefix) or not dists:
        raise CoverInputError("dists and prefix must be non-empty and of equal length")
    if any(b < a for a, b in zip(prefix, prefix[1:])):
        raise CoverInputError("prefix lengths must be non-decreasing")
    if any(d < 0 for d in dists):
        raise CoverInputError("distances must be non-negative")
    # 1-Lipschitz along R; consecutive pairs suffice since prefix is monotone.
    for i in range(len(dists) - 1):
        if abs(dists[i + 1] - dists[i]) > prefix[i + 1] - prefix[i]:
            raise CoverInputError(f"triangle inequality violated between positions {i} and {i + 1}")
    # R is a shortest path: going through v is never shorter than along R.
    best = prefix[0] + dists[0]
    for i in range(1, len(dists)):
        if prefix[i] - dists[i] > best:
            raise CoverInputError(f"R is not a shortest path: detour via v reaches position {i} early")
        best = min(best, prefix[i] + dists[i])


def _sweep(dists, prefix, order, factor) -> list[int]:
    """One greedy pass over ``order`` (which starts at the anchor)."""
    chosen = []
    u = order[0]
    for x in order[1:]:
        if dists[u] + abs(prefix[x] - prefix[u]) > factor * dists[x]:
            chosen.append(u)
            u = x
    chosen.append(u)
    return chosen


def epsilon_cover(dists_to_v, prefix, anchor: int | None = None, epsilon=Fraction(1, 2)) -> set[int]:
    """Indices of portals on R through which every x in R is reached within 1+eps.

    ``dists_to_v[i]`` is dist(v, R[i]) and ``prefix[i]`` the length of R up to
    R[i]. Starting at ``anchor`` (default: the vertex of R closest to v), a
    forward and a backward sweep each keep the current portal whenever the next
    vertex is no longer well served by it. The final portal of each sweep is
    kept too, so the last stretch of R is covered.
    """
    dists = [as_weight(x) for x in dists_to_v]
    prefix = [as_weight(x) for x in prefix]
    eps = as_weight(epsilon)
    if eps <= 0:
        raise CoverInputError("epsilon must be positive")
    _check_inputs(dists, prefix)
    n = len(dists)
    if anchor is None:
        anchor = min(range(n), key=lambda i: (dists[i], i))
    if not 0 <= anchor < n:
        raise CoverInputError("anchor out of range")
    factor = 1 + eps
    fwd = _sweep(dists, prefix, list(range(anchor, n)), factor)
    bwd = _sweep(dists, prefix, list(range(anchor, -1, -1)), factor)
    return set(fwd) | set(bwd)


def cover_stretch(dists_to_v, prefix, cover) -> Fraction | float:
    """Worst ratio min_y (d(v,y) + d(y,x)) / d(v,x) over x in R (brute force).

    Infinite when some x at distance 0 from v is only reached through a detour.
    """
    dists = [as_weight(x) for x in dists_to_v]
    prefix = [as_weight(x) for x in prefix]
    worst = Fraction(1)
    for x in range(len(dists)):
        best = min(dists[y] + abs(prefix[x] - prefix[y]) for y in cover)
        if dists[x] == 0:
            if best > 0:
                return math.inf
            continue
        worst = max(worst, best / dists[x])
    return worst


def covers(dists_to_v, prefix, cover, epsilon) -> bool:
    """Brute-force check of the covering inequality for every x in R."""
    if not cover:
        return False
    dists = [as_weight(x) for x in dists_to_v]
    prefix = [as_weight(x) for x in prefix]
    factor = 1 + as_weight(epsilon)
    return all(
        min(dists[y] + abs(prefix[x] - prefix[y]) for y in cover) <= factor * dists[x] for x in range(len(dists))
    )
