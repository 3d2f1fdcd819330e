"""Randomised (1+eps) contraction sparsifier for quasi-bipartite graphs.

Every non-terminal star is replaced by a sampled star with at most ``c``
edges and the same total weight; non-important vertices whose sampled stars
make identical side decisions are contracted together.
"""

from __future__ import annotations

import bisect
import hashlib
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import ContractionMap, Instance, InstanceError, contract, is_quasi_bipartite
from .mincut import Bipartition, enumerate_bipartitions, min_cut, min_cut_value
from .quasi_exact import NotQuasiBipartiteError
from .verify import verify_quality

BITMAP_CAP = 20


@dataclass(frozen=True)
class SamplingParams:
    epsilon: Fraction
    k: int
    seed: int = 0

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        object.__setattr__(self, "epsilon", eps)

    @property
    def c(self) -> int:
        """Sampled star size: ceil(100 / eps^2)."""
        return math.ceil(Fraction(100) / self.epsilon**2)

    @property
    def eta(self) -> Fraction:
        """Importance threshold scale: eps^4 / (1000 k)."""
        return self.epsilon**4 / (1000 * self.k)

    def with_seed(self, seed: int) -> "SamplingParams":
        return SamplingParams(self.epsilon, self.k, seed)


def vertex_seed(seed: int, vertex: str) -> int:
    """Per-vertex stream seed; independent of iteration order and PYTHONHASHSEED."""
    h = hashlib.sha256(f"{seed}\x00{vertex}".encode()).digest()
    return int.from_bytes(h[:8], "big")


@dataclass(frozen=True)
class StarSketch:
    """Sampled replacement for the star of ``center``.

    ``heavy`` keeps the original (terminal, weight) pairs of heavy edges;
    ``slots`` counts how many light-edge draws landed on each terminal, each
    draw carrying ``slot_weight``. A verbatim sketch stores the original star
    in ``heavy`` with no slots.
    """

    center: str
    heavy: tuple[tuple[str, Fraction], ...]
    slots: tuple[tuple[str, int], ...]
    slot_weight: Fraction
    total_weight: Fraction
    verbatim: bool = False

    def weights(self) -> dict[str, Fraction]:
        out: dict[str, Fraction] = defaultdict(Fraction)
        for t, w in self.heavy:
            out[t] += w
        for t, n in self.slots:
            out[t] += n * self.slot_weight
        return dict(out)

    @property
    def n_edges(self) -> int:
        return len(self.weights())

    @property
    def leaf_set(self) -> tuple[str, ...]:
        return tuple(sorted(self.weights()))

    def side_weight(self, s: Iterable[str]) -> Fraction:
        s = set(s)
        return sum((w for t, w in self.weights().items() if t in s), Fraction(0))


def _star_leaf_weights(gv: Instance, center: str) -> list[tuple[str, Fraction]]:
    if gv.is_terminal(center):
        raise InstanceError(f"star centre {center!r} is a terminal")
    w = gv.weights_to(center)
    bad = [u for u in w if not gv.is_terminal(u)]
    if bad:
        raise NotQuasiBipartiteError(f"star of {center!r} has non-terminal leaves {bad}")
    return sorted(w.items())


def _star_center(gv: Instance) -> str:
    nts = gv.non_terminals()
    if len(nts) != 1:
        raise InstanceError("a star must have exactly one non-terminal (its centre)")
    return nts[0]


@dataclass(frozen=True)
class _Split:
    total: Fraction
    heavy: list[tuple[str, Fraction]]
    light: list[tuple[str, Fraction]]
    slots: int

    @property
    def light_weight(self) -> Fraction:
        return sum((w for _, w in self.light), Fraction(0))


def _split(leaves: Sequence[tuple[str, Fraction]], c: int) -> _Split:
    total = sum((w for _, w in leaves), Fraction(0))
    heavy = [(t, w) for t, w in leaves if w * c >= total]
    light = [(t, w) for t, w in leaves if w * c < total]
    return _Split(total, heavy, light, c - len(heavy))


def sparsify_star(gv: Instance, p: SamplingParams, seed: int | None = None) -> StarSketch:
    """Sample the star ``gv`` down to at most ``c`` edges of the same total weight.

    Parallel edges to one terminal are merged first. Stars with at most ``c``
    edges are returned verbatim. Otherwise heavy edges (weight >= w/c) are kept
    and ``c - h`` slots are drawn with replacement, proportionally to weight,
    from the light edges; each slot weighs ``(w - w_heavy) / (c - h)``.
    ``seed`` defaults to the per-vertex seed derived from ``p.seed``.
    """
    center = _star_center(gv)
    leaves = _star_leaf_weights(gv, center)
    c = p.c
    total = sum((w for _, w in leaves), Fraction(0))
    if len(leaves) <= c:
        return StarSketch(center, tuple(leaves), (), Fraction(0), total, verbatim=True)
    sp = _split(leaves, c)
    light_w = sp.light_weight
    if sp.slots == 0 or light_w == 0:
        return StarSketch(center, tuple(sp.heavy), (), Fraction(0), total)
    rng = random.Random(vertex_seed(p.seed, center) if seed is None else seed)
    den = math.lcm(*(w.denominator for _, w in sp.light))
    cum = []
    acc = 0
    for _, w in sp.light:
        acc += int(w * den)
        cum.append(acc)
    counts: Counter[str] = Counter()
    for _ in range(sp.slots):
        counts[sp.light[bisect.bisect_right(cum, rng.randrange(acc))][0]] += 1
    return StarSketch(
        center,
        tuple(sp.heavy),
        tuple(sorted(counts.items())),
        light_w / sp.slots,
        total,
    )


def sketch_side(sk: StarSketch, s: Iterable[str]) -> str:
    """``'A'`` iff the sketch puts its centre on the ``s`` side (w'_S > w/2)."""
    return "A" if 2 * sk.side_weight(s) > sk.total_weight else "B"


@dataclass(frozen=True)
class SketchKey:
    leaf_set: tuple[str, ...]
    mode: str
    payload: object


def sketch_key(sk: StarSketch, bitmap_cap: int = BITMAP_CAP) -> SketchKey:
    """Contraction key: equal keys imply identical side decisions for every S.

    Up to ``bitmap_cap`` leaves the key is the bitmap of decisions over all
    subsets of the leaf set; beyond it the exact weight multiset is used, which
    refines the decision pattern.
    """
    w = sk.weights()
    leaves = tuple(sorted(w))
    if len(leaves) > bitmap_cap:
        return SketchKey(leaves, "weight-identity", tuple((t, w[t]) for t in leaves))
    den = math.lcm(1, *(x.denominator for x in w.values()))
    iw = [int(w[t] * den) for t in leaves]
    total = sum(iw)
    sums = [0] * (1 << len(leaves))
    bitmap = 0
    for mask in range(1, 1 << len(leaves)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + iw[low.bit_length() - 1]
        if 2 * sums[mask] > total:
            bitmap |= 1 << mask
    return SketchKey(leaves, "exact-bitmap", bitmap)


# --- special cuts and important vertices ------------------------------------


def special_cuts(g: Instance) -> list[tuple[Bipartition, Fraction]]:
    """Canonical min-cut bipartition for every terminal pair, deduplicated.

    For each pair ``t < t'`` (terminal order) the source-minimal min-cut from
    ``t`` to ``t'`` is computed with all other terminals free; the terminals on
    its source side form one side of the special cut.
    """
    out: dict[Bipartition, Fraction] = {}
    ts = g.terminals
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            value, side, _ = min_cut(g, [ts[i]], [ts[j]])
            bip = Bipartition.of(ts, [t for t in ts if t in side])
            out.setdefault(bip, value)
    return list(out.items())


def _star_terminal_weights(g: Instance, v: str) -> dict[str, Fraction]:
    if g.is_terminal(v):
        raise InstanceError(f"{v!r} is a terminal")
    return g.weights_to(v)


def cut_contribution(g: Instance, v: str, s: Iterable[str]) -> Fraction:
    """min(w_v(S), w_v(T) - w_v(S)): the star's own min-cut for (S, T \\ S)."""
    if not is_quasi_bipartite(g):
        raise NotQuasiBipartiteError("graph is not quasi-bipartite")
    s = set(s)
    w = _star_terminal_weights(g, v)
    ws = sum((x for t, x in w.items() if t in s), Fraction(0))
    return min(ws, sum(w.values(), Fraction(0)) - ws)


def important_vertices(
    g: Instance, p: SamplingParams, specials: list[tuple[Bipartition, Fraction]] | None = None
) -> set[str]:
    """Non-terminals contributing at least (eta/k) * mincut to some special cut.

    Zero contributions never count, so special cuts of value 0 add nothing.
    """
    if not is_quasi_bipartite(g):
        raise NotQuasiBipartiteError("graph is not quasi-bipartite")
    if specials is None:
        specials = special_cuts(g)
    scale = p.eta / g.k
    out = set()
    for v in g.non_terminals():
        w = g.weights_to(v)
        wt = sum(w.values(), Fraction(0))
        for bip, value in specials:
            ws = sum((w.get(t, 0) for t in bip.side_a), Fraction(0))
            contrib = min(ws, wt - ws)
            if contrib > 0 and contrib >= scale * value:
                out.add(v)
                break
    return out


@dataclass
class ApproxResult:
    sparsifier: Instance
    contraction: ContractionMap
    diagnostics: dict = field(default_factory=dict)


def approx_sparsifier(g: Instance, p: SamplingParams, bitmap_cap: int = BITMAP_CAP) -> ApproxResult:
    """Keep important vertices; contract the rest by sampled-star key."""
    if not is_quasi_bipartite(g):
        raise NotQuasiBipartiteError("graph is not quasi-bipartite")
    if p.k != g.k:
        p = SamplingParams(p.epsilon, g.k, p.seed)
    specials = special_cuts(g)
    important = important_vertices(g, p, specials)
    groups: dict[SketchKey, list[str]] = defaultdict(list)
    sampled = 0
    for v in g.non_terminals():
        if v in important:
            continue
        sk = sparsify_star(g.subgraph(g.incident(v), [v]), p)
        sampled += not sk.verbatim
        groups[sketch_key(sk, bitmap_cap)].append(v)
    classes = [[t] for t in g.terminals] + [[v] for v in sorted(important)] + sorted(groups.values())
    m = ContractionMap.from_groups(classes, g.terminals)
    h = contract(g, m)
    k = g.k
    diag = {
        "epsilon": str(p.epsilon),
        "c": p.c,
        "eta": str(p.eta),
        "seed": p.seed,
        "n_special_cuts": len(specials),
        "n_important": len(important),
        "important_bound": str(k * k / p.eta),
        "n_sampled_stars": sampled,
        "n_groups": len(groups),
        "size": h.n,
        "input_size": g.n,
        # the size guarantee is asymptotic; report log_k(size) as a rough exponent
        "size_exponent": round(math.log(max(h.n, 1)) / math.log(max(k, 2)), 3),
    }
    return ApproxResult(h, m, diag)


@dataclass
class RetryOutcome:
    result: ApproxResult
    quality: Fraction | float
    attempts: list[dict]
    success: bool


def approx_sparsifier_verified(
    g: Instance, p: SamplingParams, retries: int = 5, target=None, **verify_kw
) -> RetryOutcome:
    """Re-run with seeds ``p.seed, p.seed+1, ...`` until quality <= 1+3eps.

    ``retries`` counts re-runs after the first attempt.
    """
    target = Fraction(1) + 3 * p.epsilon if target is None else target
    attempts = []
    best = None
    for i in range(retries + 1):
        res = approx_sparsifier(g, p.with_seed(p.seed + i))
        q = verify_quality(g, res.sparsifier, **verify_kw).quality
        attempts.append({"seed": p.seed + i, "quality": str(q), "size": res.sparsifier.n})
        if best is None or q < best[1]:
            best = (res, q)
        if q <= target:
            return RetryOutcome(res, q, attempts, True)
    return RetryOutcome(best[0], best[1], attempts, False)


# --- empirical validators ---------------------------------------------------


@dataclass(frozen=True)
class SketchModel:
    """Distribution of w'_S for a fixed star and subset: heavy part + slot count."""

    total: Fraction
    heavy_in_s: Fraction
    slots: int
    slot_weight: Fraction
    p_in_s: Fraction
    w_s: Fraction
    verbatim: bool


def sketch_model(gv: Instance, p: SamplingParams, s: Iterable[str]) -> SketchModel:
    """w'_S = heavy_in_s + slot_weight * Binomial(slots, p_in_s)."""
    center = _star_center(gv)
    leaves = _star_leaf_weights(gv, center)
    s = set(s)
    total = sum((w for _, w in leaves), Fraction(0))
    w_s = sum((w for t, w in leaves if t in s), Fraction(0))
    if len(leaves) <= p.c:
        return SketchModel(total, w_s, 0, Fraction(0), Fraction(0), w_s, True)
    sp = _split(leaves, p.c)
    lw = sp.light_weight
    heavy_in = sum((w for t, w in sp.heavy if t in s), Fraction(0))
    if sp.slots == 0 or lw == 0:
        return SketchModel(total, heavy_in, 0, Fraction(0), Fraction(0), w_s, False)
    light_in = sum((w for t, w in sp.light if t in s), Fraction(0))
    return SketchModel(total, heavy_in, sp.slots, lw / sp.slots, light_in / lw, w_s, False)


def simulate_side_weights(model: SketchModel, trials: int, seed: int = 0) -> np.ndarray:
    """Monte-Carlo draws of w'_S (as floats) under ``model``."""
    rng = np.random.default_rng(seed)
    counts = rng.binomial(model.slots, float(model.p_in_s), size=trials) if model.slots else np.zeros(trials)
    return float(model.heavy_in_s) + float(model.slot_weight) * counts


def flip_cost_estimate(model: SketchModel, trials: int, seed: int = 0) -> tuple[float, float]:
    """Estimate (w - 2 w_S) * Pr[w'_S > w/2] and its standard error.

    The flip event is decided exactly: w'_S > w/2 iff the slot count exceeds
    the rational threshold (w/2 - heavy_in_s) / slot_weight.
    """
    rng = np.random.default_rng(seed)
    half = model.total / 2
    if model.slots:
        counts = rng.binomial(model.slots, float(model.p_in_s), size=trials)
        need = math.floor((half - model.heavy_in_s) / model.slot_weight) + 1
        flips = (counts >= need).astype(float)
    else:
        flips = np.full(trials, float(model.heavy_in_s > half))
    scale = float(model.total - 2 * model.w_s)
    mean = flips.mean()
    se = flips.std(ddof=1) / math.sqrt(trials) if trials > 1 else 0.0
    return scale * mean, scale * se


def dominating_cut_violations(g: Instance) -> list[tuple[str, Bipartition]]:
    """(v, S) pairs with no special cut S~ such that
    x_v(S~)/mincut(S~) >= (1/k) * x_v(S)/mincut(S), checked exactly.
    """
    specials = [(b, val) for b, val in special_cuts(g) if val > 0]
    values = {b: min_cut_value(g, b) for b in enumerate_bipartitions(g.terminals)}
    k = g.k
    bad = []
    for v in g.non_terminals():
        spec_best = max(
            (cut_contribution(g, v, b.side_a) / val for b, val in specials),
            default=Fraction(0),
        )
        for b, val in values.items():
            x = cut_contribution(g, v, b.side_a)
            if x == 0:
                continue
            if k * spec_best < x / val:
                bad.append((v, b))
    return bad
