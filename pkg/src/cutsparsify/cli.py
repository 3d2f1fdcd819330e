"""Command-line driver: generate instances, sparsify, verify, evaluate BHC reductions.

Exit codes: 0 success, 2 invalid input or parameters, 3 quality target missed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .bhc import BhcInstance, gen_hypercube_instance, image_size, sparsifier_to_mapping, stretch
from .generators import gen_random_quasi
from .graph import Instance, InstanceError, InvalidContractionError
from .io import GraphFile, format_weight, read_graph, read_partition, write_graph, write_partition
from .mincut import InvalidBipartitionError
from .planar.embedding import EmbeddingError, gen_grid_oneface
from .planar.pipeline import one_face_sparsify
from .quasi_approx import SamplingParams, approx_sparsifier_verified
from .quasi_exact import NotQuasiBipartiteError, exact_sparsifier, gen_profile_lowerbound
from .verify import DEFAULT_CAP, EnumerationCapError, TerminalMismatchError, default_jobs, verify_quality

EXIT_OK, EXIT_INVALID, EXIT_MISS = 0, 2, 3

VALIDATION_ERRORS = (
    InstanceError,
    InvalidContractionError,
    InvalidBipartitionError,
    TerminalMismatchError,
    EnumerationCapError,
    NotQuasiBipartiteError,
    EmbeddingError,
    FileNotFoundError,
    ValueError,
)


def _stats(g: Instance) -> dict:
    return {"n": g.n, "m": g.m, "k": g.k}


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _quality(g: Instance, h: Instance, args, extra=()) -> dict:
    rep = verify_quality(
        g, h, cap=args.cap, sample=args.sample, extra=extra, seed=args.seed, n_jobs=args.jobs or default_jobs()
    )
    return rep.to_json(table=getattr(args, "table", False))


# --- gen ------------------------------------------------------------------------------


def cmd_gen(args) -> tuple[int, dict]:
    if args.kind == "quasi-lowerbound":
        gf = GraphFile(gen_profile_lowerbound(args.k, args.seed, jitter=not args.no_jitter))
    elif args.kind == "random-quasi":
        gf = GraphFile(gen_random_quasi(args.k, args.n, args.seed))
    elif args.kind == "bhc":
        b = gen_hypercube_instance(args.d, args.eps)
        gf = GraphFile(b.instance, labels=b.labels)
    else:
        e = gen_grid_oneface(args.rows, args.cols, args.terminals, args.seed)
        e.validate()
        gf = GraphFile(e.instance, embedding=e)
    write_graph(args.output, gf)
    g = gf.instance
    out = {"instance": _stats(g), "output": {"path": str(args.output)}}
    if args.kind == "bhc":
        out["instance"]["middle"] = g.n - g.k
    return EXIT_OK, out


# --- sparsify -------------------------------------------------------------------------


def cmd_sparsify(args) -> tuple[int, dict]:
    gf = read_graph(args.input)
    g = gf.instance
    code = EXIT_OK
    out: dict = {"instance": _stats(g)}
    m = None
    if args.method == "exact-profile":
        h, m = exact_sparsifier(g)
        out["output"] = {"size": h.n, "groups": h.n - g.k}
    elif args.method == "sample":
        p = SamplingParams(args.epsilon, g.k, args.seed)
        res = approx_sparsifier_verified(
            g, p, retries=args.retries, cap=args.cap, sample=args.sample, n_jobs=args.jobs or default_jobs()
        )
        h, m = res.result.sparsifier, res.result.contraction
        out["output"] = {
            "size": h.n,
            "groups": res.result.diagnostics["n_groups"],
            "important": res.result.diagnostics["n_important"],
        }
        out["diagnostics"] = res.result.diagnostics
        out["attempts"] = res.attempts
        out["target"] = format_weight(1 + 3 * p.epsilon)
        out["success"] = res.success
        if not res.success:
            code = EXIT_MISS
    else:
        if gf.embedding is None:
            raise InstanceError("oneface needs an embedded input (rotation and outer_face)")
        res = one_face_sparsify(gf.embedding, args.emulator, args.epsilon)
        h = res.sparsifier
        out["output"] = {"size": h.n, "pieces": len(res.pieces), "emulator": res.emulator}
    if not args.no_verify and (g.k <= args.cap or args.sample):
        out["quality"] = _quality(g, h, args)
    write_graph(args.output, h)
    out["output"]["path"] = str(args.output)
    if args.map and m is not None:
        write_partition(args.map, m)
        out["output"]["map"] = str(args.map)
    return code, out


# --- verify ---------------------------------------------------------------------------


def cmd_verify(args) -> tuple[int, dict]:
    g = read_graph(args.g).instance
    h = read_graph(args.h).instance
    return EXIT_OK, {"instance": _stats(g), "sparsifier": _stats(h), "quality": _quality(g, h, args)}


# --- bhc-eval -------------------------------------------------------------------------


def cmd_bhc_eval(args) -> tuple[int, dict]:
    bf = read_graph(args.b)
    if not bf.labels:
        raise InstanceError("BHC instance file needs 'labels'")
    d = len(next(iter(bf.labels.values())))
    b = BhcInstance(d, bf.labels, bf.instance)
    h = read_graph(args.h).instance
    m = read_partition(args.map, b.instance.terminals)
    f = sparsifier_to_mapping(b, h, m)
    st = stretch(b, f)
    q = verify_quality(
        b.instance,
        h,
        cap=args.cap,
        sample=args.sample if b.instance.k > args.cap else None,
        extra=b.coordinate_bipartitions(),
        seed=args.seed,
        n_jobs=args.jobs or default_jobs(),
    )
    ok = st <= q.quality
    out = {
        "instance": _stats(b.instance),
        "stretch": format_weight(st),
        "image_size": image_size(f),
        "quality": q.to_json(),
        "stretch_le_quality": ok,
    }
    return (EXIT_OK if ok else EXIT_MISS), out


# --- driver ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cutsparsify", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max k for exhaustive verification")
        p.add_argument("--sample", type=int, default=None, help="verify on N random bipartitions above the cap")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CUTSPARSIFY_JOBS or cores)")
        p.add_argument("--report", type=Path, default=None, help="also write the JSON report here")

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=["quasi-lowerbound", "bhc", "random-quasi", "grid-oneface"])
    g.add_argument("-o", "--output", type=Path, required=True)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--n", type=int, default=30)
    g.add_argument("--d", type=int, default=4)
    g.add_argument("--eps", type=_fraction, default=Fraction(1, 4))
    g.add_argument("--rows", type=int, default=4)
    g.add_argument("--cols", type=int, default=4)
    g.add_argument("--terminals", type=int, default=4)
    g.add_argument("--no-jitter", action="store_true", help="quasi-lowerbound: use unit weights")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--report", type=Path, default=None)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sparsify", help="build a sparsifier and verify it")
    s.add_argument("input", type=Path)
    s.add_argument("--method", choices=["exact-profile", "sample", "oneface"], required=True)
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1))
    s.add_argument("--retries", type=int, default=5)
    s.add_argument("--emulator", choices=["identity", "portal-greedy"], default="identity")
    s.add_argument("--no-verify", action="store_true")
    s.add_argument("--map", type=Path, default=None, help="write the contraction partition here")
    s.add_argument("-o", "--output", type=Path, required=True)
    common(s)
    s.set_defaults(func=cmd_sparsify)

    v = sub.add_parser("verify", help="compare terminal min-cuts of two graphs")
    v.add_argument("g", type=Path)
    v.add_argument("h", type=Path)
    v.add_argument("--table", action="store_true", help="include the per-cut table")
    common(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bhc-eval", help="stretch of the hypercube mapping read off a contraction")
    b.add_argument("b", type=Path)
    b.add_argument("h", type=Path)
    b.add_argument("map", type=Path)
    common(b)
    b.set_defaults(func=cmd_bhc_eval)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code, body = args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {"schema": 1, "command": ["cutsparsify", *argv], "seed": getattr(args, "seed", None), **body}
    report["wall_ms"] = round((time.perf_counter() - start) * 1000, 3)
    text = json.dumps(report, indent=1, sort_keys=True)
    print(text)
    if args.report:
        args.report.write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
