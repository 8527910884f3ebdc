"""Command-line interface.

Exit codes: 0 success, 2 a well-formed "none found" result, 1 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import generators as gen
from .another_hc import OpStats, another_cycle, logspace_cycle, require_min_degree3
from .decomp import (BranchDecomposition, anchored_count_branchwidth,
                     anchored_count_pathwidth, count_hc_branchwidth, count_hc_pathwidth,
                     linear_path_decomposition, make_nice, parse_branch_decomposition,
                     parse_path_decomposition, tsp_branchwidth, tsp_min_over_anchors,
                     tsp_pathwidth)
from .graph import (Graph, GraphError, HamCycle, bipartition, parse_cycle, parse_graph,
                    serialize_cycle, serialize_graph, validate_cycle)
from .hardness import parse_esc, reduce, serialize_annotations
from .lollipop import lollipop_run
from .oracle import enumerate_cycles, enumerate_cycles_forcing, serialize_catalog
from .orientations import (AnchoredContext, Orientation, context_from_orientation,
                           kasteleyn_orientation, orientation_from_cycle, parse_embedding,
                           parse_orientation, serialize_embedding,
                           verify_pfaffian)

EXIT_OK, EXIT_ERROR, EXIT_NONE = 0, 1, 2
JOBS_ENV = "PFAFFHAM_JOBS"


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str]
    anchor: tuple[int, int] | None
    json: bool
    seed: int
    output: str | None
    ceiling: int


class Usage(GraphError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise Usage(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit(cfg: RunConfig, payload: dict, human: str) -> None:
    if cfg.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(human)


def _anchor_edge(g: Graph, anchor: tuple[int, int] | None) -> int:
    if anchor is None:
        raise Usage("--anchor U V is required")
    e = g.edge_id(*anchor)
    if e is None:
        raise Usage(f"anchor {anchor[0]} {anchor[1]} is not an edge")
    return e


def _load_cycle(g: Graph, path: str) -> HamCycle:
    h = parse_cycle(_read(path))
    verdict = validate_cycle(g, h)
    if not verdict:
        raise GraphError(f"invalid Hamiltonian cycle: {verdict.message}")
    return h


def _orientation(g: Graph, args) -> Orientation | None:
    """Pfaffian orientation from --orientation, --embedding or --cycle; failing
    those, from any Hamiltonian cycle (None when there is none)."""
    if args.orientation:
        return parse_orientation(_read(args.orientation), g)
    if args.embedding:
        return kasteleyn_orientation(g, parse_embedding(_read(args.embedding), g))
    if args.cycle:
        h = _load_cycle(g, args.cycle)
    else:
        found = enumerate_cycles_forcing(g, max_cycles=1)
        if not found:
            return None
        h = found[0]
    return orientation_from_cycle(g, h, g.edge_id(h.order[0], h.order[1])).pf


def _decomposition(g: Graph, path: str | None):
    if path is None:
        return make_nice(linear_path_decomposition(g), g)
    text = _read(path)
    head = next((ln.split() for ln in text.splitlines() if ln.startswith("s ")), None)
    if head and head[1] == "bd":
        bd = parse_branch_decomposition(text, g)
        bd.validate(g)
        return bd
    return make_nice(parse_path_decomposition(text), g)


# ------------------------------------------------------------------ commands

def cmd_gen(cfg: RunConfig, args) -> int:
    kind, params = args.kind, args.params
    if kind == "esc-reduce":
        if len(params) != 1:
            raise Usage("esc-reduce needs one ESC file")
        return _reduce_to(cfg, params[0])
    try:
        nums = [int(p) for p in params]
    except ValueError:
        raise Usage("generator parameters must be integers") from None
    want = {"cube": 0, "cycle": 1, "grid": 2, "prism": 1, "chorded-cycle": 2}
    if len(nums) != want[kind]:
        raise Usage(f"gen {kind} takes {want[kind]} parameter(s)")
    if kind == "cube":
        inst = gen.cube()
    elif kind == "cycle":
        inst = gen.cycle_graph(nums[0])
    elif kind == "grid":
        if min(nums) < 1:
            raise Usage("grid dimensions must be positive")
        inst = gen.grid(*nums)
    elif kind == "prism":
        if nums[0] < 2:
            raise Usage("prism k needs k >= 2")
        inst = gen.prism(2 * nums[0])
    else:
        inst = gen.chorded_cycle(nums[0], nums[1], seed=cfg.seed)
    _write_instance(cfg.output, inst.g, inst.emb, inst.cycle, inst.name)
    _emit(cfg, {"name": inst.name, "n": inst.g.n, "m": inst.g.m},
          f"{inst.name}: n={inst.g.n} m={inst.g.m}")
    return EXIT_OK


def _write_instance(prefix, g, emb, cycle, name, extra: dict | None = None) -> None:
    if prefix is None:
        sys.stdout.write(serialize_graph(g, name))
        return
    Path(f"{prefix}.graph").write_text(serialize_graph(g, name))
    if emb is not None:
        Path(f"{prefix}.emb").write_text(serialize_embedding(emb))
    if cycle is not None:
        Path(f"{prefix}.cycle").write_text(serialize_cycle(cycle))
    for suffix, text in (extra or {}).items():
        Path(f"{prefix}.{suffix}").write_text(text)


def _reduce_to(cfg: RunConfig, path: str) -> int:
    esc = parse_esc(_read(path))
    ri = reduce(esc)
    _write_instance(cfg.output, ri.graph, ri.embedding, ri.planted, "esc-reduce",
                    {"ann": serialize_annotations(ri)})
    _emit(cfg, {"n": ri.graph.n, "m": ri.graph.m, "subsets": len(esc.family) + 1},
          f"reduced: n={ri.graph.n} m={ri.graph.m}")
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, args) -> int:
    return _reduce_to(cfg, args.esc)


def cmd_ahc(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    h = _load_cycle(g, args.cycle)
    e = _anchor_edge(g, cfg.anchor)
    require_min_degree3(g)
    t0 = time.perf_counter()
    payload: dict = {}
    if args.logspace:
        report: dict = {}
        h2 = logspace_cycle(g, h, e, report)
        payload.update(report)
    else:
        st = OpStats()
        h2 = another_cycle(orientation_from_cycle(g, h, e), h, st)
        payload.update(ops=st.ops, cycle_len=st.cycle_len)
    payload["seconds"] = round(time.perf_counter() - t0, 6)
    verdict = validate_cycle(g, h2)
    u, v = int(g.eu[e]), int(g.ev[e])
    if not verdict or not h2.contains_edge(u, v) or h2.same_cycle(h):
        raise GraphError(f"internal error: produced cycle rejected ({verdict.message})")
    _write(cfg.output, serialize_cycle(h2))
    if cfg.output or cfg.json:
        _emit(cfg, payload, " ".join(f"{k}={v}" for k, v in sorted(payload.items())))
    return EXIT_OK


def cmd_lollipop(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    h = _load_cycle(g, args.cycle)
    e = _anchor_edge(g, cfg.anchor)
    ctx = orientation_from_cycle(g, h, e)
    h2, trace = lollipop_run(g, h, ctx.s, ctx.t, ceiling=cfg.ceiling)
    _write(cfg.output, serialize_cycle(h2))
    if args.trace:
        Path(args.trace).write_text(trace.export())
    if cfg.output or cfg.json:
        _emit(cfg, {"steps": trace.step_count, "n": g.n}, f"steps={trace.step_count}")
    return EXIT_OK


def _contexts(g: Graph, pf: Orientation, anchor) -> list[AnchoredContext]:
    bip = bipartition(g)
    if anchor is None:
        return []
    return [context_from_orientation(g, _anchor_edge(g, anchor), pf, bip)]


def cmd_count(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    dec = _decomposition(g, args.decomp)
    pf = _orientation(g, args)
    if pf is None:
        value = 0
    elif cfg.anchor is not None:
        ctx = _contexts(g, pf, cfg.anchor)[0]
        value = (anchored_count_branchwidth(ctx, dec) if isinstance(dec, BranchDecomposition)
                 else anchored_count_pathwidth(ctx, dec))
    elif isinstance(dec, BranchDecomposition):
        value = count_hc_branchwidth(g, dec, pf)
    else:
        value = count_hc_pathwidth(g, dec, pf)
    _emit(cfg, {"count": value}, str(value))
    return EXIT_OK if value else EXIT_NONE


def cmd_tsp(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    dec = _decomposition(g, args.decomp)
    weights = g.weights if g.weights is not None else [Fraction(1)] * g.m
    pf = _orientation(g, args)
    value = None
    if pf is not None:
        def solve(ctx):
            if isinstance(dec, BranchDecomposition):
                return tsp_branchwidth(ctx, weights, dec)
            return tsp_pathwidth(ctx, weights, dec)
        if cfg.anchor is not None:
            value = solve(_contexts(g, pf, cfg.anchor)[0])
        else:
            value = tsp_min_over_anchors(g, pf, solve)
    if value is None:
        _emit(cfg, {"tour": None}, "no Hamiltonian cycle")
        return EXIT_NONE
    text = str(value.numerator) if value.denominator == 1 else str(value)
    _emit(cfg, {"tour": text}, text)
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    if g.n <= args.limit:
        cat = enumerate_cycles(g, limit=args.limit)
    else:
        from .oracle import CycleCatalog
        cat = CycleCatalog(sorted((c.canonical() for c in enumerate_cycles_forcing(g)),
                                  key=lambda c: c.order))
    if cfg.output:
        _write(cfg.output, serialize_catalog(cat))
    _emit(cfg, {"count": len(cat)}, str(len(cat)))
    return EXIT_OK if len(cat) else EXIT_NONE


def cmd_verify(cfg: RunConfig, args) -> int:
    g = parse_graph(_read(args.graph))
    what, target = args.what, args.target
    if what == "cycle":
        verdict = validate_cycle(g, parse_cycle(_read(target)))
        ok = verdict.ok
        msg = "valid Hamiltonian cycle" if ok else verdict.message
        payload = {"ok": ok, "message": msg, "position": verdict.position}
    elif what == "pfaffian":
        res = verify_pfaffian(g, parse_orientation(_read(target), g))
        ok = res.ok
        msg = "pfaffian" if ok else f"cycle {list(res.failing_cycle)} has even overlap"
        payload = {"ok": ok, "central_cycles": res.central_cycles}
    elif what == "embedding":
        try:
            faces = parse_embedding(_read(target), g).faces(g)
            ok, msg = True, f"planar embedding with {len(faces)} faces"
        except GraphError as exc:
            ok, msg = False, str(exc)
        payload = {"ok": ok, "message": msg}
    else:
        try:
            dec = _decomposition(g, target)
            width = dec.width
            ok, msg = True, f"valid decomposition of width {width}"
        except GraphError as exc:
            ok, msg = False, str(exc)
        payload = {"ok": ok, "message": msg}
    _emit(cfg, payload, ("ok: " if ok else "fail: ") + msg)
    return EXIT_OK if ok else EXIT_ERROR


# ------------------------------------------------------------------ benchmark

def _bench_one(task: tuple[str, int, int]) -> dict:
    kind, n, seed = task
    if kind == "ahc":
        inst = gen.chorded_cycle(n, 3, seed=seed, with_embedding=False)
        g, h = inst.g, inst.cycle
        e = g.edge_id(h.order[0], h.order[1])
        st = OpStats()
        t0 = time.perf_counter()
        another_cycle(orientation_from_cycle(g, h, e, check=False), h, st)
        return {"n": n, "ops": st.ops, "seconds": time.perf_counter() - t0}
    if kind == "lollipop":
        inst = gen.prism(n // 2)
        g, h = inst.g, inst.cycle
        t0 = time.perf_counter()
        _, trace = lollipop_run(g, h, h.order[0], h.order[-1])
        return {"n": g.n, "ops": trace.step_count, "seconds": time.perf_counter() - t0}
    raise Usage(f"unknown benchmark {kind}")


def fit_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.maximum(np.asarray(ys, float), 1e-12))
    return float(np.polyfit(lx, ly, 1)[0])


def cmd_bench(cfg: RunConfig, args) -> int:
    tasks = [(args.kind, n, cfg.seed) for n in args.sizes]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]
    ns = [r["n"] for r in rows]
    payload = {"rows": rows}
    if len(rows) >= 2:
        payload["ops_slope"] = fit_slope(ns, [r["ops"] for r in rows])
        payload["time_slope"] = fit_slope(ns, [r["seconds"] for r in rows])
    lines = [f"n={r['n']} ops={r['ops']} seconds={r['seconds']:.4f}" for r in rows]
    if "ops_slope" in payload:
        lines.append(f"ops slope {payload['ops_slope']:.3f}  time slope {payload['time_slope']:.3f}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="output file or prefix")
    common.add_argument("--anchor", nargs=2, type=int, metavar=("U", "V"))
    common.add_argument("--ceiling", type=int, default=1 << 24, help="lollipop step ceiling")
    common.add_argument("--jobs", type=int, default=_default_jobs(),
                        help=f"worker processes (default from ${JOBS_ENV})")

    p = argparse.ArgumentParser(prog="pfaffham", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate an instance")
    s.add_argument("kind", choices=["cube", "cycle", "grid", "prism", "chorded-cycle", "esc-reduce"])
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_gen)

    for name, func, hlp in (("ahc", cmd_ahc, "another anchored Hamiltonian cycle"),
                            ("lollipop", cmd_lollipop, "lollipop walk on a cubic graph")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("graph")
        s.add_argument("cycle")
        if name == "ahc":
            s.add_argument("--logspace", action="store_true")
        else:
            s.add_argument("--trace", help="write the step trace here")
        s.set_defaults(func=func)

    for name, func in (("count", cmd_count), ("tsp", cmd_tsp)):
        s = sub.add_parser(name, parents=[common], help=f"{name} via decomposition DP")
        s.add_argument("graph")
        s.add_argument("--decomp", help="path (s td) or branch (s bd) decomposition file")
        s.add_argument("--orientation", help="Pfaffian orientation bit file")
        s.add_argument("--embedding", help="planar embedding; a Kasteleyn orientation is used")
        s.add_argument("--cycle", help="Hamiltonian cycle; its orientation is used")
        s.set_defaults(func=func)

    s = sub.add_parser("enumerate", parents=[common], help="all Hamiltonian cycles")
    s.add_argument("graph")
    s.add_argument("--limit", type=int, default=24, help="largest n for the plain backtracker")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("reduce", parents=[common], help="exact cover to another-cycle instance")
    s.add_argument("esc")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", parents=[common], help="check a file against a graph")
    s.add_argument("what", choices=["cycle", "pfaffian", "embedding", "decomp"])
    s.add_argument("graph")
    s.add_argument("target")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", parents=[common], help="scaling benchmark with log-log slope")
    s.add_argument("kind", choices=["ahc", "lollipop"])
    s.add_argument("--sizes", nargs="+", type=int, default=[1000, 10000, 100000])
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.cmd, [], tuple(args.anchor) if args.anchor else None,
                    args.json, args.seed, args.output, args.ceiling)
    try:
        return args.func(cfg, args)
    except (GraphError, RuntimeError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
