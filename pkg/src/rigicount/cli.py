"""Command-line workbench: every operation behind one scriptable binary.

Graphs cross this boundary as decimal integer codes plus --n; wherever a
code is expected, `-` reads a "u v" edge list from stdin instead.  Data
goes to stdout (JSON by default, CSV or an aligned table on request), logs
to stderr.  Exit codes: 0 success, 1 usage error, 2 resource budget
exceeded, 3 verification mismatch, 4 trial disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import Budget, BudgetExceededError
from .bounds import (
    FanBoundInput,
    fan_count,
    genfan_lower_bound,
    growth_rate,
    ratio_alpha_bound,
    theorem_bounds,
)
from .constructions import (
    StepSpec,
    classify_step,
    cone,
    extend,
    fan,
    glue,
    spider_split,
    vertex_split,
)
from .counting import (
    EUCLIDEAN,
    SPHERICAL,
    CountCache,
    CountModel,
    DegenerateSystemError,
    realization_count,
)
from .graphs import (
    Graph,
    canonical_code,
    decode,
    encode,
    find_embeddings,
    infer_vertex_count,
    profile,
)
from .lab import (
    class_stats,
    distribution,
    enumerate_minimally_rigid,
    factor_survey,
    fixture_tables,
    verify_certificates,
)
from .rigidity import is_minimally_2_rigid, is_minimally_d_rigid

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_MISMATCH = 3
EXIT_DISAGREEMENT = 4


class _UsageError(Exception):
    pass


def _read_edge_list(stream) -> Graph:
    edges = []
    top = 0
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise _UsageError(f"bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        top = max(top, u, v)
    return Graph(top, edges)


def _graph_arg(code_arg: str, n: int | None) -> Graph:
    if code_arg == "-":
        g = _read_edge_list(sys.stdin)
        if n is not None and n != g.n:
            g = Graph(n, g.edges)
        return g
    code = int(code_arg)
    if n is None:
        if code == 0:
            raise _UsageError("code 0 is ambiguous; pass --n")
        n = infer_vertex_count(code)
    return decode(code, n)


def _model(args) -> CountModel:
    return CountModel(args.dim, SPHERICAL if args.sphere else EUCLIDEAN)


def _emit(payload, fmt: str):
    """Stable output: insertion-ordered JSON, flat CSV, or aligned table."""
    if fmt == "json":
        print(json.dumps(payload))
        return
    rows = payload if isinstance(payload, list) else [payload]
    if not rows:
        return
    keys = list(rows[0].keys())
    if fmt == "csv":
        print(",".join(keys))
        for row in rows:
            print(",".join(str(row.get(k, "")) for k in keys))
    else:
        widths = [
            max(len(k), max(len(str(r.get(k, ""))) for r in rows)) for k in keys
        ]
        print("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
        for row in rows:
            print("  ".join(str(row.get(k, "")).ljust(w) for k, w in zip(keys, widths)))


def _budget(args) -> Budget:
    return Budget(max_basis=args.max_basis) if args.max_basis else Budget()


def _add_common(sub, dim=True):
    sub.add_argument("--n", type=int, default=None, help="vertex count of the code")
    if dim:
        sub.add_argument("--dim", type=int, default=2)
        sub.add_argument("--sphere", action="store_true")
    sub.add_argument("--trials", type=int, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", choices=("json", "csv", "table"), default="json")
    sub.add_argument("--cache", default=None, help="JSONL count cache path")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--max-basis", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rigicount",
        description="workbench for realization counts of minimally rigid graphs",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("encode", help="edge list (stdin) -> integer code")
    _add_common(s, dim=False)

    s = sp.add_parser("decode", help="integer code -> edge list")
    s.add_argument("code")
    _add_common(s, dim=False)

    s = sp.add_parser("canon", help="canonical (minimum) code of a graph")
    s.add_argument("code")
    _add_common(s, dim=False)

    s = sp.add_parser("check", help="minimal d-rigidity verdict")
    s.add_argument("code")
    _add_common(s)

    s = sp.add_parser("count", help="number of complex realizations")
    s.add_argument("code")
    _add_common(s)

    s = sp.add_parser("construct", help="apply one construction step")
    s.add_argument(
        "--kind",
        required=True,
        choices=("e0", "e1", "e2", "vsplit", "ssplit", "cone", "glue"),
    )
    s.add_argument("code")
    s.add_argument("--sites", default="", help="comma-separated site vertices")
    s.add_argument("--delete", default="", help="edges to delete, e.g. 1-2,3-4")
    s.add_argument("--vertex", type=int, default=0, help="split vertex")
    s.add_argument("--moved", default="", help="moved neighbors (splits)")
    s.add_argument("--shared", default="", help="shared neighbors (splits)")
    s.add_argument("--other", default=None, help="second graph code (glue)")
    s.add_argument("--other-n", type=int, default=None)
    s.add_argument("--pattern", default=None, help="shared subgraph code (glue)")
    s.add_argument("--pattern-n", type=int, default=None)
    _add_common(s)

    s = sp.add_parser("fan", help="glue k copies along an embedded subgraph")
    s.add_argument("code")
    s.add_argument("--pattern", required=True, help="subgraph code to glue along")
    s.add_argument("--pattern-n", type=int, default=None)
    s.add_argument("--copies", type=int, required=True)
    _add_common(s)

    s = sp.add_parser("bounds", help="evaluate bound formulas")
    s.add_argument("--theorem", default=None)
    s.add_argument("--nvertices", type=int, default=None)
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--growth", nargs=3, type=int, default=None, metavar=("LAMG", "LAMH", "DV"))
    s.add_argument("--fan-count", nargs=3, type=int, default=None, metavar=("LAMG", "LAMH", "K"))
    s.add_argument(
        "--genfan", nargs=5, type=int, default=None, metavar=("N", "V", "W", "LAMG", "LAMH")
    )
    s.add_argument("--ratio", nargs=3, type=int, default=None, metavar=("LAM", "LAMS", "DV"))
    s.add_argument("--format", choices=("json", "csv", "table"), default="json")

    s = sp.add_parser("enumerate", help="all minimally rigid graphs at one n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--mindeg", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=("json", "csv", "table", "lines"), default="lines")

    s = sp.add_parser("factors", help="extreme step factors over all base graphs")
    s.add_argument("--family", required=True)
    _add_common(s)

    s = sp.add_parser("stats", help="distribution and class statistics")
    s.add_argument("--mindeg", type=int, default=3)
    s.add_argument("--classes", action="store_true", help="floor/planar/4-div classes")
    _add_common(s)

    s = sp.add_parser("verify", help="re-check certificate fixture tables")
    s.add_argument("--table", required=True, help=f"one of {', '.join(fixture_tables())}")
    s.add_argument("--recompute-max-vars", type=int, default=13)
    _add_common(s)

    s = sp.add_parser("profile", help="structural profile of a graph")
    s.add_argument("code")
    _add_common(s, dim=False)

    return ap


def _run(args) -> int:
    cmd = args.command
    cache = CountCache(args.cache) if getattr(args, "cache", None) else CountCache()
    if cmd == "encode":
        g = _read_edge_list(sys.stdin)
        if args.n is not None:
            g = Graph(args.n, g.edges)
        print(encode(g).code)
        return EXIT_OK
    if cmd == "decode":
        g = _graph_arg(args.code, args.n)
        payload = {
            "code": encode(g).code,
            "n": g.n,
            "edges": [f"{u}-{v}" for u, v in g.sorted_edges()],
        }
        _emit(payload, args.format)
        return EXIT_OK
    if cmd == "canon":
        g = _graph_arg(args.code, args.n)
        _emit({"code": encode(g).code, "n": g.n, "canonical": canonical_code(g).code}, args.format)
        return EXIT_OK
    if cmd == "check":
        g = _graph_arg(args.code, args.n)
        if args.dim == 2:
            verdict = is_minimally_2_rigid(g)
        else:
            verdict = is_minimally_d_rigid(
                g, args.dim, trials=args.trials or 3, seed=args.seed
            )
        payload = {"status": verdict.status.value}
        if verdict.witness:
            payload["witness"] = list(verdict.witness)
        if verdict.reason:
            payload["reason"] = verdict.reason
        _emit(payload, args.format)
        return EXIT_OK
    if cmd == "count":
        g = _graph_arg(args.code, args.n)
        model = _model(args)
        result = realization_count(
            g,
            model,
            trials=args.trials,
            seed=args.seed,
            cache=cache,
            budget=_budget(args),
        )
        _emit(result.to_record(canonical_code(g).code, g.n, model), args.format)
        return EXIT_OK if result.agreement else EXIT_DISAGREEMENT
    if cmd == "construct":
        return _run_construct(args, cache)
    if cmd == "fan":
        g = _graph_arg(args.code, args.n)
        pat_n = args.pattern_n or infer_vertex_count(int(args.pattern))
        pattern = decode(int(args.pattern), pat_n)
        embs = find_embeddings(g, pattern, limit=1)
        if not embs:
            raise _UsageError("pattern does not embed into the graph")
        out = fan(g, embs[0], args.copies)
        _emit(
            {
                "code": encode(out).code,
                "n": out.n,
                "canonical": canonical_code(out).code,
            },
            args.format,
        )
        return EXIT_OK
    if cmd == "bounds":
        return _run_bounds(args)
    if cmd == "enumerate":
        codes = enumerate_minimally_rigid(args.n, args.dim, args.mindeg, jobs=args.jobs)
        if args.format == "lines":
            for c in codes:
                print(c)
        else:
            _emit([{"code": c, "n": args.n} for c in codes], args.format)
        return EXIT_OK
    if cmd == "factors":
        model = _model(args)
        survey = factor_survey(
            args.n,
            args.dim,
            model,
            args.family,
            cache=cache,
            seed=args.seed,
            trials=args.trials,
            jobs=args.jobs,
        )
        payload = []
        for tag, rec in (("min", survey.minimum), ("max", survey.maximum)):
            payload.append(
                {
                    "extreme": tag,
                    "before": rec.before,
                    "count_before": rec.count_before,
                    "after": rec.after,
                    "count_after": rec.count_after,
                    "factor": f"{float(rec.factor):.2f}",
                    "label": rec.label.name,
                }
            )
        _emit(payload, args.format)
        return EXIT_OK
    if cmd == "stats":
        model = _model(args)
        if args.classes:
            rep = class_stats(args.n, cache=cache, seed=args.seed, jobs=args.jobs)
            _emit(
                {
                    "n": rep.n,
                    "total": rep.total,
                    "floor_total": rep.floor_total,
                    "mindeg3_total": rep.mindeg3_total,
                    "mindeg3_floor": rep.mindeg3_floor,
                    "c4": rep.c4_count,
                    "planar": rep.planar_count,
                    "planar_floor": rep.planar_floor,
                },
                args.format,
            )
            return EXIT_OK
        hist = distribution(
            args.n,
            model,
            min_degree=args.mindeg,
            cache=cache,
            seed=args.seed,
            trials=args.trials,
            jobs=args.jobs,
        )
        value, hits = hist.most_frequent
        _emit(
            {
                "n": args.n,
                "space": model.space,
                "total": hist.total,
                "most_frequent": value,
                "graphs_at_most_frequent": hits,
                "distinct": hist.distinct,
                "histogram": {str(k): v for k, v in sorted(hist.values.items())},
            },
            args.format,
        )
        return EXIT_OK
    if cmd == "verify":
        reports = verify_certificates(
            args.table,
            cache=cache,
            seed=args.seed,
            recompute_max_vars=args.recompute_max_vars,
            trials=args.trials,
            jobs=args.jobs,
        )
        payload = []
        bad = 0
        for rep in reports:
            payload.append(
                {
                    "n": rep.row.n,
                    "code": str(rep.row.code),
                    "ok": rep.ok,
                    "checks": ",".join(k for k, v in rep.checks.items() if not v) or "all",
                    "recomputed": rep.recomputed,
                }
            )
            bad += 0 if rep.ok else 1
        _emit(payload, args.format)
        return EXIT_MISMATCH if bad else EXIT_OK
    if cmd == "profile":
        g = _graph_arg(args.code, args.n)
        pr = profile(g)
        _emit(
            {
                "n": pr.n,
                "min_degree": pr.min_degree,
                "max_degree": pr.max_degree,
                "degree3_count": pr.degree3_count,
                "adjacent_degree3": pr.adjacent_degree3,
                "has_triangle": pr.has_triangle,
                "planar": pr.planar,
                "hamiltonian": pr.hamiltonian,
                "chromatic_number": pr.chromatic_number,
                "degree3_open_neighborhoods": pr.degree3_open_neighborhoods,
            },
            args.format,
        )
        return EXIT_OK
    raise _UsageError(f"unhandled command {cmd}")


def _parse_edges(text: str) -> list[tuple[int, int]]:
    out = []
    if text:
        for part in text.split(","):
            u, v = part.split("-")
            out.append((int(u), int(v)))
    return out


def _parse_vertices(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",")) if text else ()


def _run_construct(args, cache) -> int:
    g = _graph_arg(args.code, args.n)
    kind = args.kind
    if kind in ("e0", "e1", "e2"):
        spec = StepSpec.extension(
            args.dim, _parse_vertices(args.sites), _parse_edges(args.delete)
        )
        out = extend(g, spec)
        label = classify_step(g, spec).name
    elif kind in ("vsplit", "ssplit"):
        splitter = vertex_split if kind == "vsplit" else spider_split
        out = splitter(
            g,
            args.vertex,
            _parse_vertices(args.moved),
            _parse_vertices(args.shared),
            args.dim,
        )
        label = "VSplit" if kind == "vsplit" else "SSplit"
    elif kind == "cone":
        out = cone(g)
        label = "Cone"
    elif kind == "glue":
        if args.other is None or args.pattern is None:
            raise _UsageError("glue needs --other and --pattern")
        other = decode(
            int(args.other), args.other_n or infer_vertex_count(int(args.other))
        )
        pattern = decode(
            int(args.pattern), args.pattern_n or infer_vertex_count(int(args.pattern))
        )
        e1 = find_embeddings(g, pattern, limit=1)
        e2 = find_embeddings(other, pattern, limit=1)
        if not e1 or not e2:
            raise _UsageError("pattern does not embed into both graphs")
        out = glue(g, other, e1[0], e2[0])
        label = "Glue"
    else:
        raise _UsageError(f"unknown kind {kind}")
    _emit(
        {
            "code": encode(out).code,
            "n": out.n,
            "canonical": canonical_code(out).code,
            "label": label,
        },
        args.format,
    )
    return EXIT_OK


def _run_bounds(args) -> int:
    fmt = args.format
    if args.theorem:
        if args.nvertices is None:
            raise _UsageError("--theorem needs --nvertices")
        value = theorem_bounds(args.theorem, args.nvertices, args.dim)
        _emit(
            {"theorem": args.theorem, "n": args.nvertices, "value": str(value)}, fmt
        )
        return EXIT_OK
    if args.growth:
        lam_g, lam_h, dv = args.growth
        gr = growth_rate(lam_g, lam_h, dv)
        _emit(
            {"lam_g": lam_g, "lam_h": lam_h, "dv": dv, "growth": gr.display}, fmt
        )
        return EXIT_OK
    if args.fan_count:
        lam_g, lam_h, k = args.fan_count
        _emit({"value": str(fan_count(lam_g, lam_h, k))}, fmt)
        return EXIT_OK
    if args.genfan:
        n, v, w, lam_g, lam_h = args.genfan
        value = genfan_lower_bound(FanBoundInput(n, v, w, lam_g, lam_h))
        _emit({"n": n, "value": str(value)}, fmt)
        return EXIT_OK
    if args.ratio:
        lam, lam_s, dv = args.ratio
        value, radical = ratio_alpha_bound(lam, lam_s, dv)
        _emit(
            {
                "value": str(value.quantize(__import__("decimal").Decimal("0.00001"))),
                "radical": str(radical) if radical else None,
            },
            fmt,
        )
        return EXIT_OK
    raise _UsageError("bounds needs one of --theorem/--growth/--fan-count/--genfan/--ratio")


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _run(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, DegenerateSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
