"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import bench as bench_mod
from . import reduction
from .embedding import parse_pg, write_pg
from .errors import FormatError, GraphError
from .generator import GenConfig, density, derive_seed, generate
from .ilp import build_model, export_lp
from .labeling import labels_from_orientation, orientation_from_labels, parse_lab, write_lab
from .layout import (
    bounding_area,
    drawing_to_json,
    polyline_drawing,
    render_svg,
    visibility_representation,
)
from .orientation import (
    heuristic_orientation,
    parse_ori,
    transitive_edges_faces,
    transitive_edges_reach,
    write_ori,
)
from .solver import SolveBudget, solve_min_transitive

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BUDGET = 3


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_pg(path: str):
    return parse_pg(_read(path))


def _budget(args) -> SolveBudget:
    return SolveBudget(
        time_limit_s=getattr(args, "time_limit_s", None),
        node_limit=getattr(args, "node_limit", None),
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.count is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        manifest = [("file", "n", "p_iv", "seed", "density")]
        for i in range(args.count):
            seed = derive_seed(args.seed_base, args.n, int(args.piv * 1000), i)
            g, s, t = generate(GenConfig(args.n, args.piv, seed))
            name = f"n{args.n}_p{args.piv:g}_s{seed}.pg"
            _write(os.path.join(args.out_dir, name), write_pg(g, s, t))
            manifest.append(
                (name, str(args.n), f"{args.piv:g}", str(seed), f"{float(density(g)):.4f}")
            )
        with open(
            os.path.join(args.out_dir, "manifest.csv"), "w", encoding="utf-8", newline=""
        ) as fh:
            csv.writer(fh, lineterminator="\n").writerows(manifest)
        print(f"wrote {args.count} instances to {args.out_dir}")
        return EXIT_OK
    g, s, t = generate(GenConfig(args.n, args.piv, args.seed))
    text = write_pg(g, s, t)
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.out} (V={g.vertex_count} E={g.edge_count})")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_orient_heur(args) -> int:
    g, s, t = _load_pg(args.graph)
    o = heuristic_orientation(g, s, t)
    tr = transitive_edges_reach(g, o)
    if args.out:
        _write(args.out, write_ori(o))
    print(f"transitive {len(tr)}")
    return EXIT_OK


def cmd_orient_opt(args) -> int:
    g, s, t = _load_pg(args.graph)
    sol = solve_min_transitive(g, s, t, _budget(args))
    o = orientation_from_labels(g, sol.labeling, s, t)
    if args.out:
        _write(args.out, write_ori(o))
    if args.lab:
        _write(args.lab, write_lab(g, sol.labeling))
    suffix = "" if sol.stats.proven else " (incumbent, budget exhausted)"
    print(f"objective {sol.objective_value}{suffix}")
    return EXIT_OK if sol.stats.proven else EXIT_BUDGET


def cmd_transitive(args) -> int:
    g, s, t = _load_pg(args.graph)
    o = parse_ori(_read(args.ori), g, s, t)
    finder = transitive_edges_faces if args.method == "faces" else transitive_edges_reach
    tr = sorted(finder(g, o))
    print(f"transitive {len(tr)}: {' '.join(map(str, tr))}")
    return EXIT_OK


def cmd_label(args) -> int:
    g, s, t = _load_pg(args.graph)
    o = parse_ori(_read(args.ori), g, s, t)
    lab = labels_from_orientation(g, o, s, t)
    text = write_lab(g, lab)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_draw(args) -> int:
    g, s, t = _load_pg(args.graph)
    o = parse_ori(_read(args.ori), g, s, t)
    vis = visibility_representation(g, o, s, t)
    drawing = polyline_drawing(vis)
    highlight = (
        frozenset(transitive_edges_reach(g, o)) if args.highlight_transitive else frozenset()
    )
    _write(args.out, render_svg(drawing, scale=args.scale, highlight=highlight))
    if args.json:
        _write(args.json, drawing_to_json(drawing))
    print(f"area {bounding_area(drawing)}")
    return EXIT_OK


def cmd_export_lp(args) -> int:
    g, s, t = _load_pg(args.graph)
    model = build_model(g, s, t)
    text = export_lp(model)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    formula = reduction.parse_cnf(_read(args.infile))
    instance = reduction.reduce_nae3sat(formula)
    text = reduction.write_nto(instance)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    clause_count = len(formula.clauses)
    print(
        f"reduced {formula.variable_count} vars, {clause_count} clauses -> "
        f"V={instance.graph.vertex_count} E={len(instance.graph.edges)}"
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.quick:
        n_list, p_list, seeds = [20, 40, 60], [0.2, 0.5, 0.8], 3
        args.time_limit_s = min(args.time_limit_s, 10.0)
    elif args.full:
        n_list = list(range(10, 101, 10)) + list(range(200, 1001, 100))
        p_list = [0.2, 0.4, 0.5, 0.6, 0.8]
        seeds = 10
    else:
        n_list = args.n_list or [50, 100, 200, 300]
        p_list = args.piv_list or [0.2, 0.5, 0.8]
        seeds = args.seeds
    records = bench_mod.run_benchmark(
        n_list,
        p_list,
        seeds,
        SolveBudget(time_limit_s=args.time_limit_s, node_limit=args.node_limit),
        seed_base=args.seed_base,
        workers=args.workers,
    )
    bench_mod.write_csv(records, args.out, strip_timing=args.strip_timing)
    ok = [r for r in records if r.status.startswith("ok")]
    mean_imp = sum(r.improvement_pct for r in ok) / max(1, len(ok))
    better = sum(1 for r in ok if r.area_better)
    print(
        f"{len(records)} instances -> {args.out}; mean improvement "
        f"{mean_imp:.1f}%, drawings smaller on {better}/{len(ok)}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storient",
        description="st-orientations of plane graphs with few transitive edges",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate random plane biconnected instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--piv", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--count", type=int, help="batch mode: instances per call")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("orient-heur", help="baseline st-orientation")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orient_heur)

    p = sub.add_parser("orient-opt", help="minimize transitive edges exactly")
    p.add_argument("graph")
    p.add_argument("--out")
    p.add_argument("--lab")
    p.add_argument("--time-limit-s", type=float)
    p.add_argument("--node-limit", type=int)
    p.set_defaults(func=cmd_orient_opt)

    p = sub.add_parser("transitive", help="list transitive edges of an orientation")
    p.add_argument("graph")
    p.add_argument("--ori", required=True)
    p.add_argument("--method", choices=("reach", "faces"), default="reach")
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("label", help="angle labeling of an orientation")
    p.add_argument("graph")
    p.add_argument("--ori", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("draw", help="visibility-based polyline drawing to SVG")
    p.add_argument("graph")
    p.add_argument("--ori", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scale", type=int, default=24)
    p.add_argument("--highlight-transitive", action="store_true")
    p.add_argument("--json")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("export-lp", help="write the labeling program in LP format")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("reduce", help="compile a NAE3SAT formula to an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="full generate/orient/draw sweep to CSV")
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--n-list", type=int, nargs="*")
    p.add_argument("--piv-list", type=float, nargs="*")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="small grid, n <= 60")
    p.add_argument("--full", action="store_true", help="the complete reference grid")
    p.add_argument("--time-limit-s", type=float, default=60.0)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--strip-timing", action="store_true")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return EXIT_OK
        return EXIT_USAGE
    try:
        return args.func(args)
    except (FormatError, GraphError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
