"""Benchmark sweep: generate, orient both ways, draw both ways, record.

One record per (n, p_iv, seed): the baseline orientation and the optimizer
run on the same instance, both drawings are measured, and the row carries
the seed so any line of the CSV can be reproduced in isolation.  Failures
of a single instance are recorded in the status column and never abort the
sweep.  A bounded process pool fans instances out; rows are merged in grid
order regardless of completion order.
"""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .generator import GenConfig, density, derive_seed, generate
from .labeling import orientation_from_labels
from .layout import (
    bounding_area,
    find_crossings,
    polyline_drawing,
    visibility_representation,
)
from .orientation import (
    heuristic_orientation,
    improvement_percent,
    transitive_edges_reach,
)
from .solver import SolveBudget, solve_min_transitive, verify_solution

CSV_SCHEMA = "storient-bench-1"
WORKERS_ENV = "STORIENT_WORKERS"


@dataclass(frozen=True)
class BenchRecord:
    instance_id: str
    n: int
    p_iv: float
    seed: int
    density: float
    tr_heur: int
    tr_opt: int
    improvement_pct: float
    area_heur: int
    area_opt: int
    area_better: bool
    solve_ms: float
    nodes: int
    proven: bool
    status: str


def bench_instance(
    n: int,
    p_iv: float,
    seed: int,
    budget: SolveBudget | None = None,
    *,
    check_drawings: bool = False,
) -> BenchRecord:
    """Run the full pipeline on one generated instance."""
    instance_id = f"n{n}_p{p_iv:g}_s{seed}"
    try:
        g, s, t = generate(GenConfig(n, p_iv, seed))
        dens = float(density(g))
        heur = heuristic_orientation(g, s, t)
        tr_heur = len(transitive_edges_reach(g, heur))
        t0 = time.monotonic()
        sol = solve_min_transitive(g, s, t, budget)
        solve_ms = (time.monotonic() - t0) * 1000.0
        status = "ok" if verify_solution(g, s, t, sol) else "verify-failed"
        opt = orientation_from_labels(g, sol.labeling, s, t)
        drawing_heur = polyline_drawing(visibility_representation(g, heur, s, t))
        drawing_opt = polyline_drawing(visibility_representation(g, opt, s, t))
        area_heur = bounding_area(drawing_heur)
        area_opt = bounding_area(drawing_opt)
        if check_drawings and (
            find_crossings(drawing_heur) or find_crossings(drawing_opt)
        ):
            status = "crossing-failed"
        return BenchRecord(
            instance_id=instance_id,
            n=n,
            p_iv=p_iv,
            seed=seed,
            density=dens,
            tr_heur=tr_heur,
            tr_opt=sol.objective_value,
            improvement_pct=float(improvement_percent(tr_heur, sol.objective_value)),
            area_heur=area_heur,
            area_opt=area_opt,
            area_better=area_opt < area_heur,
            solve_ms=solve_ms,
            nodes=sol.stats.nodes,
            proven=sol.stats.proven,
            status=status if sol.stats.proven else f"{status};budget",
        )
    except Exception as exc:  # per-instance failures must not kill the sweep
        return BenchRecord(
            instance_id=instance_id,
            n=n,
            p_iv=p_iv,
            seed=seed,
            density=0.0,
            tr_heur=0,
            tr_opt=0,
            improvement_pct=0.0,
            area_heur=0,
            area_opt=0,
            area_better=False,
            solve_ms=0.0,
            nodes=0,
            proven=False,
            status=f"error:{type(exc).__name__}",
        )


def _bench_cell(args) -> BenchRecord:
    n, p_iv, seed, time_limit, node_limit, check = args
    return bench_instance(
        n,
        p_iv,
        seed,
        SolveBudget(time_limit_s=time_limit, node_limit=node_limit),
        check_drawings=check,
    )


def run_benchmark(
    n_list: list[int],
    p_iv_list: list[float],
    seeds_per_cell: int,
    budget: SolveBudget | None = None,
    *,
    seed_base: int = 0,
    workers: int | None = None,
    check_drawings: bool = False,
) -> list[BenchRecord]:
    """Sweep the grid; one record per (n, p_iv, derived seed)."""
    budget = budget or SolveBudget(time_limit_s=60.0)
    jobs = []
    for n in sorted(n_list):
        for p_iv in sorted(p_iv_list):
            for rep in range(seeds_per_cell):
                seed = derive_seed(seed_base, n, int(round(p_iv * 1000)), rep)
                jobs.append(
                    (n, p_iv, seed, budget.time_limit_s, budget.node_limit, check_drawings)
                )
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "0")) or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_bench_cell, jobs))
    else:
        records = [_bench_cell(j) for j in jobs]
    records.sort(key=lambda r: (r.n, r.p_iv, r.instance_id))
    return records


def records_to_csv(records: list[BenchRecord], *, strip_timing: bool = False) -> str:
    """Render records; strip_timing zeroes the wall-clock column so reruns
    with identical seeds are byte-identical."""
    buf = io.StringIO()
    buf.write(f"# {CSV_SCHEMA}\n")
    names = [f.name for f in fields(BenchRecord)]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in records:
        row = []
        for name in names:
            value = getattr(r, name)
            if name == "solve_ms":
                value = 0.0 if strip_timing else round(value, 3)
            elif name in ("improvement_pct", "density"):
                value = f"{value:.4f}"
            row.append(value)
        writer.writerow(row)
    return buf.getvalue()


def write_csv(
    records: list[BenchRecord], path: str, *, strip_timing: bool = False
) -> None:
    """Atomic write: render fully, then replace the target."""
    text = records_to_csv(records, strip_timing=strip_timing)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
