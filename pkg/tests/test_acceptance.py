"""Acceptance criteria, one test per criterion.

Each test prints a single PASS line after its assertions hold, so running
``pytest -s tests/test_acceptance.py`` gives a one-line verdict per
criterion.  The sweep-based criteria share one session fixture; the whole
module is tagged with the ``acceptance`` marker and takes tens of minutes
on two cores (the optimizer gets a 60 s budget per sweep instance).
"""

import itertools
import os
import time

import pytest

import storient as st
from storient import reduction as red
from storient.bench import run_benchmark
from storient.generator import GenConfig, generate, sample_stats
from storient.ilp import build_model, export_lp
from storient.labeling import labels_from_orientation, orientation_from_labels
from storient.layout import find_crossings, polyline_drawing, visibility_representation
from storient.solver import SolveBudget, solve_min_transitive, verify_solution

from .util import parse_lp, random_st_orientation, solve_lp_with_milp

pytestmark = pytest.mark.acceptance

_WORKERS = min(2, os.cpu_count() or 1)


def _report(criterion: int, text: str) -> None:
    print(f"\nACCEPTANCE {criterion}: PASS - {text}")


# -- shared sweep --------------------------------------------------------------


@pytest.fixture(scope="session")
def sweep_records():
    return run_benchmark(
        [100, 200, 300],
        [0.2, 0.5, 0.8],
        10,
        SolveBudget(time_limit_s=60),
        seed_base=0,
        workers=_WORKERS,
        check_drawings=True,
    )


@pytest.fixture(scope="session")
def small_solutions():
    """Criterion 1 instances with solver outputs, reused by criterion 3."""
    out = []
    for i in range(200):
        n = 5 + (i % 8)
        p = (0.2, 0.5, 0.8)[i % 3]
        g, s, t = generate(GenConfig(n, p, 50_000 + i))
        sol = solve_min_transitive(g, s, t)
        out.append((g, s, t, sol))
    return out


def test_criterion_01_oracle_optimality(small_solutions):
    t0 = time.monotonic()
    for g, s, t, sol in small_solutions:
        exact, _witness, proven = red.min_transitive_exhaustive(g, s, t)
        assert proven and sol.stats.proven
        assert sol.objective_value == exact
    elapsed = time.monotonic() - t0
    assert elapsed < 600
    _report(1, f"200 instances match the exhaustive minimum ({elapsed:.0f}s)")


def test_criterion_02_characterization_equivalence():
    checked = 0
    for i in range(450):
        n = 6 + (i * 7) % 75
        p = (0.2, 0.5, 0.8)[i % 3]
        g, s, t = generate(GenConfig(n, p, 90_000 + i))
        o = random_st_orientation(g, s, t, i)
        assert st.transitive_edges_faces(g, o) == st.transitive_edges_reach(g, o)
        checked += 1
    for i in range(50):
        n = 150 if i % 2 else 300
        g, s, t = generate(GenConfig(n, (0.2, 0.5, 0.8)[i % 3], 95_000 + i))
        o = random_st_orientation(g, s, t, i)
        assert st.transitive_edges_faces(g, o) == st.transitive_edges_reach(g, o)
        checked += 1
    _report(2, f"face and reachability methods agree on {checked} orientations")


def test_criterion_03_labeling_roundtrips(small_solutions):
    count = 0
    for g, s, t, sol in small_solutions:
        # roundtrip A on the solver output
        o = orientation_from_labels(g, sol.labeling, s, t)
        assert labels_from_orientation(g, o, s, t).labels == sol.labeling.labels
        # roundtrip B on the baseline orientation
        ho = st.heuristic_orientation(g, s, t)
        lab = labels_from_orientation(g, ho, s, t)
        assert orientation_from_labels(g, lab, s, t).direction == ho.direction
        count += 1
    _report(3, f"roundtrips A and B hold on {count} solver and baseline pairs")


def test_criterion_04_lemma_validation():
    t0 = time.monotonic()
    # fork inside a harness of three anchored s-t paths
    b = red.GadgetBuilder()
    m1, m2, m3 = b.anchored_middle(), b.anchored_middle(), b.anchored_middle()
    e1, w, z = b.add_fork(m1)
    e9, e10 = b.edge(w, m2), b.edge(z, m3)
    sols = red.enumerate_nontransitive(b.graph(), b.s, b.t)
    patterns = {
        (
            o.direction[e1][0] == m1,
            o.direction[e9][0] == w,
            o.direction[e10][0] == z,
        )
        for o in sols
    }
    full = {tuple(o.direction) for o in sols}
    assert patterns == {(True, True, True), (False, False, False)}
    assert len(full) == 2

    # variable gadget: outputs oppositely directed and nothing else
    b = red.GadgetBuilder()
    xp, xbp = red._add_variable(b, "x")
    ex, exb = b.edge(xp, b.anchored_middle()), b.edge(xbp, b.anchored_middle())
    sols = red.enumerate_nontransitive(b.graph(), b.s, b.t)
    classes = {(o.direction[ex][0] == xp, o.direction[exb][0] == xbp) for o in sols}
    assert classes == {(True, False), (False, True)}

    # split with three outputs: entering input forces all outputs out
    b = red.GadgetBuilder()
    feed = b.vertex()
    b.edge(b.s, feed)
    outs = red._add_split(b, 3, feed, "x")
    out_edges = [b.edge(p, b.anchored_middle()) for p in outs]
    sols = red.enumerate_nontransitive(b.graph(), b.s, b.t)
    assert sols
    combos = {
        tuple(o.direction[e][0] == p for e, p in zip(out_edges, outs)) for o in sols
    }
    assert combos == {(True, True, True)}
    elapsed = time.monotonic() - t0
    assert elapsed < 300
    _report(4, f"fork, variable and split classes are exactly the stated ones ({elapsed:.0f}s)")


def _all_small_formulas():
    for nv in (1, 2):
        literals = [i for v in range(1, nv + 1) for i in (v, -v)]
        clauses = sorted(
            set(tuple(sorted(c)) for c in itertools.combinations_with_replacement(literals, 3))
        )
        for c in clauses:
            yield red.Nae3SatFormula(nv, (c,))
        for c1, c2 in itertools.combinations_with_replacement(clauses, 2):
            yield red.Nae3SatFormula(nv, (c1, c2))


def test_criterion_05_theorem_at_desk_scale():
    formulas = list(_all_small_formulas())
    formulas.append(red.Nae3SatFormula(1, ((1, 1, 1),)))
    formulas.append(red.Nae3SatFormula(3, ((1, 2, 3),)))
    agree = 0
    for formula in formulas:
        expected = red.nae3sat_brute(formula)
        inst = red.reduce_nae3sat(formula)
        res = red.nto_decide(
            inst.graph, inst.s, inst.t, red.SearchBudget(time_limit_s=300)
        )
        assert res.status != "budget", f"budget exhausted on {formula}"
        assert (res.status == "sat") is expected, f"mismatch on {formula}"
        if res.status == "sat":
            assert st.validate_st_orientation(
                inst.graph, res.orientation, inst.s, inst.t
            ).ok
            assert not st.transitive_edges_reach(inst.graph, res.orientation)
        agree += 1
    _report(5, f"decision agrees with brute force on {agree} formulas")


def test_criterion_06_density_table():
    targets = {0.2: 2.63, 0.5: 1.80, 0.8: 1.24}
    report = []
    for p_iv, expected in targets.items():
        stats = sample_stats(1000, p_iv, list(range(10)))
        avg = float(stats.avg)
        assert abs(avg - expected) <= 0.08, (p_iv, avg, expected)
        report.append(f"p={p_iv}: {avg:.3f} vs {expected}")
    _report(6, "; ".join(report))


def test_criterion_07_improvement_reproduction(sweep_records):
    records = sweep_records
    assert len(records) == 90
    assert all(not r.status.startswith("error") for r in records)
    # (a) never worse than the baseline
    assert all(r.tr_opt <= r.tr_heur for r in records)
    # (b) overall mean within the stated band
    mean = sum(r.improvement_pct for r in records) / len(records)
    assert 25.0 <= mean <= 50.0, mean
    # (c) sparse slice
    sparse = [r for r in records if r.p_iv == 0.8 and r.n >= 200]
    sparse_mean = sum(r.improvement_pct for r in sparse) / len(sparse)
    assert sparse_mean >= 30.0, sparse_mean
    _report(
        7,
        f"trOpt <= trHeur on 90/90; mean improvement {mean:.1f}% in [25,50]; "
        f"sparse slice {sparse_mean:.1f}% >= 30%",
    )


def test_criterion_08_area_effect(sweep_records):
    records = sweep_records
    assert all(r.status != "crossing-failed" for r in records)
    better = sum(1 for r in records if r.area_better)
    assert better * 2 > len(records), f"only {better}/{len(records)} smaller"
    _report(
        8,
        f"optimized drawings are smaller on {better}/{len(records)} instances; "
        f"all 180 drawings crossing-free",
    )


def test_criterion_09_solver_budget():
    proven = 0
    verified = 0
    for seed in range(10):
        g, s, t = generate(GenConfig(100, 0.5, seed))
        t0 = time.monotonic()
        sol = solve_min_transitive(g, s, t, SolveBudget(time_limit_s=60))
        elapsed = time.monotonic() - t0
        assert elapsed <= 75  # budget plus bookkeeping slack
        assert verify_solution(g, s, t, sol)
        verified += 1
        proven += bool(sol.stats.proven)
        # a budget-exhausted run must still return a verified incumbent,
        # which the assertion above established
    assert verified == 10
    _report(
        9,
        f"10/10 instances verified within the 60s budget; "
        f"{proven}/10 solved to proven optimality",
    )


def test_criterion_10_lp_export():
    scipy_available = (
        solve_lp_with_milp(
            parse_lp(
                "Minimize\n obj: x\nSubject To\n c: x >= 1\nBounds\nGenerals\n x\nBinaries\nEnd\n"
            )
        )
        is not None
    )
    matched = 0
    for i in range(20):
        n = 10 + (i % 5) * 5
        g, s, t = generate(GenConfig(n, (0.2, 0.5, 0.8)[i % 3], 70_000 + i))
        model = build_model(g, s, t)
        text = export_lp(model)
        parsed = parse_lp(text)  # the grammar check
        assert len(parsed.constraints) == len(model.constraints)
        assert parsed.generals == set(model.z_vars)
        assert parsed.binaries == set(model.x_vars) | set(model.y_vars)
        if scipy_available:
            external = solve_lp_with_milp(parsed)
            internal = solve_min_transitive(g, s, t).objective_value
            assert external == internal, (i, external, internal)
            matched += 1
    suffix = (
        f"external optimum matches on {matched}/20"
        if scipy_available
        else "external solver not present; grammar checks only"
    )
    _report(10, f"20 exports parse under the LP grammar; {suffix}")
