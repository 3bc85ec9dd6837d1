from collections import Counter

import pytest

import storient as st
from storient.errors import NotAdmissible
from storient.ilp import build_model, export_lp
from storient.labeling import orientation_from_labels
from storient.reduction import min_transitive_exhaustive
from storient.solver import SolveBudget, Solution, solve_min_transitive, verify_solution
from storient.generator import GenConfig, generate

from .util import parse_lp, solve_lp_with_milp


def constraint_kinds(model):
    return Counter(c.name.split("_")[0] for c in model.constraints)


def test_triangle_model_counts(triangle):
    g, s, t = triangle
    m = build_model(g, s, t)
    assert len(m.x_vars) == 4  # v twice, s once, t once
    assert len(m.y_vars) == 3
    assert len(m.z_vars) == 3
    assert constraint_kinds(m) == Counter(
        {"c2": 1, "c3": 1, "c4": 1, "c5": 1, "c6": 3, "c7": 3}
    )


def test_four_cycle_model_counts(four_cycle):
    g, s, t = four_cycle
    m = build_model(g, s, t)
    assert len(m.x_vars) == 6  # 2 + 2 + 1 + 1
    assert len(m.y_vars) == 4
    assert len(m.z_vars) == 4


def test_generated_model_counts_match_closed_form(gen):
    g, s, t = gen(100, 0.5, 13)
    m = build_model(g, s, t)
    # recount from the embedding, independently of the model builder
    x_expected = sum(
        g.degree(v) for v in range(g.vertex_count) if v not in (s, t)
    )
    for pole in (s, t):
        x_expected += sum(
            1
            for a in g.vertex_angle_ids[pole]
            if g.angles[a].face_id != g.outer_face_id
        )
    y_expected = sum(f.degree for f in g.faces if not f.is_outer)
    assert len(m.x_vars) == x_expected
    assert len(m.y_vars) == y_expected
    assert len(m.z_vars) == g.edge_count


def test_model_requires_admissible():
    edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]
    rotations = [[0, 2], [1, 0], [2, 1, 3, 5], [4, 3], [5, 4]]
    g = st.build_embedding(5, edges, rotations)
    with pytest.raises(NotAdmissible):
        build_model(g, 0, 1)


def test_lp_export_triangle(triangle):
    g, s, t = triangle
    text = export_lp(build_model(g, s, t))
    assert " obj: z_e0 + z_e1 + z_e2" in text.splitlines()
    for section in ("Minimize", "Subject To", "Bounds", "Generals", "Binaries", "End"):
        assert section in text.splitlines()
    # byte stability
    assert export_lp(build_model(g, s, t)) == text


def test_lp_row_count_matches_model(gen):
    g, s, t = gen(30, 0.5, 8)
    m = build_model(g, s, t)
    parsed = parse_lp(export_lp(m))
    assert len(parsed.constraints) == len(m.constraints)
    assert set(parsed.objective) == set(m.z_vars)
    assert parsed.binaries == set(m.x_vars) | set(m.y_vars)
    assert parsed.generals == set(m.z_vars)


# -- solver ---------------------------------------------------------------------


def test_solver_triangle(triangle):
    g, s, t = triangle
    sol = solve_min_transitive(g, s, t)
    assert sol.objective_value == 1
    assert sol.stats.proven
    assert verify_solution(g, s, t, sol)


def test_solver_four_cycle(four_cycle):
    g, s, t = four_cycle
    sol = solve_min_transitive(g, s, t)
    assert sol.objective_value == 0
    assert verify_solution(g, s, t, sol)


def test_solver_single_edge(single_edge):
    g, s, t = single_edge
    sol = solve_min_transitive(g, s, t)
    assert sol.objective_value == 0
    assert verify_solution(g, s, t, sol)


def test_solver_matches_exhaustive_minimum(gen):
    for i in range(30):
        n = 5 + (i % 8)
        p = (0.2, 0.5, 0.8)[i % 3]
        g, s, t = gen(n, p, 7000 + i)
        sol = solve_min_transitive(g, s, t)
        exact, _, proven = min_transitive_exhaustive(g, s, t)
        assert proven and sol.stats.proven
        assert sol.objective_value == exact


def test_solver_never_beats_validity(gen):
    """Objective is the reachability count of the decoded orientation and
    never exceeds the baseline."""
    for seed in range(6):
        g, s, t = gen(40, 0.5, 900 + seed)
        heur = st.heuristic_orientation(g, s, t)
        tr_heur = len(st.transitive_edges_reach(g, heur))
        sol = solve_min_transitive(g, s, t)
        assert sol.objective_value <= tr_heur
        assert verify_solution(g, s, t, sol)
        o = orientation_from_labels(g, sol.labeling, s, t)
        # z binariness: the committed set is a set of edges
        assert len(st.transitive_edges_reach(g, o)) == sol.objective_value


def test_verify_rejects_tampered_objective(triangle):
    g, s, t = triangle
    sol = solve_min_transitive(g, s, t)
    tampered = Solution(sol.labeling, sol.objective_value + 1, sol.stats)
    assert not verify_solution(g, s, t, tampered)


def test_budget_exhaustion_returns_incumbent(gen):
    g, s, t = gen(60, 0.5, 31)
    sol = solve_min_transitive(g, s, t, SolveBudget(node_limit=1))
    assert not sol.stats.proven
    assert verify_solution(g, s, t, sol)
    heur = st.heuristic_orientation(g, s, t)
    assert sol.objective_value <= len(st.transitive_edges_reach(g, heur))


def test_solver_deterministic(gen):
    # a node budget keeps the cutoff deterministic, unlike wall clock
    budget = SolveBudget(node_limit=40_000)
    g, s, t = gen(40, 0.2, 17)
    a = solve_min_transitive(g, s, t, budget)
    b = solve_min_transitive(g, s, t, budget)
    assert a.labeling.labels == b.labeling.labels
    assert a.objective_value == b.objective_value
    assert a.stats.nodes == b.stats.nodes


@pytest.mark.skipif(
    solve_lp_with_milp(parse_lp("Minimize\n obj: x\nSubject To\n c: x >= 1\nBounds\nGenerals\n x\nBinaries\nEnd\n")) is None,
    reason="scipy not available",
)
def test_external_solver_agrees(gen):
    for seed in range(5):
        g, s, t = gen(20, 0.5, 400 + seed)
        sol = solve_min_transitive(g, s, t)
        external = solve_lp_with_milp(parse_lp(export_lp(build_model(g, s, t))))
        assert external == sol.objective_value
