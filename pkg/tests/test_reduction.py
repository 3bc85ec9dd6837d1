import itertools

import pytest

import storient as st
from storient import reduction as red
from storient.errors import FormatError, InvalidK, TooLarge


def test_fork_degrees():
    fork = red.build_fork()
    deg = {i: 0 for i in range(6)}
    for _name, (u, v) in fork.internal_edges:
        deg[u] += 1
        deg[v] += 1
    for _name, anchor in fork.stubs:
        deg[anchor] += 1
    assert deg == {fork.a: 4, fork.p: 2, fork.q: 2, fork.v: 3, fork.w: 3, fork.z: 3}


def fork_harness():
    b = red.GadgetBuilder()
    m1, m2, m3 = b.anchored_middle(), b.anchored_middle(), b.anchored_middle()
    e1, w, z = b.add_fork(m1)
    e9 = b.edge(w, m2)
    e10 = b.edge(z, m3)
    return b, (m1, e1, w, e9, z, e10)


def test_fork_lemma_enumeration():
    b, (m1, e1, w, e9, z, e10) = fork_harness()
    g = b.graph()
    sols = red.enumerate_nontransitive(g, b.s, b.t)
    patterns = set()
    full = set()
    for o in sols:
        entering = o.direction[e1][0] == m1
        out9 = o.direction[e9][0] == w
        out10 = o.direction[e10][0] == z
        patterns.add((entering, out9, out10))
        full.add(o.direction[e1 - 7 : e1 + 1] + (o.direction[e9], o.direction[e10]))
    # exactly the two orientations: outputs exit iff the input enters
    assert patterns == {(True, True, True), (False, False, False)}
    assert len(full) == 2


def test_variable_gadget_classes():
    b = red.GadgetBuilder()
    xp, xbp = red._add_variable(b, "x")
    ex = b.edge(xp, b.anchored_middle())
    exb = b.edge(xbp, b.anchored_middle())
    sols = red.enumerate_nontransitive(b.graph(), b.s, b.t)
    classes = {
        (o.direction[ex][0] == xp, o.direction[exb][0] == xbp) for o in sols
    }
    # x and the negation always leave in opposite directions
    assert classes == {(True, False), (False, True)}
    assert len(sols) == 2


def test_split_k2_is_one_fork():
    split = red.build_split(2)
    assert len(split.output_ports) == 2
    # one fork: 6 internal vertices plus the feed vertex and s, t
    assert split.graph.vertex_count == 2 + 1 + 6


def test_split_rejects_k1():
    with pytest.raises(InvalidK):
        red.build_split(1)


def test_split_s3_forces_all_outputs():
    b = red.GadgetBuilder()
    feed = b.vertex()
    b.edge(b.s, feed)
    outs = red._add_split(b, 3, feed, "x")
    out_edges = [b.edge(p, b.anchored_middle()) for p in outs]
    sols = red.enumerate_nontransitive(b.graph(), b.s, b.t)
    assert sols
    combos = {
        tuple(o.direction[e][0] == p for e, p in zip(out_edges, outs))
        for o in sols
    }
    assert combos == {(True, True, True)}  # never a mixed orientation


# -- reduction shape -------------------------------------------------------------


def test_reduce_single_clause_counts():
    f = red.Nae3SatFormula(3, ((1, 2, 3),))
    inst = red.reduce_nae3sat(f)
    # 3 variable gadgets, no splits, one clause vertex:
    # each variable: 2 paths x 3 inner vertices + 2 forks x 6 vertices = 18
    # plus 3 unused negations parked on fresh 4-paths (3 vertices each)
    expected_v = 2 + 3 * 18 + 1 + 3 * 3
    assert inst.graph.vertex_count == expected_v
    # edges: per variable 8 path + 14 fork + 2 fork inputs + 1 link = 25;
    # plus per unused negation 4 path + 1 attach; plus 3 literal edges
    expected_e = 3 * 25 + 3 * 5 + 3
    assert len(inst.graph.edges) == expected_e
    assert st.is_biconnected(inst.graph.vertex_count, list(inst.graph.edges))


def test_reduce_triple_occurrence_uses_split():
    f = red.Nae3SatFormula(1, ((1, 1, 1),))
    inst = red.reduce_nae3sat(f)
    roles = dict(inst.roles)
    assert any(r.startswith("split:+1") for r in roles.values())
    # clause vertex has degree 3
    deg = {}
    for u, v in inst.graph.edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    lit_edges = [e for e, r in roles.items() if r.startswith("lit:")]
    assert len(lit_edges) == 3
    clause_vertex = inst.graph.edges[lit_edges[0]][1]
    assert deg[clause_vertex] == 3


# -- decision procedure -----------------------------------------------------------


def test_nto_triangle_unsat(triangle):
    g, s, t = triangle
    res = red.nto_decide(g, s, t)
    assert res.status == "unsat"


def test_nto_four_cycle_sat(four_cycle):
    g, s, t = four_cycle
    res = red.nto_decide(g, s, t)
    assert res.status == "sat"
    o = res.orientation
    assert st.validate_st_orientation(g, o, s, t).ok
    assert not st.transitive_edges_reach(g, o)


def test_nto_budget():
    g, s, t = (lambda b: (b.graph(), b.s, b.t))(_make_budget_graph())
    res = red.nto_decide(g, s, t, red.SearchBudget(node_limit=1))
    assert res.status in ("budget", "sat", "unsat")


def _make_budget_graph():
    b = red.GadgetBuilder()
    xp, xbp = red._add_variable(b, "x")
    b.edge(xp, b.anchored_middle())
    b.edge(xbp, b.anchored_middle())
    return b


def test_theorem_spot_checks():
    cases = [
        ((1, ((1, 1, 1),)), False),
        ((1, ((1, 1, -1),)), True),
        ((3, ((1, 2, 3),)), True),
    ]
    for (nv, clauses), expected in cases:
        f = red.Nae3SatFormula(nv, clauses)
        assert red.nae3sat_brute(f) is expected
        inst = red.reduce_nae3sat(f)
        res = red.nto_decide(
            inst.graph, inst.s, inst.t, red.SearchBudget(time_limit_s=120)
        )
        assert res.status == ("sat" if expected else "unsat")
        if res.status == "sat":
            assert st.validate_st_orientation(
                inst.graph, res.orientation, inst.s, inst.t
            ).ok
            assert not st.transitive_edges_reach(inst.graph, res.orientation)


def test_nae3sat_brute_too_large():
    with pytest.raises(TooLarge):
        red.nae3sat_brute(red.Nae3SatFormula(26, ((1, 2, 3),)))


def test_min_transitive_exhaustive_triangle(triangle):
    g, s, t = triangle
    value, witness, proven = red.min_transitive_exhaustive(g, s, t)
    assert (value, proven) == (1, True)
    assert len(st.transitive_edges_reach(g, witness)) == 1


# -- cnf / dump formats ------------------------------------------------------------


def test_cnf_roundtrip():
    f = red.Nae3SatFormula(3, ((1, -2, 3), (2, 2, -1)))
    text = red.write_cnf(f)
    f2 = red.parse_cnf(text)
    assert f2 == f


def test_cnf_rejects_bad_input():
    with pytest.raises(FormatError):
        red.parse_cnf("p nae3sat 2 1\n1 2\n")
    with pytest.raises(FormatError):
        red.parse_cnf("1 2 3\n")


def test_nto_dump_format():
    f = red.Nae3SatFormula(1, ((1, 1, -1),))
    inst = red.reduce_nae3sat(f)
    text = red.write_nto(inst)
    head = text.splitlines()[0].split()
    assert head[2] == "nonplanar"
    assert int(head[0]) == inst.graph.vertex_count
    assert text.splitlines()[-1] == f"st: {inst.s} {inst.t}"
