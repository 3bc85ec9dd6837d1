"""Gadget reductions from NAE3SAT to non-transitive st-orientation, plus a
backtracking decision procedure for the target problem.

The building block is a fork: six vertices a, p, q, v, w, z wired so that
its three boundary edges behave like a signal splitter.  Whenever the whole
graph carries a non-transitive st-orientation, the two output edges (at w
and at z) leave the fork if and only if the input edge (at a) enters it.
A variable gadget couples two forks back to back through two length-4 s-t
paths, which makes its two output edges always point in opposite ways; a
split gadget chains forks to fan one signal out to several clauses; a
clause gadget is a single vertex, which cannot be a source or a sink, so
each clause sees at least one incoming (true) and one outgoing (false)
literal.

The decision procedure orients edges one at a time while maintaining
reachability bitsets.  It prunes directed cycles, interior sources and
sinks, and any state in which a (directed or still undirected) edge has its
endpoints connected by another directed path, which covers both the
degree-2 chain rule and the chord rule.  The same engine, with the
transitivity pruning replaced by a bound on the transitive-edge count,
exhaustively minimizes over all st-orientations of small graphs and serves
as the oracle for the exact optimizer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import FormatError, InvalidK, TooLarge
from .orientation import StOrientation, transitive_edges_reach


@dataclass(frozen=True)
class SimpleGraph:
    """Bare adjacency view; not necessarily planar."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Nae3SatFormula:
    variable_count: int
    clauses: tuple[tuple[int, int, int], ...]  # signed 1-based literals

    def __post_init__(self) -> None:
        for c in self.clauses:
            if len(c) != 3 or any(
                lit == 0 or abs(lit) > self.variable_count for lit in c
            ):
                raise FormatError(f"bad clause {c}")


@dataclass(frozen=True)
class NtoInstance:
    graph: SimpleGraph
    s: int
    t: int
    roles: tuple[tuple[int, str], ...] = ()

    def role_of(self, edge: int) -> str | None:
        return dict(self.roles).get(edge)


@dataclass(frozen=True)
class ForkGadget:
    """The fixed fork topology, with local vertex ids 0..5.

    Edge names follow the splitter wiring: the input side hangs off a, the
    outputs off w and z.  p and q are the interior degree-2 relays.
    """

    a: int = 0
    p: int = 1
    q: int = 2
    v: int = 3
    w: int = 4
    z: int = 5
    # internal edges by name
    internal_edges: tuple[tuple[str, tuple[int, int]], ...] = (
        ("e2", (0, 1)),  # a-p
        ("e5", (1, 4)),  # p-w
        ("e3", (0, 3)),  # a-v
        ("e6", (3, 4)),  # v-w
        ("e4", (0, 2)),  # a-q
        ("e8", (2, 5)),  # q-z
        ("e7", (5, 3)),  # z-v
    )
    # boundary stubs: edge name -> anchoring internal vertex
    stubs: tuple[tuple[str, int], ...] = (("e1", 0), ("e9", 4), ("e10", 5))


def build_fork() -> ForkGadget:
    return ForkGadget()


# ---------------------------------------------------------------------------
# Gadget assembly
# ---------------------------------------------------------------------------


class GadgetBuilder:
    """Accumulates vertices and edges; s = 0 and t = 1 by convention."""

    def __init__(self) -> None:
        self.edge_list: list[tuple[int, int]] = []
        self.n = 2  # s and t
        self.roles: dict[int, str] = {}
        self.s = 0
        self.t = 1

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int, role: str | None = None) -> int:
        eid = len(self.edge_list)
        self.edge_list.append((u, v))
        if role:
            self.roles[eid] = role
        return eid

    def path(self, u: int, v: int, length: int) -> list[int]:
        """Add a path of `length` edges from u to v; returns its vertices."""
        verts = [u] + [self.vertex() for _ in range(length - 1)] + [v]
        for a, b in zip(verts, verts[1:]):
            self.edge(a, b)
        return verts

    def add_fork(self, input_anchor: int, role: str | None = None) -> tuple[int, int, int]:
        """Instantiate a fork whose input edge hangs off ``input_anchor``.

        Returns (e1 edge id, w vertex, z vertex); the output edges at w and
        z are created later by whoever consumes them.
        """
        spec = build_fork()
        local = {i: self.vertex() for i in range(6)}
        for _name, (x, y) in spec.internal_edges:
            self.edge(local[x], local[y])
        e1 = self.edge(input_anchor, local[spec.a], role=role)
        return e1, local[spec.w], local[spec.z]

    def anchored_middle(self) -> int:
        """Middle vertex of a fresh length-4 s-t path (a free signal anchor)."""
        verts = self.path(self.s, self.t, 4)
        return verts[2]

    def graph(self) -> SimpleGraph:
        return SimpleGraph(self.n, tuple(self.edge_list))


@dataclass(frozen=True)
class VariableGadget:
    """Two coupled forks plus their s-t paths; output edges still open."""

    graph: SimpleGraph
    s: int
    t: int
    x_port: int  # vertex (z of the direct fork) whose edge carries literal x
    xbar_port: int  # vertex (w of the negated fork) carrying the negation


def _add_variable(builder: GadgetBuilder, tag: str) -> tuple[int, int]:
    """Wire one variable gadget into the builder; returns (x port, x̄ port)."""
    mid_x = builder.path(builder.s, builder.t, 4)[2]
    mid_xbar = builder.path(builder.s, builder.t, 4)[2]
    _e1x, w_x, z_x = builder.add_fork(mid_x, role=f"in:{tag}")
    _e1n, w_xbar, z_xbar = builder.add_fork(mid_xbar, role=f"in:not {tag}")
    # e10 of the negated fork is identified with e9 of the direct fork
    builder.edge(z_xbar, w_x, role=f"link:{tag}")
    return z_x, w_xbar


def build_variable_gadget() -> VariableGadget:
    builder = GadgetBuilder()
    x_port, xbar_port = _add_variable(builder, "x")
    return VariableGadget(
        builder.graph(), builder.s, builder.t, x_port, xbar_port
    )


@dataclass(frozen=True)
class SplitGadget:
    """Chain of k-1 forks: one input port and k output ports."""

    graph: SimpleGraph
    input_port: int  # vertex a of the first fork (input edge not yet built)
    output_ports: tuple[int, ...]


def _add_split(
    builder: GadgetBuilder, k: int, feed_vertex: int, tag: str
) -> list[int]:
    """Chain k-1 forks fed from ``feed_vertex``; returns k output ports."""
    if k < 2:
        raise InvalidK("a split needs k >= 2 outputs")
    outputs: list[int] = []
    anchor = feed_vertex
    for i in range(k - 1):
        _e1, w_i, z_i = builder.add_fork(anchor, role=f"split:{tag}:{i}")
        outputs.append(z_i)  # the e10 output of this fork
        anchor = w_i  # e9 is identified with the next fork's input
    outputs.append(anchor)  # e9 of the final fork
    return outputs


def build_split(k: int) -> SplitGadget:
    if k < 2:
        raise InvalidK("a split needs k >= 2 outputs")
    builder = GadgetBuilder()
    feed = builder.vertex()
    outputs = _add_split(builder, k, feed, "s")
    return SplitGadget(builder.graph(), feed, tuple(outputs))


def reduce_nae3sat(formula: Nae3SatFormula) -> NtoInstance:
    """Compile a formula into a non-transitive-orientation instance.

    One variable gadget per variable; a split per literal polarity used by
    two or more clauses; each clause becomes a degree-3 vertex fed by its
    literal edges.  A polarity no clause consumes is parked on the middle
    vertex of a fresh s-t path so it stays free to orient either way.
    """
    builder = GadgetBuilder()
    ports: dict[int, int] = {}  # signed literal -> variable output port
    for i in range(1, formula.variable_count + 1):
        x_port, xbar_port = _add_variable(builder, f"x{i}")
        ports[i] = x_port
        ports[-i] = xbar_port

    occurrences: dict[int, list[int]] = {}
    clause_vertices: list[int] = []
    for ci, clause in enumerate(formula.clauses):
        vc = builder.vertex()
        clause_vertices.append(vc)
        for lit in clause:
            occurrences.setdefault(lit, []).append(vc)

    for lit in sorted(ports):
        consumers = occurrences.get(lit, [])
        port = ports[lit]
        name = f"{'+' if lit > 0 else '-'}{abs(lit)}"
        if not consumers:
            builder.edge(port, builder.anchored_middle(), role=f"out:{name}:free")
        elif len(consumers) == 1:
            builder.edge(port, consumers[0], role=f"out:{name}")
        else:
            outs = _add_split(builder, len(consumers), port, name)
            for out_port, vc in zip(outs, consumers):
                builder.edge(out_port, vc, role=f"lit:{name}")

    roles = tuple(sorted(builder.roles.items()))
    return NtoInstance(builder.graph(), builder.s, builder.t, roles)


# ---------------------------------------------------------------------------
# NAE3SAT brute force
# ---------------------------------------------------------------------------


def nae3sat_brute(formula: Nae3SatFormula) -> bool:
    """Exhaustive satisfiability check (each clause needs a true and a
    false literal)."""
    if formula.variable_count > 25:
        raise TooLarge("brute force capped at 25 variables")
    for bits in range(1 << formula.variable_count):
        ok = True
        for clause in formula.clauses:
            values = [
                bool(bits >> (abs(lit) - 1) & 1) == (lit > 0) for lit in clause
            ]
            if all(values) or not any(values):
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Orientation search
# ---------------------------------------------------------------------------


@dataclass
class SearchBudget:
    time_limit_s: float | None = None
    node_limit: int | None = None


@dataclass
class NtoResult:
    status: str  # "sat" | "unsat" | "budget"
    orientation: StOrientation | None
    nodes: int
    runtime_s: float


class _OrientSearch:
    """Shared engine: direct edges one by one with reachability bitsets.

    In forbid mode any transitive edge kills the branch (and an undirected
    edge whose endpoints get connected is hopeless in both directions); in
    minimize mode transitive edges are counted instead and branches are cut
    against the best count seen so far.
    """

    def __init__(self, graph, s: int, t: int, budget: SearchBudget | None):
        self.n = graph.vertex_count
        self.edges = list(graph.edges)
        self.s = s
        self.t = t
        self.m = len(self.edges)
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            self.adj[u].append((i, v))
            self.adj[v].append((i, u))
        budget = budget or SearchBudget()
        self.deadline = (
            time.monotonic() + budget.time_limit_s
            if budget.time_limit_s is not None
            else None
        )
        self.node_limit = budget.node_limit
        self.nodes = 0
        self.exhausted = False

    def check_budget(self) -> bool:
        if self.exhausted:
            return False
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes % 128 == 0:
            if time.monotonic() > self.deadline:
                self.exhausted = True
        return not self.exhausted

    # state: dirs (0 unknown, 1 u->v, 2 v->u), reach/reach_r bitsets,
    # indeg/outdeg/undec per vertex, committed edge list, transitive flags
    def initial_state(self):
        return [
            [0] * self.m,
            [1 << x for x in range(self.n)],
            [1 << x for x in range(self.n)],
            [0] * self.n,
            [0] * self.n,
            [len(self.adj[x]) for x in range(self.n)],
            [],
            [False] * self.m,
            0,
        ]

    def commit(self, state, e: int, direction: int, forbid: bool):
        """Direct edge e; returns (ok, extra transitive count)."""
        dirs, reach, reach_r, indeg, outdeg, undec, committed, tflag, tcount = state
        u, v = self.edges[e]
        if direction == 2:
            u, v = v, u
        ubit = 1 << u
        vbit = 1 << v
        if reach[v] & ubit:
            return False, 0  # directed cycle
        new_t = 0
        # the new edge itself may already have another directed route
        alt = False
        for e2, w in self.adj[u]:
            if e2 != e and dirs[e2] == (1 if self.edges[e2][0] == u else 2):
                if reach[w] & vbit:
                    alt = True
                    break
        if alt:
            if forbid:
                return False, 0
            if not tflag[e]:
                tflag[e] = True
                new_t += 1
        anc = reach_r[u]
        desc = reach[v]
        # existing directed edges that the new arc makes transitive
        for e2 in committed:
            a, b = self.edges[e2]
            if dirs[e2] == 2:
                a, b = b, a
            if (a, b) == (u, v) or tflag[e2]:
                continue
            if (anc >> a) & 1 and (desc >> b) & 1:
                if forbid:
                    return False, 0
                tflag[e2] = True
                new_t += 1
        if forbid:
            # an undirected edge whose endpoints become path-connected can
            # no longer be oriented either way (chord rule)
            for e2, (a, b) in enumerate(self.edges):
                if dirs[e2] == 0 and e2 != e:
                    fwd = (anc >> a) & 1 and (desc >> b) & 1
                    bwd = (anc >> b) & 1 and (desc >> a) & 1
                    if fwd or bwd:
                        return False, 0
        dirs[e] = direction
        committed.append(e)
        indeg[v] += 1
        outdeg[u] += 1
        undec[u] -= 1
        undec[v] -= 1
        # update transitive closure
        full_desc = desc | vbit
        full_anc = anc | ubit
        x = full_anc
        while x:
            low = x & -x
            reach[low.bit_length() - 1] |= full_desc
            x ^= low
        x = full_desc
        while x:
            low = x & -x
            reach_r[low.bit_length() - 1] |= full_anc
            x ^= low
        # local pole / interior degree checks
        for y in (u, v):
            if y == self.s:
                if indeg[y] > 0:
                    return False, new_t
            elif y == self.t:
                if outdeg[y] > 0:
                    return False, new_t
            elif undec[y] == 0 and (indeg[y] == 0 or outdeg[y] == 0):
                return False, new_t
        state[8] = tcount + new_t
        return True, new_t

    def forced_moves(self, state):
        """Edges whose direction is forced by pole or source/sink rules."""
        dirs, _reach, _reach_r, indeg, outdeg, undec, _committed, _tflag, _t = state
        forced: list[tuple[int, int]] = []
        for e, (u, v) in enumerate(self.edges):
            if dirs[e] != 0:
                continue
            if u == self.s or v == self.t:
                forced.append((e, 1))
            elif v == self.s or u == self.t:
                forced.append((e, 2))
            else:
                for vert, into in ((u, 2), (v, 1)):
                    if undec[vert] == 1:
                        if indeg[vert] == 0:
                            forced.append((e, into))
                            break
                        if outdeg[vert] == 0:
                            forced.append((e, 2 if into == 1 else 1))
                            break
        return forced

    def clone(self, state):
        return [
            state[0][:],
            state[1][:],
            state[2][:],
            state[3][:],
            state[4][:],
            state[5][:],
            state[6][:],
            state[7][:],
            state[8],
        ]

    def pick_edge(self, state) -> int:
        dirs = state[0]
        undec = state[5]
        best = -1
        best_key = None
        for e, (u, v) in enumerate(self.edges):
            if dirs[e] != 0:
                continue
            key = (min(undec[u], undec[v]), e)
            if best_key is None or key < best_key:
                best_key = key
                best = e
        return best

    def apply_forced(self, state, forbid: bool):
        """Iterate forced moves to a fixpoint; returns (ok, extra count)."""
        gained = 0
        while True:
            moves = self.forced_moves(state)
            if not moves:
                return True, gained
            for e, d in moves:
                if state[0][e] != 0:
                    if state[0][e] != d:
                        return False, gained
                    continue
                ok, extra = self.commit(state, e, d, forbid)
                gained += extra
                if not ok:
                    return False, gained


def _as_orientation(search: _OrientSearch, dirs: list[int]) -> StOrientation:
    direction = tuple(
        (u, v) if d == 1 else (v, u)
        for (u, v), d in zip(search.edges, dirs)
    )
    return StOrientation(direction, search.s, search.t)


def nto_decide(
    graph, s: int, t: int, budget: SearchBudget | None = None
) -> NtoResult:
    """Search for a non-transitive st-orientation.

    Returns status "sat" with a witness, "unsat" when the search space is
    exhausted, or "budget" when limits ran out first.
    """
    t0 = time.monotonic()
    search = _OrientSearch(graph, s, t, budget)
    witness: list[int] | None = None

    def rec(state) -> bool:
        nonlocal witness
        ok, _ = search.apply_forced(state, forbid=True)
        if not ok:
            return False
        dirs = state[0]
        e = search.pick_edge(state)
        if e < 0:
            o = _as_orientation(search, dirs)
            if transitive_edges_reach(SimpleGraph(search.n, tuple(search.edges)), o):
                return False  # defensive: incremental detection disagreed
            witness = dirs[:]
            return True
        if not search.check_budget():
            return False
        for d in (1, 2):
            child = search.clone(state)
            ok, _ = search.commit(child, e, d, forbid=True)
            if ok and rec(child):
                return True
            if search.exhausted:
                return False
        return False

    found = rec(search.initial_state())
    runtime = time.monotonic() - t0
    if found and witness is not None:
        return NtoResult("sat", _as_orientation(search, witness), search.nodes, runtime)
    if search.exhausted:
        return NtoResult("budget", None, search.nodes, runtime)
    return NtoResult("unsat", None, search.nodes, runtime)


def enumerate_nontransitive(
    graph, s: int, t: int, budget: SearchBudget | None = None
) -> list[StOrientation]:
    """All non-transitive st-orientations (exhaustive; small inputs only)."""
    search = _OrientSearch(graph, s, t, budget)
    out: list[StOrientation] = []

    def rec(state) -> None:
        ok, _ = search.apply_forced(state, forbid=True)
        if not ok:
            return
        e = search.pick_edge(state)
        if e < 0:
            o = _as_orientation(search, state[0])
            if not transitive_edges_reach(
                SimpleGraph(search.n, tuple(search.edges)), o
            ):
                out.append(o)
            return
        if not search.check_budget():
            return
        for d in (1, 2):
            child = search.clone(state)
            ok, _ = search.commit(child, e, d, forbid=True)
            if ok:
                rec(child)

    rec(search.initial_state())
    if search.exhausted:
        raise TooLarge("enumeration budget exhausted")
    return out


def min_transitive_exhaustive(
    graph, s: int, t: int, budget: SearchBudget | None = None
) -> tuple[int, StOrientation | None, bool]:
    """Exhaustive minimum of transitive edges over all st-orientations.

    Branch and bound over edge directions; the incremental transitive count
    only grows along a branch, so it prunes against the incumbent.  Returns
    (minimum, witness, proven).
    """
    search = _OrientSearch(graph, s, t, budget)
    best_val = len(search.edges) + 1
    best: list[int] | None = None
    sg = SimpleGraph(search.n, tuple(search.edges))

    def rec(state) -> None:
        nonlocal best_val, best
        ok, _ = search.apply_forced(state, forbid=False)
        if not ok or state[8] >= best_val:
            return
        e = search.pick_edge(state)
        if e < 0:
            exact = len(transitive_edges_reach(sg, _as_orientation(search, state[0])))
            if exact < best_val:
                best_val = exact
                best = state[0][:]
            return
        if not search.check_budget():
            return
        for d in (1, 2):
            child = search.clone(state)
            ok, _ = search.commit(child, e, d, forbid=False)
            if ok and child[8] < best_val:
                rec(child)

    rec(search.initial_state())
    witness = _as_orientation(search, best) if best is not None else None
    return best_val, witness, not search.exhausted


# ---------------------------------------------------------------------------
# Text formats (.cnf and the non-planar adjacency dump)
# ---------------------------------------------------------------------------


def parse_cnf(text: str) -> Nae3SatFormula:
    """DIMACS-like input: header ``p nae3sat V C``, one clause per line."""
    header: tuple[int, int] | None = None
    clauses: list[tuple[int, int, int]] = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("c"):
            continue
        if ln.startswith("p"):
            parts = ln.split()
            if len(parts) != 4 or parts[1] != "nae3sat":
                raise FormatError(f"bad header: {ln!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        lits = [int(x) for x in ln.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if len(lits) != 3:
            raise FormatError(f"clause must have 3 literals: {ln!r}")
        clauses.append((lits[0], lits[1], lits[2]))
    if header is None:
        raise FormatError("missing 'p nae3sat V C' header")
    if header[1] != len(clauses):
        raise FormatError(f"header claims {header[1]} clauses, found {len(clauses)}")
    return Nae3SatFormula(header[0], tuple(clauses))


def write_cnf(formula: Nae3SatFormula) -> str:
    lines = [f"p nae3sat {formula.variable_count} {len(formula.clauses)}"]
    lines.extend(" ".join(str(l) for l in c) + " 0" for c in formula.clauses)
    return "\n".join(lines) + "\n"


def write_nto(instance: NtoInstance) -> str:
    """Adjacency dump with a nonplanar flag; no rotation system is stored."""
    g = instance.graph
    adj: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    lines = [f"{g.vertex_count} {len(g.edges)} nonplanar"]
    for v in range(g.vertex_count):
        lines.append(f"{v}: " + " ".join(str(w) for w in adj[v]))
    lines.append(f"st: {instance.s} {instance.t}")
    return "\n".join(lines) + "\n"
