"""st-numberings, st-orientations and transitive-edge detection.

The numbering algorithm is the classical Even-Tarjan path-addition scheme:
a lowpoint DFS rooted at t whose first tree edge is (t,s), followed by a
pathfinder that repeatedly peels off a path of new edges from the popped
stack vertex to an old vertex.  All choices are resolved by ascending edge
id so runs are reproducible.

Transitive edges are detected two ways: per-edge reachability in the
oriented graph (the definition) and via faces whose left or right path is a
single edge (the planar shortcut).  The two must agree on every planar
st-orientation; the test suite fuzzes that equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .embedding import PlaneGraph
from .errors import (
    CyclicInput,
    FormatError,
    NegativeCount,
    NotAdmissible,
    NotBipolarFace,
)
from . import embedding as _emb


@dataclass(frozen=True)
class StNumbering:
    """Bijection vertex -> 1..n with number[s] = 1 and number[t] = n."""

    number: tuple[int, ...]

    def rank(self, v: int) -> int:
        return self.number[v]


@dataclass(frozen=True)
class StOrientation:
    """Direction per edge id as (tail, head), plus the designated poles."""

    direction: tuple[tuple[int, int], ...]
    source: int
    sink: int

    def tail(self, e: int) -> int:
        return self.direction[e][0]

    def head(self, e: int) -> int:
        return self.direction[e][1]


@dataclass(frozen=True)
class OrientationReport:
    """Diagnostics from validate_st_orientation; never raises."""

    acyclic: bool
    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    expected_source: int
    expected_sink: int
    malformed_edges: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.acyclic
            and not self.malformed_edges
            and self.sources == (self.expected_source,)
            and self.sinks == (self.expected_sink,)
        )


# ---------------------------------------------------------------------------
# Even-Tarjan st-numbering
# ---------------------------------------------------------------------------


def st_number(g: PlaneGraph, s: int, t: int) -> StNumbering:
    """Compute a deterministic st-numbering of an admissible instance.

    When (s,t) is not an edge of g, a virtual edge is used internally for
    the DFS skeleton; it is pre-marked old so no path ever traverses it,
    and the resulting numbering is valid for g itself.
    """
    if not _emb.check_st_admissible(g, s, t):
        raise NotAdmissible(f"no st-orientation with s={s}, t={t}")
    n = g.vertex_count
    edges = list(g.edges)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        adj[u].append((i, v))
        adj[v].append((i, u))
    st_edge = g.edge_id(s, t)
    if st_edge is None:
        st_edge = len(edges)
        edges.append((s, t))
        adj[s].append((st_edge, t))
        adj[t].append((st_edge, s))
    for v in range(n):
        adj[v].sort()

    num = [0] * n
    low = [0] * n
    parent = [-1] * n
    parent_edge = [-1] * n
    children: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (edge, child)
    back_from: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (edge, ancestor)

    # DFS from t, first edge forced to (t,s).
    num[t] = 1
    low[t] = 1
    counter = 1
    stack: list[list[int]] = [[t, -1]]  # [vertex, adjacency index; -1 = take (t,s)]
    while stack:
        frame = stack[-1]
        v = frame[0]
        if frame[1] == -1:
            frame[1] = 0
            if v == t:
                counter += 1
                num[s] = counter
                low[s] = counter
                parent[s] = t
                parent_edge[s] = st_edge
                children[t].append((st_edge, s))
                stack.append([s, -1])
                continue
        advanced = False
        while frame[1] < len(adj[v]):
            e, w = adj[v][frame[1]]
            frame[1] += 1
            if e == parent_edge[v] or (v == t and e == st_edge):
                continue
            if num[w] == 0:
                counter += 1
                num[w] = counter
                low[w] = counter
                parent[w] = v
                parent_edge[w] = e
                children[v].append((e, w))
                stack.append([w, -1])
                advanced = True
                break
            if num[w] < num[v]:
                back_from[v].append((e, w))
                low[v] = min(low[v], num[w])
        if not advanced and frame[1] >= len(adj[v]):
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])

    old_vertex = [False] * n
    old_edge = [False] * len(edges)
    old_vertex[s] = True
    old_vertex[t] = True
    old_edge[st_edge] = True

    def pathfinder(v: int) -> list[int]:
        # case 1: new back edge from v to an ancestor
        for e, w in back_from[v]:
            if not old_edge[e]:
                old_edge[e] = True
                return [v, w]
        # case 2: new tree edge towards a child, then down the lowpoint chain
        for e, w in children[v]:
            if old_edge[e]:
                continue
            old_edge[e] = True
            path = [v, w]
            target = low[w]
            cur = w
            while not old_vertex[cur]:
                old_vertex[cur] = True
                nxt = None
                for e2, x in back_from[cur]:
                    if num[x] == target and not old_edge[e2]:
                        nxt = (e2, x)
                        break
                if nxt is None:
                    for e2, c in children[cur]:
                        if low[c] == target and not old_edge[e2]:
                            nxt = (e2, c)
                            break
                if nxt is None:
                    break  # chain already ends at an old vertex
                old_edge[nxt[0]] = True
                path.append(nxt[1])
                cur = nxt[1]
            return path
        # case 3: new back edge from a descendant into v; climb to old
        for e, w in adj[v]:
            if old_edge[e] or e == parent_edge[v]:
                continue
            if num[w] > num[v] and parent_edge[w] != e:
                old_edge[e] = True
                path = [v, w]
                cur = w
                while not old_vertex[cur]:
                    old_vertex[cur] = True
                    pe = parent_edge[cur]
                    old_edge[pe] = True
                    cur = parent[cur]
                    path.append(cur)
                return path
        return []

    order = [0] * n
    work = [t, s]
    next_number = 1
    while work:
        v = work.pop()
        path = pathfinder(v)
        if not path:
            order[v] = next_number
            next_number += 1
        else:
            for u in reversed(path[1:-1]):
                work.append(u)
            work.append(v)
    assert next_number == n + 1 and order[s] == 1 and order[t] == n
    return StNumbering(tuple(order))


def orient_by_numbering(g: PlaneGraph, numbering: StNumbering) -> StOrientation:
    """Direct every edge from its lower- to its higher-numbered endpoint."""
    num = numbering.number
    direction = tuple(
        (u, v) if num[u] < num[v] else (v, u) for u, v in g.edges
    )
    order = sorted(range(g.vertex_count), key=lambda v: num[v])
    return StOrientation(direction, order[0], order[-1])


def heuristic_orientation(g: PlaneGraph, s: int, t: int) -> StOrientation:
    """The unconstrained baseline: Even-Tarjan numbering, then low-to-high."""
    return orient_by_numbering(g, st_number(g, s, t))


# ---------------------------------------------------------------------------
# Validity and transitivity
# ---------------------------------------------------------------------------


def validate_st_orientation(
    g: PlaneGraph, o: StOrientation, s: int, t: int
) -> OrientationReport:
    n = g.vertex_count
    malformed = tuple(
        e
        for e, (u, v) in enumerate(o.direction)
        if {u, v} != {g.edges[e][0], g.edges[e][1]}
    )
    indeg = [0] * n
    outdeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(o.direction):
        if e in malformed:
            continue
        outdeg[u] += 1
        indeg[v] += 1
        out[u].append(v)
    sources = tuple(v for v in range(n) if indeg[v] == 0)
    sinks = tuple(v for v in range(n) if outdeg[v] == 0)
    # Kahn topological check
    pending = list(sources)
    remaining = indeg[:]
    seen = 0
    while pending:
        v = pending.pop()
        seen += 1
        for w in out[v]:
            remaining[w] -= 1
            if remaining[w] == 0:
                pending.append(w)
    return OrientationReport(
        acyclic=(seen == n),
        sources=sources,
        sinks=sinks,
        expected_source=s,
        expected_sink=t,
        malformed_edges=malformed,
    )


def _topological_order(n: int, o: StOrientation) -> list[int]:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in o.direction:
        out[u].append(v)
        indeg[v] += 1
    pending = [v for v in range(n) if indeg[v] == 0]
    order = []
    while pending:
        v = pending.pop()
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                pending.append(w)
    if len(order) != n:
        raise CyclicInput("orientation contains a directed cycle")
    return order


def transitive_edges_reach(g, o: StOrientation) -> frozenset[int]:
    """Edges (u,v) such that v stays reachable from u after deleting (u,v).

    Works on any graph-like object exposing ``vertex_count`` and ``edges``;
    planarity is not used.  Raises CyclicInput on cyclic input.
    """
    n = g.vertex_count
    _topological_order(n, o)
    out_edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(o.direction):
        out_edges[u].append((e, v))
    result = []
    for e, (u, v) in enumerate(o.direction):
        # forward DFS from u that may not use edge e, early exit on v
        stack = [u]
        seen = {u}
        found = False
        while stack and not found:
            x = stack.pop()
            for e2, y in out_edges[x]:
                if e2 == e or y in seen:
                    continue
                if y == v:
                    found = True
                    break
                seen.add(y)
                stack.append(y)
        if found:
            result.append(e)
    return frozenset(result)


def face_sense_runs(
    g: PlaneGraph, o: StOrientation, face_id: int
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Split a face boundary into its two directed sides.

    Returns (forward run, backward run) as lists of boundary positions with
    their edge ids; raises NotBipolarFace when the boundary does not consist
    of exactly one run of each sense.
    """
    face = g.faces[face_id]
    k = face.degree
    senses = []
    for e, tail in face.boundary:
        senses.append(o.direction[e][0] == tail)
    transitions = sum(1 for i in range(k) if senses[i] != senses[(i + 1) % k])
    if transitions != 2:
        raise NotBipolarFace(
            f"face {face_id} splits into {transitions} sense changes, expected 2"
        )
    fwd = [(i, face.boundary[i][0]) for i in range(k) if senses[i]]
    bwd = [(i, face.boundary[i][0]) for i in range(k) if not senses[i]]
    return fwd, bwd


def transitive_edges_faces(g: PlaneGraph, o: StOrientation) -> frozenset[int]:
    """Planar characterization: an edge is transitive iff it alone forms the
    left or right path of one of its faces (outer face included), while the
    opposite side has length at least two."""
    result = set()
    for f in g.faces:
        fwd, bwd = face_sense_runs(g, o, f.id)
        if len(fwd) == 1 and len(bwd) >= 2:
            result.add(fwd[0][1])
        if len(bwd) == 1 and len(fwd) >= 2:
            result.add(bwd[0][1])
    return frozenset(result)


def improvement_percent(tr_heur: int, tr_opt: int) -> Fraction:
    """Reduction percentage (trHeur - trOpt) / max(1, trHeur) * 100, exact."""
    if tr_opt < 0 or tr_heur < tr_opt:
        raise NegativeCount(f"need trHeur >= trOpt >= 0, got ({tr_heur}, {tr_opt})")
    return Fraction((tr_heur - tr_opt) * 100, max(1, tr_heur))


# ---------------------------------------------------------------------------
# Text format (.ori)
# ---------------------------------------------------------------------------


def write_ori(o: StOrientation) -> str:
    lines = [f"{e}: {u} -> {v}" for e, (u, v) in enumerate(o.direction)]
    return "\n".join(lines) + "\n"


def parse_ori(text: str, g: PlaneGraph, s: int, t: int) -> StOrientation:
    direction: dict[int, tuple[int, int]] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        try:
            eid_part, rest = ln.split(":", 1)
            tail_part, head_part = rest.split("->")
            e, u, v = int(eid_part), int(tail_part), int(head_part)
        except ValueError as exc:
            raise FormatError(f"bad orientation line: {ln!r}") from exc
        if e in direction:
            raise FormatError(f"duplicate edge id {e}")
        direction[e] = (u, v)
    if sorted(direction) != list(range(g.edge_count)):
        raise FormatError("orientation does not cover edge ids 0..E-1 exactly")
    for e, (u, v) in direction.items():
        if {u, v} != set(g.edges[e]):
            raise FormatError(f"edge {e} endpoints {u},{v} disagree with graph")
    return StOrientation(tuple(direction[e] for e in range(g.edge_count)), s, t)
