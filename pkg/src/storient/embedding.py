"""Embedded planar graphs: rotation systems, face tracing, angles, admissibility.

A plane graph is given combinatorially by a clockwise rotation system (the
cyclic order of incident edge ids at every vertex) plus one face designated
as outer.  Faces are traced with the next-edge-after-reversal rule: the dart
following u->v leaves v along the clockwise successor of (v,u) in v's
rotation.  With clockwise rotations this walks every internal face
counterclockwise, i.e. each face lies to the left of its boundary darts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EulerViolation,
    FormatError,
    GraphError,
    InconsistentRotation,
    InvalidVertex,
)

# A dart is (edge id, side): side 0 runs tail->head as the edge is stored,
# side 1 is the reversal.
Dart = tuple[int, int]


@dataclass(frozen=True)
class Face:
    """One traced face: boundary is a cyclic dart sequence, stored as
    (edge id, tail vertex) pairs in traversal order."""

    id: int
    boundary: tuple[tuple[int, int], ...]
    is_outer: bool

    @property
    def degree(self) -> int:
        return len(self.boundary)

    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.boundary)

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.boundary)


@dataclass(frozen=True)
class Angle:
    """Corner of a face: two consecutive boundary edges meeting at vertex."""

    id: int
    face_id: int
    prev_edge: int
    vertex: int
    next_edge: int


class PlaneGraph:
    """Immutable embedded planar graph.

    Do not mutate after construction; build instances via
    :func:`build_embedding` (or :func:`parse_pg`).  Edge ids are dense
    integers 0..E-1, face ids 0..F-1, angle ids 0..2E-1.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: tuple[tuple[int, int], ...],
        rotations: tuple[tuple[int, ...], ...],
        faces: tuple[Face, ...],
        outer_face_id: int,
    ) -> None:
        self.vertex_count = vertex_count
        self.edges = edges
        self.rotations = rotations
        self.faces = faces
        self.outer_face_id = outer_face_id

        # dart -> face containing it
        self._dart_face: dict[Dart, int] = {}
        for f in faces:
            for e, tail in f.boundary:
                side = 0 if edges[e][0] == tail else 1
                self._dart_face[(e, side)] = f.id

        # angles: per face, position i is the corner between darts i-1 and i
        angles: list[Angle] = []
        face_angle_ids: list[tuple[int, ...]] = []
        for f in faces:
            ids = []
            k = f.degree
            for i in range(k):
                prev_e, _ = f.boundary[i - 1]
                e, tail = f.boundary[i]
                a = Angle(len(angles), f.id, prev_e, tail, e)
                ids.append(a.id)
                angles.append(a)
            face_angle_ids.append(tuple(ids))
        self.angles: tuple[Angle, ...] = tuple(angles)
        self.face_angle_ids: tuple[tuple[int, ...], ...] = tuple(face_angle_ids)

        vertex_angles: list[list[int]] = [[] for _ in range(vertex_count)]
        self._angle_by_prev: dict[tuple[int, int], int] = {}
        self._angle_by_next: dict[tuple[int, int], int] = {}
        for a in angles:
            vertex_angles[a.vertex].append(a.id)
            self._angle_by_prev[(a.vertex, a.prev_edge)] = a.id
            self._angle_by_next[(a.vertex, a.next_edge)] = a.id
        self.vertex_angle_ids: tuple[tuple[int, ...], ...] = tuple(
            tuple(x) for x in vertex_angles
        )

        self._adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple((e, edges[e][1] if edges[e][0] == v else edges[e][0]) for e in rot)
            for v, rot in enumerate(rotations)
        )
        self._edge_index = {
            (min(u, v), max(u, v)): i for i, (u, v) in enumerate(edges)
        }
        self._vertex_faces: tuple[frozenset[int], ...] = tuple(
            frozenset(self.angles[a].face_id for a in self.vertex_angle_ids[v])
            for v in range(vertex_count)
        )

    # -- basic accessors ------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        """Incident (edge id, other endpoint) pairs in rotation order."""
        return self._adjacency[v]

    def edge_id(self, u: int, v: int) -> int | None:
        return self._edge_index.get((min(u, v), max(u, v)))

    def dart_face(self, edge: int, side: int) -> int:
        return self._dart_face[(edge, side)]

    def faces_of_edge(self, edge: int) -> tuple[int, int]:
        """(face containing the forward dart, face containing the reverse dart)."""
        return self._dart_face[(edge, 0)], self._dart_face[(edge, 1)]

    def faces_of_vertex(self, v: int) -> frozenset[int]:
        return self._vertex_faces[v]

    def angle_at(self, v: int, prev_edge: int) -> int:
        return self._angle_by_prev[(v, prev_edge)]

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"PlaneGraph(V={self.vertex_count}, E={self.edge_count}, "
            f"F={self.face_count}, outer={self.outer_face_id})"
        )


# ---------------------------------------------------------------------------
# Face tracing
# ---------------------------------------------------------------------------


def _trace_all(
    vertex_count: int,
    edges: tuple[tuple[int, int], ...],
    rotations: tuple[tuple[int, ...], ...],
) -> list[list[Dart]]:
    pos: list[dict[int, int]] = [
        {e: i for i, e in enumerate(rot)} for rot in rotations
    ]

    def next_dart(d: Dart) -> Dart:
        e, side = d
        head = edges[e][1 - side]
        rot = rotations[head]
        ne = rot[(pos[head][e] + 1) % len(rot)]
        return (ne, 0 if edges[ne][0] == head else 1)

    m = len(edges)
    seen = [False] * (2 * m)
    cycles: list[list[Dart]] = []
    for e in range(m):
        for side in (0, 1):
            if seen[2 * e + side]:
                continue
            cycle: list[Dart] = []
            d = (e, side)
            while not seen[2 * d[0] + d[1]]:
                seen[2 * d[0] + d[1]] = True
                cycle.append(d)
                d = next_dart(d)
            if d != cycle[0]:
                raise InconsistentRotation(
                    f"face walk starting at dart {cycle[0]} re-entered at {d}"
                )
            cycles.append(cycle)
    return cycles


def trace_faces(g: PlaneGraph) -> list[Face]:
    """Re-derive the face list of ``g`` from its rotation system."""
    cycles = _trace_all(g.vertex_count, g.edges, g.rotations)
    return [
        Face(i, tuple((e, g.edges[e][side]) for e, side in cyc), i == g.outer_face_id)
        for i, cyc in enumerate(cycles)
    ]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def build_embedding(
    vertex_count: int,
    edge_list: list[tuple[int, int]],
    rotations: list[list[int]],
    outer_face_hint: tuple[int, int] | None = None,
    *,
    outer_dart: Dart | None = None,
) -> PlaneGraph:
    """Validate and assemble a plane graph.

    The outer face is the face containing ``outer_dart`` when given;
    otherwise the face whose boundary contains both hinted vertices
    (maximum degree, ties by smallest face id); otherwise the face of
    maximum degree.

    Raises DuplicateEdge, InconsistentRotation, DisconnectedGraph or
    EulerViolation when the input is not a connected simple plane graph.
    """
    if vertex_count < 1:
        raise InvalidVertex("vertex_count must be positive")
    edges = tuple((int(u), int(v)) for u, v in edge_list)
    seen_pairs: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise InvalidVertex(f"edge ({u},{v}) out of range")
        if u == v:
            raise DuplicateEdge(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            raise DuplicateEdge(f"parallel edge {key}")
        seen_pairs.add(key)

    if len(rotations) != vertex_count:
        raise InconsistentRotation("one rotation per vertex required")
    rot = tuple(tuple(int(e) for e in r) for r in rotations)
    incident: list[list[int]] = [[] for _ in range(vertex_count)]
    for i, (u, v) in enumerate(edges):
        incident[u].append(i)
        incident[v].append(i)
    for v in range(vertex_count):
        if sorted(rot[v]) != sorted(incident[v]):
            raise InconsistentRotation(
                f"rotation at vertex {v} does not list its incident edges exactly once"
            )

    # connectivity
    if vertex_count > 1:
        stack = [0]
        seen = [False] * vertex_count
        seen[0] = True
        count = 1
        while stack:
            x = stack.pop()
            for e in rot[x]:
                a, b = edges[e]
                y = b if a == x else a
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        if count != vertex_count:
            raise DisconnectedGraph(f"{vertex_count - count} vertices unreachable")

    cycles = _trace_all(vertex_count, edges, rot)
    if vertex_count - len(edges) + len(cycles) != 2:
        raise EulerViolation(
            f"V-E+F = {vertex_count}-{len(edges)}+{len(cycles)} != 2"
        )

    outer_id = _select_outer(cycles, edges, outer_face_hint, outer_dart)
    faces = tuple(
        Face(i, tuple((e, edges[e][side]) for e, side in cyc), i == outer_id)
        for i, cyc in enumerate(cycles)
    )
    return PlaneGraph(vertex_count, edges, rot, faces, outer_id)


def _select_outer(
    cycles: list[list[Dart]],
    edges: tuple[tuple[int, int], ...],
    hint: tuple[int, int] | None,
    outer_dart: Dart | None,
) -> int:
    if outer_dart is not None:
        for i, cyc in enumerate(cycles):
            if outer_dart in cyc:
                return i
        raise GraphError(f"outer dart {outer_dart} not found in any face")
    if hint is not None:
        s, t = hint
        common = [
            i
            for i, cyc in enumerate(cycles)
            if s in {edges[e][side] for e, side in cyc}
            and t in {edges[e][side] for e, side in cyc}
        ]
        if common:
            return max(common, key=lambda i: (len(cycles[i]), -i))
    return max(range(len(cycles)), key=lambda i: (len(cycles[i]), -i))


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------


def is_biconnected(vertex_count: int, edges: list[tuple[int, int]]) -> bool:
    """Connected with no articulation vertex (Hopcroft-Tarjan lowpoints).

    A single edge counts as biconnected; an isolated vertex does not.
    """
    if vertex_count < 2:
        return False
    adj: list[list[int]] = [[] for _ in range(vertex_count)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    num = [0] * vertex_count  # 1-based dfs numbers, 0 = unvisited
    low = [0] * vertex_count
    parent = [-1] * vertex_count
    counter = 1
    num[0] = 1
    low[0] = 1
    root_children = 0
    # iterative dfs: (vertex, adjacency index)
    stack: list[list[int]] = [[0, 0]]
    while stack:
        frame = stack[-1]
        v, i = frame
        if i < len(adj[v]):
            frame[1] += 1
            w = adj[v][i]
            if num[w] == 0:
                counter += 1
                num[w] = counter
                low[w] = counter
                parent[w] = v
                if v == 0:
                    root_children += 1
                stack.append([w, 0])
            elif w != parent[v]:
                low[v] = min(low[v], num[w])
        else:
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if p != 0 and low[v] >= num[p]:
                    return False  # p is an articulation vertex
    if any(n == 0 for n in num):
        return False
    return root_children <= 1


def check_st_admissible(g: PlaneGraph, s: int, t: int) -> bool:
    """True iff G plus the edge (s,t), if absent, is biconnected and some
    face of g has both s and t on its boundary."""
    n = g.vertex_count
    if not (0 <= s < n and 0 <= t < n) or s == t:
        raise InvalidVertex(f"invalid vertex pair ({s},{t})")
    if not (g.faces_of_vertex(s) & g.faces_of_vertex(t)):
        return False
    edges = list(g.edges)
    if g.edge_id(s, t) is None:
        edges.append((s, t))
    return is_biconnected(n, edges)


# ---------------------------------------------------------------------------
# Text format (.pg)
# ---------------------------------------------------------------------------


def parse_pg(text: str) -> tuple[PlaneGraph, int, int]:
    """Parse the ``.pg`` plane-graph format.

    Line 1: ``n m``; lines 2..n+1: ``v: w1 w2 ... wk`` giving v's clockwise
    rotation as neighbor ids; final line ``st: s t``.  Vertex ids 0-based.
    """
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if len(lines) < 2:
        raise FormatError("truncated .pg input")
    head = lines[0].split()
    if len(head) < 2:
        raise FormatError("header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"bad header: {lines[0]!r}") from exc
    if len(lines) != n + 2:
        raise FormatError(f"expected {n} rotation lines plus st line")

    neighbor_rot: list[list[int]] = [[] for _ in range(n)]
    for ln in lines[1 : n + 1]:
        try:
            left, right = ln.split(":", 1)
            v = int(left)
            nbrs = [int(w) for w in right.split()]
        except ValueError as exc:
            raise FormatError(f"bad rotation line: {ln!r}") from exc
        if not (0 <= v < n):
            raise FormatError(f"vertex {v} out of range")
        if neighbor_rot[v]:
            raise FormatError(f"duplicate rotation line for vertex {v}")
        neighbor_rot[v] = nbrs

    st_line = lines[n + 1].split()
    if len(st_line) != 3 or st_line[0] != "st:":
        raise FormatError(f"bad st line: {lines[n + 1]!r}")
    s, t = int(st_line[1]), int(st_line[2])

    pairs = set()
    for v in range(n):
        for w in neighbor_rot[v]:
            if not (0 <= w < n):
                raise FormatError(f"neighbor {w} out of range at vertex {v}")
            pairs.add((min(v, w), max(v, w)))
    for u, w in pairs:
        if neighbor_rot[u].count(w) != 1 or neighbor_rot[w].count(u) != 1:
            raise FormatError(f"rotations are not symmetric on edge ({u},{w})")
    edge_list = sorted(pairs)
    if len(edge_list) != m:
        raise FormatError(f"header says m={m} but rotations define {len(edge_list)}")
    index = {p: i for i, p in enumerate(edge_list)}
    rotations = [
        [index[(min(v, w), max(v, w))] for w in neighbor_rot[v]] for v in range(n)
    ]
    g = build_embedding(n, edge_list, rotations, outer_face_hint=(s, t))
    return g, s, t


def write_pg(g: PlaneGraph, s: int, t: int) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    for v in range(g.vertex_count):
        nbrs = " ".join(str(w) for _, w in g.neighbors(v))
        lines.append(f"{v}: {nbrs}")
    lines.append(f"st: {s} {t}")
    return "\n".join(lines) + "\n"
