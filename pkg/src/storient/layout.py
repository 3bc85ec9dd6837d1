"""Visibility representations and polyline drawings of plane st-graphs.

The construction is the classical one: vertex levels are longest-path
distances from the source, edge columns are longest-path distances of the
left incident face in the dual (the outer face split into a left node s*
and a right node t*), and a vertex's horizontal segment runs from the
column of its left face to the column of its right face minus one.  The
polyline drawing places every vertex at the midpoint of its segment and
routes each edge vertically at its column with at most one bend per end.

Drawings are checked by a geometric oracle: axis-parallel segments of
different edges may touch only at shared endpoints or inside the
horizontal channel of a common endpoint vertex (the usual look of polyline
drawings derived from visibility representations).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .embedding import PlaneGraph
from .errors import InvalidOrientation
from .orientation import StOrientation, validate_st_orientation

_SSTAR = -1  # dual node for the left part of the outer face
_TSTAR = -2  # dual node for the right part


@dataclass(frozen=True)
class VisRep:
    """Weak visibility representation on an integer grid."""

    vertex_y: tuple[int, ...]
    vertex_span: tuple[tuple[int, int], ...]  # inclusive x-interval
    edge_x: tuple[int, ...]
    edge_ends: tuple[tuple[int, int], ...]  # (tail vertex, head vertex)
    width: int  # number of dual levels; columns live in [0, width-1]
    height: int  # level of the sink

    def edge_span(self, e: int) -> tuple[int, int]:
        u, v = self.edge_ends[e]
        return self.vertex_y[u], self.vertex_y[v]


@dataclass(frozen=True)
class Drawing:
    points: tuple[tuple[int, int], ...]  # per vertex
    polylines: tuple[tuple[tuple[int, int], ...], ...]  # per edge, tail->head
    width: int
    height: int


def visibility_representation(
    g: PlaneGraph, o: StOrientation, s: int, t: int
) -> VisRep:
    """Compute the visibility representation of a planar st-orientation."""
    report = validate_st_orientation(g, o, s, t)
    if not report.ok:
        raise InvalidOrientation("not a valid st-orientation")
    outer = g.outer_face_id
    if outer not in (g.faces_of_vertex(s) & g.faces_of_vertex(t)):
        raise InvalidOrientation("s and t must lie on the outer face")

    n = g.vertex_count
    # vertex levels: longest path from s
    out_edges: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v in o.direction:
        out_edges[u].append(v)
        indeg[v] += 1
    level = [0] * n
    queue = [v for v in range(n) if indeg[v] == 0]
    order = []
    remaining = indeg[:]
    while queue:
        v = queue.pop()
        order.append(v)
        for w in out_edges[v]:
            if level[w] < level[v] + 1:
                level[w] = level[v] + 1
            remaining[w] -= 1
            if remaining[w] == 0:
                queue.append(w)
    if len(order) != n:
        raise InvalidOrientation("directed cycle")

    # dual graph: left(e) -> right(e); the outer face contributes s* / t*
    def left_face(e: int) -> int:
        u, _v = o.direction[e]
        side = 0 if g.edges[e][0] == u else 1
        f = g.dart_face(e, side)
        return _SSTAR if f == outer else f

    def right_face(e: int) -> int:
        u, _v = o.direction[e]
        side = 1 if g.edges[e][0] == u else 0
        f = g.dart_face(e, side)
        return _TSTAR if f == outer else f

    dual_nodes = [_SSTAR, _TSTAR] + [f.id for f in g.faces if f.id != outer]
    dual_out: dict[int, list[int]] = {x: [] for x in dual_nodes}
    dual_indeg: dict[int, int] = {x: 0 for x in dual_nodes}
    for e in range(g.edge_count):
        a, b = left_face(e), right_face(e)
        dual_out[a].append(b)
        dual_indeg[b] += 1
    x_of: dict[int, int] = {x: 0 for x in dual_nodes}
    dq = [x for x in dual_nodes if dual_indeg[x] == 0]
    seen = 0
    while dq:
        a = dq.pop()
        seen += 1
        for b in dual_out[a]:
            if x_of[b] < x_of[a] + 1:
                x_of[b] = x_of[a] + 1
            dual_indeg[b] -= 1
            if dual_indeg[b] == 0:
                dq.append(b)
    if seen != len(dual_nodes):
        raise InvalidOrientation("dual graph is cyclic")

    edge_x = tuple(x_of[left_face(e)] for e in range(g.edge_count))

    # vertex spans from the left/right face at each vertex
    span: list[tuple[int, int]] = [(0, 0)] * n
    for v in range(n):
        if v == s or v == t:
            span[v] = (x_of[_SSTAR], x_of[_TSTAR] - 1)
            continue
        f_left = f_right = None
        for aid in g.vertex_angle_ids[v]:
            ang = g.angles[aid]
            into_prev = o.direction[ang.prev_edge][1] == v
            into_next = o.direction[ang.next_edge][1] == v
            if into_prev and not into_next:
                f_left = _SSTAR if ang.face_id == outer else ang.face_id
            elif into_next and not into_prev:
                f_right = _TSTAR if ang.face_id == outer else ang.face_id
        assert f_left is not None and f_right is not None
        span[v] = (x_of[f_left], x_of[f_right] - 1)

    return VisRep(
        vertex_y=tuple(level),
        vertex_span=tuple(span),
        edge_x=edge_x,
        edge_ends=tuple(o.direction),
        width=x_of[_TSTAR],
        height=level[t],
    )


def polyline_drawing(visrep: VisRep) -> Drawing:
    """Vertices at segment midpoints; each edge runs vertically at its
    column, joined to its endpoints with at most one bend per end."""
    points = tuple(
        ((lo + hi) // 2, visrep.vertex_y[v])
        for v, (lo, hi) in enumerate(visrep.vertex_span)
    )
    polylines = []
    for e, x in enumerate(visrep.edge_x):
        tail, head = visrep.edge_ends[e]
        pts: list[tuple[int, int]] = [points[tail]]
        if points[tail][0] != x:
            pts.append((x, visrep.vertex_y[tail]))
        if points[head][0] != x:
            pts.append((x, visrep.vertex_y[head]))
        pts.append(points[head])
        polylines.append(tuple(pts))
    xs = [p[0] for line in polylines for p in line] + [p[0] for p in points]
    ys = [p[1] for line in polylines for p in line] + [p[1] for p in points]
    return Drawing(
        points,
        tuple(polylines),
        max(xs, default=0),
        max(ys, default=0),
    )


def bounding_area(drawing: Drawing) -> int:
    """Width times height of the minimal box around all points and bends;
    a degenerate dimension counts as one unit so areas stay positive."""
    xs = [p[0] for p in drawing.points]
    ys = [p[1] for p in drawing.points]
    for line in drawing.polylines:
        xs.extend(p[0] for p in line)
        ys.extend(p[1] for p in line)
    if not xs:
        return 0
    w = max(max(xs) - min(xs), 1)
    h = max(max(ys) - min(ys), 1)
    return w * h


# ---------------------------------------------------------------------------
# Crossing oracle
# ---------------------------------------------------------------------------


def _segments(drawing: Drawing) -> list[tuple[int, tuple[int, int], tuple[int, int]]]:
    out = []
    for e, line in enumerate(drawing.polylines):
        for a, b in zip(line, line[1:]):
            if a != b:
                out.append((e, a, b))
    return out


def _overlap_1d(a1: int, a2: int, b1: int, b2: int) -> tuple[int, int] | None:
    lo = max(min(a1, a2), min(b1, b2))
    hi = min(max(a1, a2), max(b1, b2))
    return (lo, hi) if lo <= hi else None


def find_crossings(drawing: Drawing) -> list[tuple[int, int]]:
    """Pairs of edges whose polylines intersect illegally.

    Allowed contacts between segments of different edges: a single shared
    endpoint of both segments, or any contact lying on the horizontal
    channel y = y(v) of a vertex v incident to both edges.  Everything else
    (in particular any transversal crossing) is reported.
    """
    ends = {
        e: (line[0], line[-1])
        for e, line in enumerate(drawing.polylines)
    }
    point_level = {p: p[1] for p in drawing.points}
    segs = _segments(drawing)
    bad = []
    for i in range(len(segs)):
        e1, a1, b1 = segs[i]
        for j in range(i + 1, len(segs)):
            e2, a2, b2 = segs[j]
            if e1 == e2:
                continue
            inter = _segment_contact(a1, b1, a2, b2)
            if inter is None:
                continue
            kind, payload = inter
            if kind == "point":
                p = payload
                if p in (a1, b1) and p in (a2, b2):
                    continue  # shared segment endpoint
                if _on_common_channel(e1, e2, p[1], p[1], ends, point_level):
                    continue
                bad.append((min(e1, e2), max(e1, e2)))
            else:  # collinear overlap
                y1, y2 = payload
                if _on_common_channel(e1, e2, y1, y2, ends, point_level):
                    continue
                bad.append((min(e1, e2), max(e1, e2)))
    return sorted(set(bad))


def _on_common_channel(e1, e2, ylo, yhi, ends, point_level) -> bool:
    if ylo != yhi:
        return False
    shared = set(ends[e1]) & set(ends[e2])
    return any(point_level.get(p) == ylo for p in shared)


def _segment_contact(a1, b1, a2, b2):
    """Intersection of two axis-parallel integer segments.

    Returns None, ("point", (x, y)) or ("overlap", (ylo_or_xlo, yhi_or_xhi))
    where the overlap payload carries the shared y (horizontal) range's y
    value twice when horizontal, see caller usage.
    """
    h1 = a1[1] == b1[1]
    h2 = a2[1] == b2[1]
    if h1 and h2:
        if a1[1] != a2[1]:
            return None
        ov = _overlap_1d(a1[0], b1[0], a2[0], b2[0])
        if ov is None:
            return None
        if ov[0] == ov[1]:
            return ("point", (ov[0], a1[1]))
        return ("overlap", (a1[1], a1[1]))
    if not h1 and not h2:
        if a1[0] != a2[0]:
            return None
        ov = _overlap_1d(a1[1], b1[1], a2[1], b2[1])
        if ov is None:
            return None
        if ov[0] == ov[1]:
            return ("point", (a1[0], ov[0]))
        return ("overlap", (ov[0], ov[1]))
    if h2:  # make segment 1 the horizontal one
        a1, b1, a2, b2 = a2, b2, a1, b1
    y = a1[1]
    x = a2[0]
    if min(a1[0], b1[0]) <= x <= max(a1[0], b1[0]) and min(a2[1], b2[1]) <= y <= max(
        a2[1], b2[1]
    ):
        return ("point", (x, y))
    return None


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------


def render_svg(
    drawing: Drawing,
    *,
    scale: int = 24,
    margin: int = 16,
    highlight: frozenset[int] | set[int] = frozenset(),
    vertex_radius: int = 4,
) -> str:
    """Deterministic SVG 1.1 with one path per edge; edges in ``highlight``
    (typically the transitive ones) are drawn red."""
    w = drawing.width * scale + 2 * margin
    h = drawing.height * scale + 2 * margin

    def sx(x: int) -> int:
        return margin + x * scale

    def sy(y: int) -> int:
        return margin + (drawing.height - y) * scale

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for e, line in enumerate(drawing.polylines):
        d = " ".join(
            f"{'M' if i == 0 else 'L'} {sx(x)} {sy(y)}"
            for i, (x, y) in enumerate(line)
        )
        color = "#cc0000" if e in highlight else "#000000"
        lines.append(
            f'<path d="{d}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    for x, y in drawing.points:
        lines.append(
            f'<circle cx="{sx(x)}" cy="{sy(y)}" r="{vertex_radius}" fill="#1f4e99"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def drawing_to_json(drawing: Drawing) -> str:
    payload = {
        "width": drawing.width,
        "height": drawing.height,
        "vertices": [
            {"id": v, "x": p[0], "y": p[1]} for v, p in enumerate(drawing.points)
        ],
        "edges": [
            {"id": e, "points": [[x, y] for x, y in line]}
            for e, line in enumerate(drawing.polylines)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
