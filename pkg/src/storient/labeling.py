"""Angle labelings of plane st-graphs.

Every planar st-orientation corresponds to a labeling of the face corners
with S (the two edges of the corner point the same way relative to the
corner vertex) or F (they disagree).  The corners at s and t in the outer
face stay unlabeled.  Valid labelings satisfy four local counting rules:

  L1  every other corner carries S or F;
  L2  every internal face has exactly 2 S corners;
  L3  every vertex v outside {s,t} has deg(v)-2 S corners and 2 F corners;
  L4  corners at s and t in internal faces are all S.

Decoding walks outward from s (whose edges all leave s) and transfers the
known side of each angle constraint to the unknown side until every edge is
directed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .embedding import PlaneGraph
from .errors import FormatError, InconsistentLabeling, InvalidOrientation
from .orientation import StOrientation, validate_st_orientation

S = "S"
F = "F"
UNLABELED = "-"


@dataclass(frozen=True)
class StLabeling:
    """Label per angle id; source and sink record which corners are exempt."""

    labels: tuple[str, ...]
    source: int
    sink: int

    def label(self, angle_id: int) -> str:
        return self.labels[angle_id]


@dataclass(frozen=True)
class LabelingReport:
    ok: bool
    l1_bad_angles: tuple[int, ...]
    l2_bad_faces: tuple[int, ...]
    l3_bad_vertices: tuple[int, ...]
    l4_bad_angles: tuple[int, ...]


def _unlabeled_angle_ids(g: PlaneGraph, s: int, t: int) -> frozenset[int]:
    outer = g.face_angle_ids[g.outer_face_id]
    return frozenset(a for a in outer if g.angles[a].vertex in (s, t))


def labels_from_orientation(
    g: PlaneGraph, o: StOrientation, s: int, t: int
) -> StLabeling:
    """Read the angle labels off a valid planar st-orientation."""
    report = validate_st_orientation(g, o, s, t)
    if not report.ok:
        raise InvalidOrientation(
            f"not a valid st-orientation: sources={report.sources} "
            f"sinks={report.sinks} acyclic={report.acyclic}"
        )
    if g.outer_face_id not in (g.faces_of_vertex(s) & g.faces_of_vertex(t)):
        raise InvalidOrientation("s and t must lie on the outer face")
    exempt = _unlabeled_angle_ids(g, s, t)
    labels = []
    for a in g.angles:
        if a.id in exempt:
            labels.append(UNLABELED)
            continue
        out_prev = o.direction[a.prev_edge][0] == a.vertex
        out_next = o.direction[a.next_edge][0] == a.vertex
        labels.append(S if out_prev == out_next else F)
    return StLabeling(tuple(labels), s, t)


def validate_labeling(g: PlaneGraph, lab: StLabeling, s: int, t: int) -> LabelingReport:
    exempt = _unlabeled_angle_ids(g, s, t)
    l1 = [
        a.id
        for a in g.angles
        if (lab.labels[a.id] == UNLABELED) != (a.id in exempt)
        or lab.labels[a.id] not in (S, F, UNLABELED)
    ]
    l2 = []
    for f in g.faces:
        if f.is_outer:
            continue
        marks = [lab.labels[a] for a in g.face_angle_ids[f.id]]
        if marks.count(S) != 2 or marks.count(F) != f.degree - 2:
            l2.append(f.id)
    l3 = []
    for v in range(g.vertex_count):
        if v in (s, t):
            continue
        marks = [lab.labels[a] for a in g.vertex_angle_ids[v]]
        if marks.count(S) != g.degree(v) - 2 or marks.count(F) != 2:
            l3.append(v)
    l4 = [
        a
        for v in (s, t)
        for a in g.vertex_angle_ids[v]
        if g.angles[a].face_id != g.outer_face_id and lab.labels[a] != S
    ]
    return LabelingReport(
        ok=not (l1 or l2 or l3 or l4),
        l1_bad_angles=tuple(l1),
        l2_bad_faces=tuple(l2),
        l3_bad_vertices=tuple(l3),
        l4_bad_angles=tuple(l4),
    )


def orientation_from_labels(
    g: PlaneGraph, lab: StLabeling, s: int, t: int
) -> StOrientation:
    """Decode a labeling back into the unique orientation it encodes.

    Starts with every edge at s directed outward and propagates each angle
    constraint (S keeps the side of the shared vertex, F flips it) along the
    rotation at every vertex.  Raises InconsistentLabeling if two rules ever
    force opposite directions, which means the input violates the
    characterization despite any local counts it may satisfy.
    """
    n = g.vertex_count
    m = g.edge_count
    # tail[e] = decided tail vertex, or -1
    tail = [-1] * m
    queue: deque[int] = deque()

    def commit(e: int, tl: int) -> None:
        if tail[e] == -1:
            tail[e] = tl
            queue.append(e)
        elif tail[e] != tl:
            u, v = g.edges[e]
            raise InconsistentLabeling(
                f"edge {e} forced both {tl}->? and {tail[e]}->?"
            )

    for e, _w in g.neighbors(s):
        commit(e, s)

    while queue:
        e = queue.popleft()
        for v in g.edges[e]:
            outgoing = tail[e] == v
            for lookup, other_is_next in (
                (g._angle_by_prev, True),
                (g._angle_by_next, False),
            ):
                aid = lookup.get((v, e))
                if aid is None:
                    continue
                mark = lab.labels[aid]
                if mark == UNLABELED:
                    continue
                ang = g.angles[aid]
                other = ang.next_edge if other_is_next else ang.prev_edge
                other_out = outgoing if mark == S else not outgoing
                u2, v2 = g.edges[other]
                commit(other, v if other_out else (v2 if u2 == v else u2))

    if any(t_ == -1 for t_ in tail):
        missing = [e for e in range(m) if tail[e] == -1]
        raise InconsistentLabeling(f"propagation stalled; undirected edges {missing}")
    direction = tuple(
        (u, v) if tail[e] == u else (v, u) for e, (u, v) in enumerate(g.edges)
    )
    return StOrientation(direction, s, t)


# ---------------------------------------------------------------------------
# Text format (.lab)
# ---------------------------------------------------------------------------


def write_lab(g: PlaneGraph, lab: StLabeling) -> str:
    lines = []
    for a in g.angles:
        lines.append(
            f"{a.face_id} {a.vertex} {a.prev_edge} {a.next_edge} {lab.labels[a.id]}"
        )
    return "\n".join(lines) + "\n"


def parse_lab(text: str, g: PlaneGraph, s: int, t: int) -> StLabeling:
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 5 or parts[4] not in (S, F, UNLABELED):
            raise FormatError(f"bad labeling line: {ln!r}")
        rows.append((int(parts[0]), int(parts[1]), int(parts[2]), int(parts[3]), parts[4]))
    if len(rows) != len(g.angles):
        raise FormatError(f"expected {len(g.angles)} angle lines, got {len(rows)}")
    labels = [UNLABELED] * len(g.angles)
    for i, (fid, v, pe, ne, mark) in enumerate(rows):
        a = g.angles[i]
        if (a.face_id, a.vertex, a.prev_edge, a.next_edge) != (fid, v, pe, ne):
            raise FormatError(f"angle row {i} does not match the embedding")
        labels[i] = mark
    return StLabeling(tuple(labels), s, t)
