"""Exact minimization of transitive edges over planar st-orientations.

The search works on the labeling program from :mod:`storient.ilp` but
branches on the corner (x) variables only: once every corner is S/F, the
cheapest consistent completion of the y and z variables is determined (y is
the AND of its two corners, z the OR over faces), so nothing is lost and a
transitive edge is simply an adjacent S pair in some internal face.

Search design:

* exact counting propagation of the face rule (2 S corners), the vertex
  rule (2 F corners) and the pole rule (all S), with the dual saturation
  forcings in both directions;
* root fixings beyond the model: pole corners S, outer-face corners F
  (implied by summing the counting rules over faces and vertices via
  Euler's formula), degree-2 vertex corners F, plus one shaving sweep that
  fixes any corner whose opposite value immediately contradicts;
* recursive region decomposition: a face is branched by enumerating the
  open placements of its S pair (cheapest immediate commits first, chosen
  fail-first with a locality preference), and whenever the incomplete
  faces fall apart into groups that share no open vertex rule, the groups
  are solved independently and their optima added - no transitive edge can
  be double-counted across groups because a commit needs S corners at both
  endpoints of the edge, which ties the groups together;
* lower bound: committed edges plus, per cluster of pending triangle
  faces, the larger of a greedy edge-disjoint count and T minus a capped
  pairing number (one z edge can pay for two adjacent triangles only if
  both shared-edge endpoints can spare two S corners; candidate pairings
  are probed at the root and capped by an exact budgeted matching);
* before the exact phase, a large-neighborhood pass re-solves small face
  patches around each committed edge of the baseline, which turns the
  unconstrained baseline into a near-optimal incumbent on large instances;
* node/time budgets degrade gracefully: the best incumbent seen is always
  a valid labeling and the result is flagged as unproven.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

from .embedding import PlaneGraph
from .errors import InconsistentLabeling, NotAdmissible
from .labeling import (
    F,
    S,
    UNLABELED,
    StLabeling,
    labels_from_orientation,
    orientation_from_labels,
    validate_labeling,
)
from .orientation import (
    heuristic_orientation,
    transitive_edges_reach,
    validate_st_orientation,
)


@dataclass(frozen=True)
class SolveBudget:
    time_limit_s: float | None = None
    node_limit: int | None = None


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    runtime_s: float
    proven: bool


@dataclass(frozen=True)
class Solution:
    labeling: StLabeling
    objective_value: int
    stats: SolveStats


def _max_compatible_pairings(
    pairs: list[tuple[int, int, tuple[int, int]]],
    slots: dict[int, int],
) -> int:
    """Exact maximum number of triangle pairings usable at once: each
    triangle may appear in one pairing, and each graph vertex u in at most
    (deg(u)-2)//2 of them.  Plain include/exclude search; callers cap the
    candidate count."""
    best = 0
    n = len(pairs)

    def rec(i: int, used_tris: set[int], slots_left: dict[int, int], count: int) -> None:
        nonlocal best
        if count + (n - i) <= best:
            return
        if i == n:
            best = max(best, count)
            return
        fa, fb, (u, v) = pairs[i]
        if (
            fa not in used_tris
            and fb not in used_tris
            and slots_left[u] > 0
            and slots_left[v] > 0
        ):
            used_tris.add(fa)
            used_tris.add(fb)
            slots_left[u] -= 1
            slots_left[v] -= 1
            rec(i + 1, used_tris, slots_left, count + 1)
            used_tris.discard(fa)
            used_tris.discard(fb)
            slots_left[u] += 1
            slots_left[v] += 1
        rec(i + 1, used_tris, slots_left, count)

    rec(0, set(), dict(slots), 0)
    return best


class _State:
    """Assignment state with trail-based undo over the angle variables."""

    def __init__(self, g: PlaneGraph, s: int, t: int) -> None:
        self.g = g
        self.s = s
        self.t = t
        angles = g.angles
        n_ang = len(angles)
        outer = g.outer_face_id

        self.angle_face = [a.face_id for a in angles]
        self.angle_vertex = [a.vertex for a in angles]
        self.is_var = [
            not (a.face_id == outer and a.vertex in (s, t)) for a in angles
        ]
        self.internal = [f.id != outer for f in g.faces]
        self.middle = [v not in (s, t) for v in range(g.vertex_count)]

        self.next_in_face = [0] * n_ang
        self.prev_in_face = [0] * n_ang
        self.edge_next = [0] * n_ang  # edge between a corner and its successor
        self.edge_prev = [0] * n_ang
        for f in g.faces:
            ids = g.face_angle_ids[f.id]
            k = len(ids)
            for i, a in enumerate(ids):
                self.next_in_face[a] = ids[(i + 1) % k]
                self.prev_in_face[a] = ids[(i - 1) % k]
                self.edge_next[a] = angles[a].next_edge
                self.edge_prev[a] = angles[a].prev_edge

        self.val = [-1] * n_ang
        self.face_s = [0] * g.face_count
        self.face_un = [
            len(g.face_angle_ids[f.id]) if self.internal[f.id] else 0
            for f in g.faces
        ]
        self.vert_f = [0] * g.vertex_count
        self.vert_un = [
            g.degree(v) if self.middle[v] else 0 for v in range(g.vertex_count)
        ]
        self.z = [False] * g.edge_count
        self.xtrail: list[int] = []
        self.ztrail: list[int] = []

    # -- assignment & propagation ----------------------------------------

    def apply(self, assignments: list[tuple[int, int]]) -> bool:
        """Assign and propagate; returns False on conflict.  Counter updates
        for an angle always complete before any conflict exit, so undo_to a
        caller mark restores the state exactly even after a failed call."""
        val = self.val
        angle_face = self.angle_face
        angle_vertex = self.angle_vertex
        internal_f = self.internal
        middle_v = self.middle
        face_s = self.face_s
        face_un = self.face_un
        vert_f = self.vert_f
        vert_un = self.vert_un
        z = self.z
        xtrail = self.xtrail
        ztrail = self.ztrail
        face_ids = self.g.face_angle_ids
        vertex_ids = self.g.vertex_angle_ids
        next_in_face = self.next_in_face
        prev_in_face = self.prev_in_face
        edge_next = self.edge_next
        edge_prev = self.edge_prev

        pending = list(assignments)
        while pending:
            a, v = pending.pop()
            cur = val[a]
            if cur != -1:
                if cur != v:
                    return False
                continue
            val[a] = v
            xtrail.append(a)
            f = angle_face[a]
            vx = angle_vertex[a]
            internal = internal_f[f]
            if internal:
                if v == 1:
                    face_s[f] += 1
                    nb = next_in_face[a]
                    if val[nb] == 1:
                        e = edge_next[a]
                        if not z[e]:
                            z[e] = True
                            ztrail.append(e)
                    nb = prev_in_face[a]
                    if val[nb] == 1:
                        e = edge_prev[a]
                        if not z[e]:
                            z[e] = True
                            ztrail.append(e)
                face_un[f] -= 1
            mid = middle_v[vx]
            if mid:
                if v == 0:
                    vert_f[vx] += 1
                vert_un[vx] -= 1
            # all mutations done; conflict checks and forcings follow
            if internal:
                slack = 2 - face_s[f]
                if slack < 0 or face_un[f] < slack:
                    return False
                if face_un[f] > 0 and (slack == 0 or slack == face_un[f]):
                    fill = 1 if slack else 0
                    for b in face_ids[f]:
                        if val[b] == -1:
                            pending.append((b, fill))
            if mid:
                slack = 2 - vert_f[vx]
                if slack < 0 or vert_un[vx] < slack:
                    return False
                if vert_un[vx] > 0 and (slack == 0 or slack == vert_un[vx]):
                    fill = 0 if slack else 1
                    for b in vertex_ids[vx]:
                        if val[b] == -1:
                            pending.append((b, fill))
        return True

    def undo_to(self, xmark: int, zmark: int) -> None:
        while len(self.ztrail) > zmark:
            self.z[self.ztrail.pop()] = False
        while len(self.xtrail) > xmark:
            a = self.xtrail.pop()
            v = self.val[a]
            self.val[a] = -1
            f = self.angle_face[a]
            if self.internal[f]:
                if v == 1:
                    self.face_s[f] -= 1
                self.face_un[f] += 1
            vx = self.angle_vertex[a]
            if self.middle[vx]:
                if v == 0:
                    self.vert_f[vx] -= 1
                self.vert_un[vx] += 1

    def marks(self) -> tuple[int, int]:
        return len(self.xtrail), len(self.ztrail)


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


class _Search:
    def __init__(self, g: PlaneGraph, s: int, t: int, budget: SolveBudget) -> None:
        self.g = g
        self.state = _State(g, s, t)
        self.nodes = 0
        self.exhausted = False
        self.node_limit = budget.node_limit
        self.deadline = (
            time.monotonic() + budget.time_limit_s
            if budget.time_limit_s is not None
            else None
        )
        outer = g.outer_face_id
        # Branch faces in a connected order: breadth-first over the dual
        # restricted to internal faces, seeded at the smallest face.  Each
        # branched face then borders already-decided ones, so propagation
        # and commits act immediately instead of at reassembly time.
        internal_ids = [f.id for f in g.faces if f.id != outer]
        nbrs: dict[int, list[int]] = {fid: [] for fid in internal_ids}
        for e in range(g.edge_count):
            fa, fb = g.faces_of_edge(e)
            if fa != outer and fb != outer and fa != fb:
                nbrs[fa].append(fb)
                nbrs[fb].append(fa)
        by_size = sorted(
            internal_ids, key=lambda fid: (len(g.face_angle_ids[fid]), fid)
        )
        face_order: list[int] = []
        seen_f: set[int] = set()
        for seed in by_size:
            if seed in seen_f:
                continue
            queue = [seed]
            seen_f.add(seed)
            while queue:
                fid = queue.pop(0)
                face_order.append(fid)
                for nb in sorted(
                    set(nbrs[fid]),
                    key=lambda x: (len(g.face_angle_ids[x]), x),
                ):
                    if nb not in seen_f:
                        seen_f.add(nb)
                        queue.append(nb)
        face_order.append(outer)
        order: list[int] = []
        for fid in face_order:
            ids = sorted(g.face_angle_ids[fid], key=lambda a: g.angles[a].prev_edge)
            order.extend(a for a in ids if self.state.is_var[a])
        self.pos_of = {a: i for i, a in enumerate(order)}
        self.branch_order = order
        self.face_rank = {fid: i for i, fid in enumerate(face_order)}
        self.root_cluster: dict[int, int] = {}
        self.cluster_pair_cap: dict[int, int] = {}
        self.face_blocks = {
            f.id: sorted(g.face_angle_ids[f.id], key=lambda a: g.angles[a].prev_edge)
            for f in g.faces
            if f.id != outer
        }
        # triangle faces and their adjacency, for the pending lower bound
        self.tri_edges = {
            f.id: tuple(self.state.edge_next[a] for a in g.face_angle_ids[f.id])
            for f in g.faces
            if f.id != outer and len(g.face_angle_ids[f.id]) == 3
        }
        # One z edge can serve two adjacent pending triangles only when the
        # corners of the shared edge take an S in both faces at both ends,
        # i.e. both endpoints have degree >= 4.  Each candidate pairing
        # stores its four corner variables so the bound can drop it as soon
        # as one of them is F; root probing prunes it up front when forcing
        # all four to S is already contradictory.
        self.tri_adj: dict[int, list[tuple[int, tuple[int, ...]]]] = {
            fid: [] for fid in self.tri_edges
        }
        self._pair_corners: list[tuple[int, int, tuple[int, ...]]] = []
        for e in range(g.edge_count):
            fa, fb = g.faces_of_edge(e)
            if fa in self.tri_adj and fb in self.tri_adj and fa != fb:
                u, v = g.edges[e]
                if g.degree(u) >= 4 and g.degree(v) >= 4:
                    corners = tuple(
                        aid
                        for fid in (fa, fb)
                        for aid in g.face_angle_ids[fid]
                        if g.angles[aid].vertex in (u, v)
                    )
                    self._pair_corners.append((fa, fb, corners))

    def probe_pairings(self) -> None:
        """Keep only triangle pairings that survive forcing their four
        shared corners to S under the current (root) state, then bound how
        many pairings can coexist inside each root cluster."""
        st = self.state
        g = self.g
        live: list[tuple[int, int, tuple[int, ...]]] = []
        for fa, fb, corners in self._pair_corners:
            xmark, zmark = st.marks()
            ok = st.apply([(a, 1) for a in corners])
            st.undo_to(xmark, zmark)
            if ok:
                self.tri_adj[fa].append((fb, corners))
                self.tri_adj[fb].append((fa, corners))
                live.append((fa, fb, corners))

        # root clusters of the surviving adjacency
        self.root_cluster = {fid: -1 for fid in self.tri_edges}
        cid = 0
        for fid in self.tri_edges:
            if self.root_cluster[fid] != -1:
                continue
            queue = [fid]
            self.root_cluster[fid] = cid
            while queue:
                cur = queue.pop()
                for nb, _ in self.tri_adj[cur]:
                    if self.root_cluster[nb] == -1:
                        self.root_cluster[nb] = cid
                        queue.append(nb)
            cid += 1

        # Exact cap per cluster: simultaneous pairings form a matching over
        # triangles, and a pairing spends one S pair at each endpoint of
        # its shared edge, of which vertex u has only (deg(u)-2) // 2.
        by_cluster: dict[int, list[tuple[int, int, tuple[int, int]]]] = {}
        for fa, fb, corners in live:
            u = g.angles[corners[0]].vertex
            v = g.angles[corners[1]].vertex
            if u == v:
                v = g.angles[corners[2]].vertex
            by_cluster.setdefault(self.root_cluster[fa], []).append((fa, fb, (u, v)))
        self.cluster_pair_cap: dict[int, int] = {}
        for c, pairs in by_cluster.items():
            if len(pairs) > 18:
                continue  # effort cap; bound falls back to the pair count
            self.cluster_pair_cap[c] = _max_compatible_pairings(
                pairs, {v: (g.degree(v) - 2) // 2 for p in pairs for v in p[2]}
            )

    def check_budget(self) -> bool:
        """Count a node; flips the exhausted flag when over budget so the
        whole recursion unwinds quickly while keeping its best incumbents."""
        if self.exhausted:
            return False
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                self.exhausted = True
        return not self.exhausted

    def root_fixings(self) -> list[tuple[int, int]]:
        g = self.g
        s, t = self.state.s, self.state.t
        outer = g.outer_face_id
        fix: list[tuple[int, int]] = []
        for pole in (s, t):
            for a in g.vertex_angle_ids[pole]:
                if g.angles[a].face_id != outer:
                    fix.append((a, 1))
        for a in g.face_angle_ids[outer]:
            if g.angles[a].vertex not in (s, t):
                fix.append((a, 0))
        # degree-2 vertices have no S budget at all; seed them so that root
        # propagation can cascade and split the problem into components
        for v in range(g.vertex_count):
            if self.state.middle[v] and g.degree(v) == 2:
                fix.extend((a, 0) for a in g.vertex_angle_ids[v])
        return fix

    def components(self) -> list[list[int]]:
        """Group unassigned variables that share a face or vertex rule."""
        st = self.state
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> None:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        unassigned = [a for a in self.branch_order if st.val[a] == -1]
        for a in unassigned:
            parent[a] = a
        groups: list[tuple[int, ...]] = []
        g = self.g
        for fid in range(g.face_count):
            if st.internal[fid]:
                groups.append(g.face_angle_ids[fid])
        for v in range(g.vertex_count):
            if st.middle[v]:
                groups.append(g.vertex_angle_ids[v])
        for ids in groups:
            first = None
            for a in ids:
                if a in parent:
                    if first is None:
                        first = a
                    else:
                        union(first, a)
        comps: dict[int, list[int]] = {}
        for a in unassigned:
            comps.setdefault(find(a), []).append(a)
        out = [sorted(c, key=self.pos_of.get) for c in comps.values()]
        out.sort(key=lambda c: self.pos_of[c[0]])
        return out

    def tri_bound(self, comp_tris: list[int]) -> int:
        """Lower bound from triangle faces none of whose edges is committed.

        Every such face still has to commit one of its own three edges, and
        one edge lies in at most two faces, so a connected cluster of T
        pending triangles costs at least ceil(T/2); edge-disjoint pending
        triangles cost 1 each.  Both counts are valid, so each cluster
        contributes the larger of the two."""
        st = self.state
        z = st.z
        pending: set[int] = set()
        for fid in comp_tris:
            e0, e1, e2 = self.tri_edges[fid]
            if not (z[e0] or z[e1] or z[e2]):
                pending.add(fid)
        if not pending:
            return 0
        val = st.val
        total = 0
        remaining = set(pending)
        while remaining:
            seed = remaining.pop()
            cluster = [seed]
            queue = [seed]
            adj_pairs = 0
            while queue:
                fid = queue.pop()
                for nb, corners in self.tri_adj[fid]:
                    if (
                        nb in pending
                        and nb > fid
                        and val[corners[0]] != 0
                        and val[corners[1]] != 0
                        and val[corners[2]] != 0
                        and val[corners[3]] != 0
                    ):
                        adj_pairs += 1
                    if nb in remaining:
                        remaining.discard(nb)
                        cluster.append(nb)
                        queue.append(nb)
            used: set[int] = set()
            greedy = 0
            for fid in cluster:
                es = self.tri_edges[fid]
                if es[0] in used or es[1] in used or es[2] in used:
                    continue
                used.update(es)
                greedy += 1
            # pairings are limited by count, live adjacencies, and the
            # vertex-budget cap of the enclosing root cluster
            size = len(cluster)
            pairable = min(size // 2, adj_pairs)
            cap = self.cluster_pair_cap.get(self.root_cluster.get(seed, -1))
            if cap is not None:
                pairable = min(pairable, cap)
            total += max(greedy, size - pairable)
        return total

    def _placements(self, fid: int) -> tuple[list[int], list[list[int]]]:
        """Unassigned corners of a face plus every way to finish its S pair,
        enumerated so that the induced 0/1 vectors over the face block come
        out in ascending lexicographic order (F sorts before S)."""
        st = self.state
        block = self.face_blocks[fid]
        unassigned = [a for a in block if st.val[a] == -1]
        need = 2 - st.face_s[fid]
        u = len(unassigned)
        plist: list[list[int]] = []
        if need <= 0:
            plist.append([])
        elif need == 1:
            plist.extend([unassigned[j]] for j in range(u - 1, -1, -1))
        else:
            for i in range(u - 2, -1, -1):
                for j in range(u - 1, i, -1):
                    plist.append([unassigned[i], unassigned[j]])
        return unassigned, plist

    def _split_region(self, faces: list[int]) -> list[list[int]]:
        """Partition incomplete faces into groups not linked by any vertex
        rule with open corners on both sides; groups complete independently."""
        st = self.state
        by_vertex: dict[int, list[int]] = {}
        for fid in faces:
            for a in self.face_blocks[fid]:
                if st.val[a] == -1:
                    vx = st.angle_vertex[a]
                    if st.middle[vx]:
                        by_vertex.setdefault(vx, []).append(fid)
        parent = {fid: fid for fid in faces}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for linked in by_vertex.values():
            r0 = find(linked[0])
            for fid in linked[1:]:
                r = find(fid)
                if r != r0:
                    parent[r] = r0
        groups: dict[int, list[int]] = {}
        for fid in faces:
            groups.setdefault(find(fid), []).append(fid)
        out = list(groups.values())
        out.sort(key=lambda fs: self.face_rank[fs[0]])
        return out

    def _region_lb(self, faces: list[int]) -> int:
        return self.tri_bound([fid for fid in faces if fid in self.tri_edges])

    def solve_region(
        self, faces: list[int], ub: int
    ) -> tuple[int, dict[int, int] | None]:
        """Minimum extra commits needed to complete ``faces``.

        Returns (value, assignment) with value < ub on success, or a pair
        (bound >= ub, None) when no completion beats ub (or the budget ran
        out).  The state is left exactly as it was on entry.
        """
        st = self.state
        faces = [fid for fid in faces if st.face_un[fid] > 0]
        if not faces:
            return 0, {}
        lb0 = self._region_lb(faces)
        if ub <= lb0:
            return ub, None

        comps = self._split_region(faces) if len(faces) >= 4 else [faces]
        if len(comps) > 1:
            lbs = [self._region_lb(c) for c in comps]
            total = 0
            combined: dict[int, int] = {}
            for i, comp in enumerate(comps):
                rest = sum(lbs[i + 1 :])
                v, asg = self.solve_region(comp, ub - total - rest)
                if asg is None:
                    return total + v + rest, None
                total += v
                combined.update(asg)
            return total, combined

        # fail-first with locality: prefer faces already touched by earlier
        # decisions (keeps the frontier compact so regions split sooner),
        # then the face with the fewest open placements
        def width(fid: int) -> tuple[int, int, int]:
            u = st.face_un[fid]
            need = 2 - st.face_s[fid]
            count = u * (u - 1) // 2 if need == 2 else u
            untouched = 1 if u == len(self.face_blocks[fid]) else 0
            return untouched, count, self.face_rank[fid]

        fid = min(faces, key=width)
        rest_faces = [f for f in faces if f != fid]
        unassigned, plist = self._placements(fid)
        ranked = sorted(
            ((self._immediate_commits(fid, p), i, p) for i, p in enumerate(plist)),
            key=lambda cp: (cp[0], cp[1]),
        )
        best_v = ub
        best_asg: dict[int, int] | None = None
        for cost, _, pset in ranked:
            # in-face commits underestimate the placement's true delta
            if cost >= best_v:
                continue
            if not self.check_budget():
                break
            xmark, zmark = st.marks()
            if st.apply([(a, 1 if a in pset else 0) for a in unassigned]):
                delta = len(st.ztrail) - zmark
                if delta < best_v:
                    v, asg = self.solve_region(rest_faces, best_v - delta)
                    if asg is not None:
                        best_v = delta + v
                        best_asg = {
                            b: st.val[b] for b in st.xtrail[xmark:]
                        }
                        best_asg.update(asg)
            st.undo_to(xmark, zmark)
            if best_asg is not None and best_v <= lb0:
                break
        return best_v, best_asg

    def _immediate_commits(self, fid: int, pset: list[int]) -> int:
        """Fresh commits this S placement would create inside its face."""
        st = self.state
        fresh: set[int] = set()
        for a in pset:
            for nb, e in (
                (st.next_in_face[a], st.edge_next[a]),
                (st.prev_in_face[a], st.edge_prev[a]),
            ):
                if not st.z[e] and (st.val[nb] == 1 or nb in pset):
                    fresh.add(e)
        return len(fresh)

    def improve_assignment(
        self, assignment: dict[int, int], deadline: float | None
    ) -> dict[int, int]:
        """Large-neighborhood polish of a full assignment.

        Repeatedly freeze everything outside a small patch of faces around
        one committed edge and re-solve the patch exactly; keep strict
        improvements.  Values forced by the frozen part never differ from
        the incumbent (it completes the same context), so only re-solved
        variables change.  Runs to a fixpoint or until the budget or the
        given deadline runs out; purely an incumbent improver.
        """
        st = self.state
        g = self.g
        outer = g.outer_face_id
        free_vars = sorted(assignment)
        # face adjacency over shared middle vertices, for patch growth
        neighbors: dict[int, set[int]] = {}
        for v in range(g.vertex_count):
            if not st.middle[v]:
                continue
            fids = {
                g.angles[a].face_id
                for a in g.vertex_angle_ids[v]
                if g.angles[a].face_id != outer
            }
            for f in fids:
                neighbors.setdefault(f, set()).update(fids - {f})

        def patch_around(e: int, radius: int, cap: int) -> list[int]:
            base = {f for f in g.faces_of_edge(e) if f != outer}
            rings = [sorted(base, key=self.face_rank.get)]
            seen = set(base)
            for _ in range(radius):
                nxt = set()
                for f in seen:
                    nxt.update(neighbors.get(f, ()))
                nxt -= seen
                if not nxt:
                    break
                rings.append(sorted(nxt, key=self.face_rank.get))
                seen |= nxt
            ordered = [f for ring in rings for f in ring]
            return ordered[:cap]

        base_x, base_z = st.marks()
        stale = 0
        passes = 0
        while stale < 2 and not self.exhausted:
            improved = False
            passes += 1
            radius, cap = (1, 14) if passes % 2 else (2, 20)
            ok = st.apply(sorted(assignment.items()))
            assert ok, "incumbent must be consistent"
            total = len(st.ztrail) - base_z
            committed = [e for e in st.ztrail[base_z:]]
            st.undo_to(base_x, base_z)
            for e in sorted(committed):
                if self.exhausted or (
                    deadline is not None and time.monotonic() > deadline
                ):
                    return assignment
                patch = patch_around(e, radius, cap)
                patch_set = set(patch)
                frozen = [
                    (a, assignment[a])
                    for a in free_vars
                    if st.angle_face[a] not in patch_set
                ]
                xmark, zmark = st.marks()
                if not st.apply(frozen):
                    st.undo_to(xmark, zmark)
                    continue
                fixed = len(st.ztrail) - zmark
                ub = total - fixed
                if ub <= 0:
                    st.undo_to(xmark, zmark)
                    continue
                v, asg = self._solve_patch(
                    [f for f in patch if st.face_un[f] > 0], ub
                )
                if asg is not None and fixed + v < total:
                    assignment.update(asg)
                    total = fixed + v
                    improved = True
                st.undo_to(xmark, zmark)
            stale = 0 if improved else stale + 1
        return assignment

    def _solve_patch(
        self, faces: list[int], ub: int, patch_nodes: int = 20_000
    ) -> tuple[int, dict[int, int] | None]:
        """solve_region under a private node cap so a single stubborn patch
        cannot drain the whole budget; the global budget verdict is kept."""
        saved_limit = self.node_limit
        saved_exhausted = self.exhausted
        cap = self.nodes + patch_nodes
        self.node_limit = cap if saved_limit is None else min(saved_limit, cap)
        result = self.solve_region(faces, ub)
        self.node_limit = saved_limit
        if self.exhausted and not saved_exhausted:
            truly_out = (
                saved_limit is not None and self.nodes > saved_limit
            ) or (
                self.deadline is not None and time.monotonic() > self.deadline
            )
            if not truly_out:
                self.exhausted = False  # only the patch cap fired
        return result

    def solve_component(
        self, comp: list[int], heur_val: list[int]
    ) -> tuple[int, dict[int, int], bool]:
        st = self.state
        base_x, base_z = st.marks()
        face_set = {self.state.angle_face[a] for a in comp}
        comp_faces = sorted(face_set, key=self.face_rank.get)

        ok = st.apply([(a, heur_val[a]) for a in comp])
        assert ok, "baseline assignment must be consistent"
        heur_extra = len(st.ztrail) - base_z
        heur_assign = {a: st.val[a] for a in comp}
        st.undo_to(base_x, base_z)

        root_lb = self._region_lb(comp_faces)
        if heur_extra == root_lb or self.exhausted:
            # baseline attains the lower bound (provably optimal), or there
            # is no budget left to improve on it
            return heur_extra, heur_assign, not self.exhausted
        value, assignment = self.solve_region(comp_faces, heur_extra + 1)
        st.undo_to(base_x, base_z)
        proven = not self.exhausted
        if assignment is None:
            return heur_extra, heur_assign, proven
        full = dict(heur_assign)
        full.update(assignment)
        return value, full, proven


def solve_min_transitive(
    g: PlaneGraph, s: int, t: int, budget: SolveBudget | None = None
) -> Solution:
    """Minimize the number of transitive edges over all planar
    st-orientations of g; returns the optimal labeling, its objective and
    search statistics.  With an exhausted budget the best incumbent comes
    back with ``stats.proven`` False."""
    t0 = time.monotonic()
    budget = budget or SolveBudget()
    if sys.getrecursionlimit() < 4 * g.face_count + 1000:
        sys.setrecursionlimit(4 * g.face_count + 1000)
    heur_o = heuristic_orientation(g, s, t)  # raises NotAdmissible when unusable
    heur_lab = labels_from_orientation(g, heur_o, s, t)
    heur_val = [
        1 if m == S else (0 if m == F else -1) for m in heur_lab.labels
    ]

    search = _Search(g, s, t, budget)
    st = search.state
    ok = st.apply(search.root_fixings())
    if not ok:
        raise NotAdmissible("root propagation failed on an admissible instance")
    # shaving: a corner whose value immediately contradicts is fixed to the
    # other one, cascading before any branching happens
    changed = True
    while changed:
        changed = False
        for a in search.branch_order:
            if st.val[a] != -1:
                continue
            for v in (0, 1):
                xmark, zmark = st.marks()
                feasible = st.apply([(a, v)])
                st.undo_to(xmark, zmark)
                if not feasible:
                    ok = st.apply([(a, 1 - v)])
                    if not ok:
                        raise NotAdmissible("contradictory corner at root")
                    changed = True
                    break
    search.probe_pairings()

    # polish the baseline with a large-neighborhood pass before the exact
    # search: big instances then enter branch and bound with a near-optimal
    # incumbent instead of the raw unconstrained one
    baseline = {a: heur_val[a] for a in search.branch_order if st.val[a] == -1}
    open_faces = sum(1 for f in g.faces if st.face_un[f.id] > 0)
    if baseline and open_faces >= 20:
        # big instances rarely close exactly, so they get a larger polish
        share = 0.8 if open_faces > 120 else 0.6
        if budget.time_limit_s is not None:
            lns_deadline = t0 + share * budget.time_limit_s
        else:
            lns_deadline = time.monotonic() + 15.0
        baseline = search.improve_assignment(baseline, lns_deadline)
    lns_val = heur_val[:]
    for a, v in baseline.items():
        lns_val[a] = v

    proven = True
    assignments: dict[int, int] = {}
    for comp in search.components():
        if not proven:
            # budget is gone: fall back to the baseline for remaining parts
            assignments.update({a: lns_val[a] for a in comp})
            continue
        _, assign, comp_proven = search.solve_component(comp, lns_val)
        assignments.update(assign)
        proven = proven and comp_proven

    final = [(a, v) for a, v in sorted(assignments.items())]
    ok = st.apply(final)
    assert ok, "optimal component assignments must combine consistently"
    objective = len(st.ztrail)

    labels = []
    for a in g.angles:
        if not st.is_var[a.id]:
            labels.append(UNLABELED)
        else:
            labels.append(S if st.val[a.id] == 1 else F)
    labeling = StLabeling(tuple(labels), s, t)
    stats = SolveStats(
        nodes=search.nodes, runtime_s=time.monotonic() - t0, proven=proven
    )
    return Solution(labeling=labeling, objective_value=objective, stats=stats)


def verify_solution(g: PlaneGraph, s: int, t: int, solution: Solution) -> bool:
    """Independent check: the labeling is valid and its decoded orientation
    has exactly objective_value transitive edges by the reachability test."""
    if not validate_labeling(g, solution.labeling, s, t).ok:
        return False
    try:
        o = orientation_from_labels(g, solution.labeling, s, t)
    except InconsistentLabeling:
        return False
    if not validate_st_orientation(g, o, s, t).ok:
        return False
    return len(transitive_edges_reach(g, o)) == solution.objective_value
