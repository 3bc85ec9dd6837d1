"""Integer program whose solutions are the valid angle labelings.

Binary x variables carry the S/F choice per labeled angle (named by their
vertex-face pair), binary y variables flag a boundary edge of an internal
face whose two endpoint corners are both S (that edge then coincides with
one full side of the face, hence is transitive), and integer z variables
count each transitive edge once across its faces:

    min  sum z_e
    (2)  sum of x over the corners of f            = 2        internal f
    (3)  sum of x over the corners at v            = deg(v)-2 for v != s,t
    (4)  x at s in f                               = 1        internal f at s
    (5)  x at t in f                               = 1        internal f at t
    (6)  x_u + x_v <= y_ef + 1                     internal f, edge e of f
    (7)  z_e >= y_ef                               per internal face at e

x and y are binary; z is a non-negative integer (minimization drives it to
0/1).  The model is exported in CPLEX LP text format for external solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import PlaneGraph
from .errors import NotAdmissible
from . import embedding as _emb


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[int, str], ...]  # (coefficient, variable name)
    sense: str  # "<=", ">=", "="
    rhs: int


@dataclass(frozen=True)
class IlpModel:
    x_vars: tuple[str, ...]
    x_angles: tuple[int, ...]  # angle id behind each x variable
    y_vars: tuple[str, ...]
    y_keys: tuple[tuple[int, int], ...]  # (edge id, face id)
    z_vars: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[str, ...]  # unit coefficients

    @property
    def variable_names(self) -> tuple[str, ...]:
        return self.x_vars + self.y_vars + self.z_vars


def build_model(g: PlaneGraph, s: int, t: int) -> IlpModel:
    """Instantiate the labeling program for an admissible plane instance."""
    if not _emb.check_st_admissible(g, s, t):
        raise NotAdmissible(f"({s},{t}) is not an admissible pole pair")
    outer = g.outer_face_id
    if outer not in (g.faces_of_vertex(s) & g.faces_of_vertex(t)):
        raise NotAdmissible("s and t must lie on the outer face of the embedding")

    x_names: list[str] = []
    x_angles: list[int] = []
    name_of_angle: dict[int, str] = {}
    used_names: set[str] = set()
    for a in g.angles:
        if a.face_id == outer and a.vertex in (s, t):
            continue  # unlabeled corners carry no variable
        name = f"x_v{a.vertex}_f{a.face_id}"
        if name in used_names:  # repeated (v,f) pair: non-simple boundary
            name = f"{name}_a{a.id}"
        used_names.add(name)
        x_names.append(name)
        x_angles.append(a.id)
        name_of_angle[a.id] = name

    y_names: list[str] = []
    y_keys: list[tuple[int, int]] = []
    y_name_of: dict[tuple[int, int], str] = {}
    for f in g.faces:
        if f.is_outer:
            continue
        for e in sorted(set(f.edge_ids())):
            name = f"y_e{e}_f{f.id}"
            y_names.append(name)
            y_keys.append((e, f.id))
            y_name_of[(e, f.id)] = name

    z_names = [f"z_e{e}" for e in range(g.edge_count)]

    cons: list[LinearConstraint] = []
    for f in g.faces:
        if f.is_outer:
            continue
        terms = tuple((1, name_of_angle[a]) for a in g.face_angle_ids[f.id])
        cons.append(LinearConstraint(f"c2_f{f.id}", terms, "=", 2))
    for v in range(g.vertex_count):
        if v in (s, t):
            continue
        terms = tuple((1, name_of_angle[a]) for a in g.vertex_angle_ids[v])
        cons.append(LinearConstraint(f"c3_v{v}", terms, "=", g.degree(v) - 2))
    for tag, pole in (("c4", s), ("c5", t)):
        for a in g.vertex_angle_ids[pole]:
            if g.angles[a].face_id == outer:
                continue
            cons.append(
                LinearConstraint(
                    f"{tag}_f{g.angles[a].face_id}",
                    ((1, name_of_angle[a]),),
                    "=",
                    1,
                )
            )
    for f in g.faces:
        if f.is_outer:
            continue
        ids = g.face_angle_ids[f.id]
        k = len(ids)
        rows = {}
        for i in range(k):
            e = g.angles[ids[i]].next_edge  # edge between corners i and i+1
            rows[e] = (ids[i], ids[(i + 1) % k])
        for e in sorted(rows):
            a1, a2 = rows[e]
            cons.append(
                LinearConstraint(
                    f"c6_e{e}_f{f.id}",
                    (
                        (1, name_of_angle[a1]),
                        (1, name_of_angle[a2]),
                        (-1, y_name_of[(e, f.id)]),
                    ),
                    "<=",
                    1,
                )
            )
    for e in range(g.edge_count):
        for fid in g.faces_of_edge(e):
            if fid == outer:
                continue
            cons.append(
                LinearConstraint(
                    f"c7_e{e}_f{fid}",
                    ((1, z_names[e]), (-1, y_name_of[(e, fid)])),
                    ">=",
                    0,
                )
            )

    return IlpModel(
        x_vars=tuple(x_names),
        x_angles=tuple(x_angles),
        y_vars=tuple(y_names),
        y_keys=tuple(y_keys),
        z_vars=tuple(z_names),
        constraints=tuple(cons),
        objective=tuple(z_names),
    )


def export_lp(model: IlpModel) -> str:
    """Render the model in LP file format; byte-stable for a fixed model."""
    out: list[str] = []
    out.append("Minimize")
    out.append(" obj: " + " + ".join(model.objective))
    out.append("Subject To")
    for c in model.constraints:
        parts: list[str] = []
        for coef, name in c.terms:
            sign = "-" if coef < 0 else ("+" if parts else "")
            mag = abs(coef)
            term = name if mag == 1 else f"{mag} {name}"
            parts.append(f"{sign} {term}".strip())
        out.append(f" {c.name}: {' '.join(parts)} {c.sense} {c.rhs}")
    out.append("Bounds")
    for name in model.z_vars:
        out.append(f" 0 <= {name}")
    out.append("Generals")
    out.append(" " + " ".join(model.z_vars))
    out.append("Binaries")
    out.append(" " + " ".join(model.x_vars + model.y_vars))
    out.append("End")
    return "\n".join(out) + "\n"
