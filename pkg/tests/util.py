"""Shared test helpers: orientation fuzzing and an LP-format reader."""

from __future__ import annotations

import random
import re

import storient as st


def random_st_orientation(g, s, t, seed: int) -> st.StOrientation:
    """A pseudo-random valid planar st-orientation.

    Runs the deterministic numbering algorithm on an edge-relabeled copy of
    the graph (same embedding, shuffled edge ids), which shuffles all its
    tie-breaking, then maps the orientation back.
    """
    rng = random.Random(seed)
    perm = list(range(g.edge_count))
    rng.shuffle(perm)  # perm[old] = new id
    inv = [0] * len(perm)
    for old, new in enumerate(perm):
        inv[new] = old
    edges = [g.edges[inv[new]] for new in range(g.edge_count)]
    rotations = [[perm[e] for e in rot] for rot in g.rotations]
    g2 = st.build_embedding(g.vertex_count, edges, rotations, outer_face_hint=(s, t))
    o2 = st.orient_by_numbering(g2, st.st_number(g2, s, t))
    direction = tuple(o2.direction[perm[e]] for e in range(g.edge_count))
    return st.StOrientation(direction, s, t)


# ---------------------------------------------------------------------------
# Minimal LP-format reader (for checking exported models independently)
# ---------------------------------------------------------------------------

_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z][\w]*)")


class LpModel:
    def __init__(self):
        self.objective: dict[str, int] = {}
        self.constraints: list[tuple[str, dict[str, int], str, int]] = []
        self.generals: set[str] = set()
        self.binaries: set[str] = set()
        self.bounds: list[str] = []


def _parse_terms(expr: str) -> dict[str, int]:
    terms: dict[str, int] = {}
    for sign, coef, name in _TERM.findall(expr):
        value = int(coef) if coef else 1
        if sign == "-":
            value = -value
        terms[name] = terms.get(name, 0) + value
    return terms


def parse_lp(text: str) -> LpModel:
    model = LpModel()
    section = None
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("minimize", "subject to", "bounds", "generals", "binaries", "end"):
            section = lowered
            continue
        body.append((section, line))
    for section, line in body:
        if section == "minimize":
            expr = line.split(":", 1)[1] if ":" in line else line
            model.objective.update(_parse_terms(expr))
        elif section == "subject to":
            name, rest = line.split(":", 1)
            m = re.search(r"(<=|>=|=)", rest)
            sense = m.group(1)
            lhs, rhs = rest.split(sense)
            model.constraints.append(
                (name.strip(), _parse_terms(lhs), sense, int(rhs))
            )
        elif section == "bounds":
            model.bounds.append(line)
        elif section == "generals":
            model.generals.update(line.split())
        elif section == "binaries":
            model.binaries.update(line.split())
    return model


def solve_lp_with_milp(model: LpModel):
    """Optimum of a parsed LP via scipy's MILP solver; None when scipy is
    unavailable.  Serves as the external-solver oracle."""
    try:
        import numpy as np
        from scipy.optimize import LinearConstraint, milp
    except ImportError:  # pragma: no cover
        return None
    names = sorted(set(model.objective) | model.generals | model.binaries
                   | {n for _, t, _, _ in model.constraints for n in t})
    index = {n: i for i, n in enumerate(names)}
    c = np.zeros(len(names))
    for n, coef in model.objective.items():
        c[index[n]] = coef
    rows = []
    lbs = []
    ubs = []
    for _name, terms, sense, rhs in model.constraints:
        row = np.zeros(len(names))
        for n, coef in terms.items():
            row[index[n]] = coef
        rows.append(row)
        lbs.append(rhs if sense in ("=", ">=") else -np.inf)
        ubs.append(rhs if sense in ("=", "<=") else np.inf)
    lower = np.zeros(len(names))
    upper = np.array(
        [1.0 if n in model.binaries else np.inf for n in names]
    )
    res = milp(
        c=c,
        constraints=LinearConstraint(np.array(rows), np.array(lbs), np.array(ubs)),
        integrality=np.ones(len(names)),
        bounds=__import__("scipy.optimize", fromlist=["Bounds"]).Bounds(lower, upper),
    )
    assert res.success, res.message
    return round(res.fun)
