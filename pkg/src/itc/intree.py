"""Construction and validation of the nearest-descent in-tree.

Every point links to the closest point among those with strictly lower
potential, or equal potential and smaller index; ties on distance resolve
to the smallest candidate index. Exactly one point (the global potential
minimum, smallest index among exact ties) has no candidate and becomes the
root. The comparisons are exact 64-bit comparisons: no tolerance, no
randomness, so the construction is a pure function of (distances,
potentials, index order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import DistanceMatrix, InTree, PotentialField

_BLOCK = 256


def build_intree(dm: DistanceMatrix, pf: PotentialField) -> InTree:
    """Link each point to its transfer target (nearest lower-potential point).

    Candidate set for point i: every j with p[j] < p[i], plus every j < i
    with p[j] == p[i]. Nonempty set: target is the smallest-index j among
    the distance minimizers, weight the corresponding distance. Empty set:
    i is the root (self target, ABSENT weight).
    """
    d = dm.values
    p = pf.p
    n = dm.n
    if p.shape[0] != n:
        raise ValueError(f"dimension mismatch: {n} points vs {p.shape[0]} potentials")
    idx = np.arange(n)
    target = np.empty(n, dtype=np.int64)
    weight = np.empty(n, dtype=np.float64)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        rows = slice(lo, hi)
        p_row = p[rows, None]
        candidate = (p[None, :] < p_row) | ((p[None, :] == p_row) & (idx[None, :] < idx[rows, None]))
        masked = np.where(candidate, d[rows], np.inf)
        best = np.argmin(masked, axis=1)  # first minimum = smallest index
        has = candidate.any(axis=1)
        target[rows] = np.where(has, best, idx[rows])
        weight[rows] = np.where(has, masked[np.arange(hi - lo), best], np.nan)
    return InTree(target=target, weight=weight)


@dataclass(frozen=True)
class Violation:
    """One failed structural condition with the vertices that witness it."""

    condition: str   # "a", "b", "c", or "d"
    vertices: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"({self.condition}) {self.detail}: vertices {list(self.vertices)}"


def validate_intree(t: InTree) -> list[Violation]:
    """Check the in-tree forest conditions; empty list means valid.

    (a) each undirected component holds exactly one proper root
    (b) every non-root vertex carries exactly one well-formed out-edge
    (c) no directed cycle among non-root edges
    (d) component count equals root count
    """
    n = t.n
    idx = np.arange(n)
    violations: list[Violation] = []

    in_range = (t.target >= 0) & (t.target < n)
    for i in np.flatnonzero(~in_range):
        violations.append(Violation("b", (int(i),), f"target {int(t.target[i])} out of range"))
    if violations:
        return violations

    self_loop = t.target == idx
    weight_absent = np.isnan(t.weight)
    root = self_loop & weight_absent
    for i in np.flatnonzero(self_loop & ~weight_absent):
        violations.append(Violation("a", (int(i),),
                                    "self-loop carries a finite weight (not a valid root)"))
    for i in np.flatnonzero(~self_loop & weight_absent):
        violations.append(Violation("b", (int(i),), "outgoing edge has no weight"))
    for i in np.flatnonzero(~self_loop & (t.weight < 0)):
        violations.append(Violation("b", (int(i),), "negative edge weight"))

    # undirected components over the non-self edges
    parent = idx.copy()

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in np.flatnonzero(~self_loop):
        ra, rb = find(int(i)), find(int(t.target[i]))
        if ra != rb:
            parent[ra] = rb
    comp_of = np.array([find(int(i)) for i in range(n)])
    components = np.unique(comp_of)

    roots_in_comp = {int(c): [] for c in components}
    for r in np.flatnonzero(root):
        roots_in_comp[int(comp_of[r])].append(int(r))
    for c in components:
        rs = roots_in_comp[int(c)]
        if len(rs) != 1:
            members = tuple(int(v) for v in np.flatnonzero(comp_of == c))
            violations.append(Violation("a", members,
                                        f"component has {len(rs)} roots, expected 1"))

    # directed cycle check: follow targets, self-loops terminate
    state = np.zeros(n, dtype=np.int8)  # 0 unvisited, 1 on path, 2 done
    for start in range(n):
        if state[start]:
            continue
        path = []
        v = start
        while True:
            if state[v] == 1:
                cyc_from = path.index(v)
                cycle = tuple(path[cyc_from:])
                violations.append(Violation("c", cycle, "directed cycle"))
                for u in path:
                    state[u] = 2
                break
            if state[v] == 2:
                for u in path:
                    state[u] = 2
                break
            state[v] = 1
            path.append(v)
            nxt = int(t.target[v])
            if nxt == v:
                for u in path:
                    state[u] = 2
                break
            v = nxt

    root_cnt = int(root.sum())
    if components.size != root_cnt:
        violations.append(Violation("d", tuple(int(r) for r in np.flatnonzero(root)),
                                    f"{components.size} components vs {root_cnt} roots"))
    return violations


def restore_edge(t: InTree, i: int) -> InTree:
    """Put back the most recent cut edge of vertex i (Undo for one vertex).

    The cut_log entry stays, flagged restored, so history remains auditable.
    """
    for rec in reversed(t.cut_log):
        if rec.vertex == i and not rec.restored:
            t.target[i] = rec.prev_target
            t.weight[i] = rec.prev_weight
            rec.restored = True
            return t
    raise ValueError(f"vertex {i} has no cut edge to restore")


def undo_last_cut(t: InTree) -> int:
    """Revert the most recent unrestored cut entirely (entry removed).

    Returns the vertex whose edge came back.
    """
    for pos in range(len(t.cut_log) - 1, -1, -1):
        rec = t.cut_log[pos]
        if not rec.restored:
            t.target[rec.vertex] = rec.prev_target
            t.weight[rec.vertex] = rec.prev_weight
            del t.cut_log[pos]
            return rec.vertex
    raise ValueError("nothing to undo")
