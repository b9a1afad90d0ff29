"""Edge cutting: removing inter-cluster edges from the in-tree.

Five routes to choose the victims: the K longest edges, iterative cutting
supervised by labeled points, click-designated edges (smallest deflection
angle), box selection on the (|potential|, weight) scatter, and the top-K
weight-times-|potential| products. All of them funnel through cut_edge,
which turns the start vertex into a new root and logs the cut for undo.

Tie rules are fixed everywhere: equal-length (or equal-score) edges cut in
ascending start-vertex order, so cutting is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data_model import ABSENT, CutRecord, InTree, PotentialField, SupervisionSet
from .rootfind import find_root_sequential


@dataclass(frozen=True)
class DecisionGraphPoint:
    """One vertex in the (|potential|, edge weight) scatter; roots carry
    ABSENT weight and gamma."""

    index: int           # 0-based vertex
    abs_potential: float
    edge_weight: float   # NaN when the vertex has no outgoing edge
    gamma: float         # edge_weight * abs_potential, NaN for roots


@dataclass(frozen=True)
class ClickPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("click coordinates must be finite")


def cut_edge(t: InTree, i: int, method_tag: str) -> InTree:
    """Remove vertex i's outgoing edge, making i a root."""
    if not 0 <= i < t.n:
        raise IndexError(f"vertex {i} out of range")
    if not np.isfinite(t.weight[i]):
        raise ValueError(f"vertex {i} is already a root; nothing to cut")
    t.cut_log.append(CutRecord(vertex=i, prev_target=int(t.target[i]),
                               prev_weight=float(t.weight[i]), method=method_tag))
    t.target[i] = i
    t.weight[i] = ABSENT
    return t


def _descending_edge_order(t: InTree) -> np.ndarray:
    """Uncut edges sorted by weight descending, start index ascending on ties."""
    starts = t.finite_edge_starts()
    return starts[np.lexsort((starts, -t.weight[starts]))]


def cut_k_longest(t: InTree, k_clusters: int) -> InTree:
    """Cut the longest edges until the forest has k_clusters roots."""
    m = _cuts_needed(t, k_clusters)
    for i in _descending_edge_order(t)[:m]:
        cut_edge(t, int(i), "k-cut")
    return t


def _cuts_needed(t: InTree, k_clusters: int) -> int:
    roots = t.root_count()
    if k_clusters > t.n:
        raise ValueError(f"cannot form {k_clusters} clusters from {t.n} points")
    if k_clusters < roots:
        raise ValueError(f"{k_clusters} clusters requested but {roots} roots already exist")
    return k_clusters - roots


def labels_separated(t: InTree, sup: SupervisionSet) -> bool:
    """True when no root hosts two supervised points with different labels.

    Roots are chased sequentially on the current structure; the structure
    is held fixed for the duration of the check.
    """
    seen: dict[int, str] = {}
    for i, lab in zip(sup.indices, sup.labels):
        r = find_root_sequential(t, int(i))
        if r in seen and seen[r] != lab:
            return False
        seen.setdefault(r, str(lab))
    return True


def supervised_cut(t: InTree, sup: SupervisionSet) -> InTree:
    """Cut longest-first until differently labeled points split apart.

    Each iteration checks the separation predicate and, while it fails,
    removes the longest remaining edge. Full dismemberment separates every
    pair, so at most n - 1 cuts happen.
    """
    sup.check_range(t.n)
    while not labels_separated(t, sup):
        order = _descending_edge_order(t)
        if order.size == 0:
            break
        cut_edge(t, int(order[0]), "supervised")
    return t


def identify_edge_by_click(t: InTree, positions: np.ndarray, c: ClickPoint) -> int:
    """Start vertex of the edge a 2-D click designates.

    For each uncut edge u -> v the deflection angle is the turn a traveler
    makes going u -> click -> v: zero when the click lies on the segment,
    pi when it lies on the extension beyond v. The edge minimizing the
    angle wins; ties go to the smaller start vertex. The click point's
    distance is deliberately not weighed in.
    """
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise ValueError("click cutting needs 2-D positions (n, 2)")
    starts = t.finite_edge_starts()
    if starts.size == 0:
        raise ValueError("no edges remain to cut")
    click = np.array([c.x, c.y])
    a = click[None, :] - positions[starts]
    b = positions[t.target[starts]] - click[None, :]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1]
    theta = np.arctan2(np.abs(cross), dot)  # in [0, pi]; atan2(0, 0) = 0
    return int(starts[np.argmin(theta)])


def deflection_angle(p_start: np.ndarray, p_end: np.ndarray, c: ClickPoint) -> float:
    """Deflection of the path start -> click -> end, in [0, pi]."""
    a = np.array([c.x, c.y]) - np.asarray(p_start, dtype=np.float64)
    b = np.asarray(p_end, dtype=np.float64) - np.array([c.x, c.y])
    return float(np.arctan2(abs(a[0] * b[1] - a[1] * b[0]), a @ b))


def decision_graph(t: InTree, pf: PotentialField) -> list[DecisionGraphPoint]:
    """One scatter point per vertex; roots keep ABSENT weight and gamma."""
    points = []
    for i in range(t.n):
        w = float(t.weight[i])
        absp = abs(float(pf.p[i]))
        g = w * absp if np.isfinite(w) else ABSENT
        points.append(DecisionGraphPoint(index=i, abs_potential=absp,
                                         edge_weight=w, gamma=g))
    return points


def int_dcc_cut_select(dg: list[DecisionGraphPoint],
                       p_min: float, p_max: float,
                       w_min: float, w_max: float) -> list[int]:
    """Vertices whose (|potential|, weight) point lies in the closed box.

    Root vertices have no weight coordinate and can never be selected.
    """
    if not (w_min <= w_max and p_min <= p_max):
        raise ValueError("box bounds must satisfy min <= max")
    return [pt.index for pt in dg
            if np.isfinite(pt.edge_weight)
            and p_min <= pt.abs_potential <= p_max
            and w_min <= pt.edge_weight <= w_max]


def k_dcc_cut(t: InTree, pf: PotentialField, k_clusters: int) -> InTree:
    """Cut the edges with the largest weight * |potential| products."""
    m = _cuts_needed(t, k_clusters)
    starts = t.finite_edge_starts()
    gamma = t.weight[starts] * np.abs(pf.p[starts])
    order = starts[np.lexsort((starts, -gamma))]
    for i in order[:m]:
        cut_edge(t, int(i), "k-dcc")
    return t
