"""Root finding by successor doubling, its sequential oracle, tree height,
and singleton re-rooting.

The doubling update squares the successor map in parallel: after t rounds
every point targets its 2^t-th successor (clamped at the root, which is a
fixed point thanks to its self-loop). A forest of height H therefore
converges in ceil(log2 H) rounds; the final no-change detection pass is
not counted as a round.
"""

from __future__ import annotations

import math

import numpy as np

from .data_model import ClusterAssignment, InTree
from .intree import restore_edge


class CycleError(RuntimeError):
    """The successor map failed to converge: the graph is not a forest."""


def _cluster_dict(root_of: np.ndarray) -> dict[int, np.ndarray]:
    order = np.argsort(root_of, kind="stable")
    sorted_roots = root_of[order]
    boundaries = np.flatnonzero(np.diff(sorted_roots)) + 1
    return {int(root_of[g[0]]): np.sort(g) for g in np.split(order, boundaries)}


def find_roots_doubling(t: InTree) -> ClusterAssignment:
    """Converge all points to their roots via parallel successor squaring.

    Each round reads a frozen snapshot of the map and writes a fresh one
    (double-buffered), so all n updates of a round are independent.
    Raises CycleError if the map keeps changing past the ceil(log2 n) + 1
    bound any forest must respect.
    """
    n = t.n
    succ = t.target.copy()
    limit = (math.ceil(math.log2(n)) if n > 1 else 0) + 1
    rounds = 0
    while True:
        nxt = succ[succ]
        if np.array_equal(nxt, succ):
            break
        succ = nxt
        rounds += 1
        if rounds > limit:
            raise CycleError(f"no convergence after {rounds} doubling rounds")
    return ClusterAssignment(root_of=succ, clusters=_cluster_dict(succ),
                             rounds_used=rounds)


def find_root_sequential(t: InTree, i: int) -> int:
    """Chase targets one hop at a time until the self-loop; the brute-force
    oracle for find_roots_doubling."""
    n = t.n
    if not 0 <= i < n:
        raise IndexError(f"vertex {i} out of range")
    v = i
    for _ in range(n + 1):
        nxt = int(t.target[v])
        if nxt == v:
            return v
        v = nxt
    raise CycleError(f"walk from vertex {i} exceeded {n} hops")


def compute_tree_height(t: InTree) -> int:
    """Maximum hop count from any vertex to its root; 0 iff all roots."""
    n = t.n
    depth = np.full(n, -1, dtype=np.int64)
    depth[t.target == np.arange(n)] = 0
    for start in range(n):
        if depth[start] >= 0:
            continue
        path = []
        v = start
        while depth[v] < 0:
            path.append(v)
            if len(path) > n:
                raise CycleError(f"walk from vertex {start} exceeded {n} hops")
            v = int(t.target[v])
        base = depth[v]
        for k, u in enumerate(reversed(path), start=1):
            depth[u] = base + k
    return int(depth.max()) if n else 0


def merge_singletons(t: InTree, a: ClusterAssignment) -> tuple[InTree, ClusterAssignment]:
    """Reattach singleton clusters through the edges they lost to cutting.

    Every root whose cluster has exactly one member gets its pre-cut edge
    restored (roots that were never cut keep nothing to restore and stay).
    Repeats, ascending vertex order within each pass, until no singleton
    has a restorable edge. Cluster count never increases.
    """
    while True:
        singles = sorted(r for r, members in a.clusters.items() if members.size == 1)
        todo = [r for r in singles if _has_unrestored_cut(t, r)]
        if not todo:
            return t, a
        for r in todo:
            restore_edge(t, r)
        a = find_roots_doubling(t)


def _has_unrestored_cut(t: InTree, vertex: int) -> bool:
    return any(rec.vertex == vertex and not rec.restored for rec in t.cut_log)
