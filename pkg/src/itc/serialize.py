"""File formats: tree JSON, assignment CSV, supervision CSV, report JSON,
permutation-statistics CSV.

All indices in files are 1-based. JSON floats go through Python's repr,
which round-trips 64-bit values exactly; tie semantics downstream depend
on that fidelity.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data_model import ABSENT, ClusterAssignment, CutRecord, InTree, SupervisionSet
from .pipeline import EvalReport, PermutationStats


@dataclass
class TreeDocument:
    """An in-tree plus the context needed to keep working on it."""

    tree: InTree
    sigma: float
    potentials: np.ndarray
    coords: np.ndarray | None  # (n, 2) or None


def tree_to_dict(doc: TreeDocument) -> dict:
    t = doc.tree
    edges = [{"from": int(i) + 1, "to": int(t.target[i]) + 1, "w": float(t.weight[i])}
             for i in t.finite_edge_starts()]
    return {
        "n": t.n,
        "sigma": float(doc.sigma),
        "coords": None if doc.coords is None else [[float(x), float(y)] for x, y in doc.coords],
        "potentials": [float(v) for v in doc.potentials],
        "edges": edges,
        "roots": [int(r) + 1 for r in t.roots()],
        "cut_log": [{"from": c.vertex + 1, "prev_to": c.prev_target + 1,
                     "prev_w": float(c.prev_weight), "method": c.method,
                     "restored": bool(c.restored)}
                    for c in t.cut_log],
    }


def tree_from_dict(data: dict) -> TreeDocument:
    try:
        n = int(data["n"])
        sigma = float(data["sigma"])
        potentials = np.asarray(data["potentials"], dtype=np.float64)
        edges = data["edges"]
        roots = data["roots"]
        cut_log = data.get("cut_log", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed tree document: {exc}") from None
    if n < 1 or potentials.shape[0] != n:
        raise ValueError("malformed tree document: inconsistent n")
    target = np.arange(n, dtype=np.int64)
    weight = np.full(n, ABSENT, dtype=np.float64)
    for e in edges:
        i = int(e["from"]) - 1
        target[i] = int(e["to"]) - 1
        weight[i] = float(e["w"])
    declared_roots = {int(r) - 1 for r in roots}
    actual_roots = set(np.flatnonzero(np.isnan(weight)).tolist())
    if declared_roots != actual_roots:
        raise ValueError("malformed tree document: roots disagree with edges")
    log = [CutRecord(vertex=int(c["from"]) - 1, prev_target=int(c["prev_to"]) - 1,
                     prev_weight=float(c["prev_w"]), method=str(c["method"]),
                     restored=bool(c.get("restored", False)))
           for c in cut_log]
    coords = data.get("coords")
    coords_arr = None if coords is None else np.asarray(coords, dtype=np.float64)
    if coords_arr is not None and coords_arr.shape != (n, 2):
        raise ValueError("malformed tree document: coords must be (n, 2)")
    return TreeDocument(tree=InTree(target=target, weight=weight, cut_log=log),
                        sigma=sigma, potentials=potentials, coords=coords_arr)


def save_tree(doc: TreeDocument, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tree_to_dict(doc), indent=1), encoding="utf-8")


def load_tree(path: str | Path) -> TreeDocument:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    return tree_from_dict(data)


def save_assignment_csv(a: ClusterAssignment, path: str | Path) -> None:
    """Rows of index,root,cluster_label (label cell empty when unlabeled)."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["index", "root", "cluster_label"])
        for i in range(a.n):
            r = int(a.root_of[i])
            w.writerow([i + 1, r + 1, a.cluster_label.get(r, "")])


def load_assignment_csv(path: str | Path) -> ClusterAssignment:
    root_of = []
    labels: dict[int, str] = {}
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if rows and rows[0][:2] == ["index", "root"]:
        rows = rows[1:]
    for row in rows:
        root = int(row[1]) - 1
        root_of.append(root)
        if len(row) > 2 and row[2]:
            labels[root] = row[2]
    arr = np.asarray(root_of, dtype=np.int64)
    clusters = {int(r): np.flatnonzero(arr == r) for r in np.unique(arr)}
    return ClusterAssignment(root_of=arr, clusters=clusters, cluster_label=labels)


def load_supervision_csv(path: str | Path) -> SupervisionSet:
    """Rows of index,label with 1-based indices; an optional header allowed."""
    pairs = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.reader(f):
            if not row or row[0].strip() == "index":
                continue
            pairs.append((int(row[0]) - 1, row[1].strip()))
    if not pairs:
        raise ValueError(f"{path}: no supervision entries")
    return SupervisionSet.from_pairs(pairs)


def save_supervision_csv(sup: SupervisionSet, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["index", "label"])
        for i, lab in zip(sup.indices, sup.labels):
            w.writerow([int(i) + 1, str(lab)])


def report_to_dict(rep: EvalReport) -> dict:
    return {
        "cluster_count": rep.cluster_count,
        "error_rate": rep.error_rate,
        "unassigned_fraction": rep.unassigned_fraction,
        "rounds_used": rep.rounds_used,
        "height": rep.height,
        "per_cluster": [{"root": c.root + 1, "size": c.size, "label": c.label}
                        for c in rep.per_cluster],
    }


def save_report_json(rep: EvalReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report_to_dict(rep), indent=1), encoding="utf-8")


def save_permutation_csv(stats: PermutationStats, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["trial", "disagreement"])
        for k, v in enumerate(stats.disagreements, start=1):
            w.writerow([k, float(v)])


def decision_graph_to_list(dg) -> list[dict]:
    """JSON shape for the (|P|, W) scatter; roots carry w: null."""
    return [{"index": pt.index + 1, "absP": pt.abs_potential,
             "w": pt.edge_weight if np.isfinite(pt.edge_weight) else None}
            for pt in dg]
