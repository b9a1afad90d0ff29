"""End-to-end orchestration: distances -> potentials -> tree -> cut ->
roots -> optional merges -> evaluation, plus the robustness experiments
(index-permutation harness and supervised sigma sweep)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .cutting import cut_k_longest, k_dcc_cut, supervised_cut
from .data_model import (ClusterAssignment, Dataset, DistanceMatrix, InTree,
                         SupervisionSet)
from .intree import build_intree
from .metrics import distance_matrix_for
from .potential import auto_sigma, compute_potentials
from .rootfind import compute_tree_height, find_roots_doubling, merge_singletons

AUTO = "auto"

CUT_METHODS = ("k", "supervised", "kdcc", "interactive", "int-dcc")
_INTERACTIVE = ("interactive", "int-dcc")


@dataclass
class RunConfig:
    sigma: float | str = AUTO
    cut_method: str = "k"
    k_clusters: int | None = None
    supervision: SupervisionSet | None = None
    n_supervised: int | None = None   # sample this many labeled points per seed
    merge_singletons: bool = False
    merge_by_label: bool = False
    seed: int = 0

    def validate(self) -> None:
        if self.cut_method not in CUT_METHODS:
            raise ValueError(f"unknown cut method {self.cut_method!r}")
        if self.cut_method in ("k", "kdcc") and self.k_clusters is None:
            raise ValueError(f"method {self.cut_method!r} needs k_clusters")
        if self.cut_method == "supervised" and self.supervision is None \
                and self.n_supervised is None:
            raise ValueError("supervised method needs supervision or n_supervised")
        if self.cut_method in _INTERACTIVE:
            raise ValueError(
                f"method {self.cut_method!r} is interactive; use the serve session")


@dataclass
class ClusterSummary:
    root: int          # 1-based in serialized form, 0-based here
    size: int
    label: str | None


@dataclass
class EvalReport:
    cluster_count: int
    error_rate: float | None
    unassigned_fraction: float
    per_cluster: list[ClusterSummary]
    rounds_used: int
    height: int


def sample_supervision(ds: Dataset, n: int, seed: int) -> SupervisionSet:
    """Pick n points uniformly without replacement, labeled by their truth."""
    if ds.truth_labels is None:
        raise ValueError("cannot sample supervision: dataset has no truth labels")
    if not 0 < n <= ds.n:
        raise ValueError(f"cannot sample {n} supervised points from {ds.n}")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(ds.n, size=n, replace=False))
    return SupervisionSet(indices=idx, labels=ds.truth_labels[idx])


def run(ds: Dataset, cfg: RunConfig,
        dm: DistanceMatrix | None = None) -> tuple[InTree, ClusterAssignment, EvalReport]:
    """Execute the full clustering pipeline for one configuration.

    Deterministic given the dataset row order, cfg, and seed. A
    precomputed distance matrix may be supplied (cache path).
    """
    cfg.validate()
    if dm is None:
        dm = distance_matrix_for(ds)
    sigma = auto_sigma(dm) if cfg.sigma == AUTO else float(cfg.sigma)
    pf = compute_potentials(dm, sigma)
    t = build_intree(dm, pf)

    sup = cfg.supervision
    if cfg.cut_method == "k":
        cut_k_longest(t, cfg.k_clusters)
    elif cfg.cut_method == "kdcc":
        k_dcc_cut(t, pf, cfg.k_clusters)
    elif cfg.cut_method == "supervised":
        if sup is None:
            sup = sample_supervision(ds, cfg.n_supervised, cfg.seed)
        supervised_cut(t, sup)

    a = find_roots_doubling(t)
    if cfg.merge_singletons:
        t, a = merge_singletons(t, a)
    if cfg.merge_by_label and sup is not None:
        a = merge_by_label(a, sup)

    height = compute_tree_height(t)
    if ds.truth_labels is not None:
        report = evaluate(a, ds.truth_labels, sup, height=height)
    else:
        report = EvalReport(
            cluster_count=a.cluster_count, error_rate=None, unassigned_fraction=0.0,
            per_cluster=[ClusterSummary(int(r), int(m.size), a.cluster_label.get(int(r)))
                         for r, m in sorted(a.clusters.items())],
            rounds_used=a.rounds_used, height=height)
    return t, a, report


def merge_by_label(a: ClusterAssignment, sup: SupervisionSet) -> ClusterAssignment:
    """Union clusters that contain supervised points with the same label.

    Requires at most one distinct supervised label per cluster (which a
    completed supervised cut guarantees); the smallest root represents the
    merged cluster and carries the label.
    """
    label_in: dict[int, str] = {}
    for i, lab in zip(sup.indices, sup.labels):
        r = int(a.root_of[i])
        if r in label_in and label_in[r] != lab:
            raise ValueError(
                f"cluster at root {r} holds two supervised labels "
                f"({label_in[r]!r}, {str(lab)!r}); not a completed supervised cut")
        label_in[r] = str(lab)

    rep_for_label: dict[str, int] = {}
    for r in sorted(label_in):
        rep_for_label.setdefault(label_in[r], r)

    root_map = {r: rep_for_label[lab] for r, lab in label_in.items()}
    new_root_of = a.root_of.copy()
    new_clusters: dict[int, np.ndarray] = {}
    new_labels: dict[int, str] = {}
    for r, members in a.clusters.items():
        dest = root_map.get(int(r), int(r))
        if dest in new_clusters:
            new_clusters[dest] = np.sort(np.concatenate([new_clusters[dest], members]))
        else:
            new_clusters[dest] = members
        if int(r) in label_in:
            new_labels[dest] = label_in[int(r)]
        new_root_of[members] = dest
    return ClusterAssignment(root_of=new_root_of, clusters=new_clusters,
                             cluster_label=new_labels, rounds_used=a.rounds_used)


def _majority(labels: list[str]) -> str:
    """Most frequent label; ties resolve to the lexicographically smallest."""
    counts = Counter(labels)
    return min(counts, key=lambda lab: (-counts[lab], lab))


def evaluate(a: ClusterAssignment, truth: np.ndarray,
             sup: SupervisionSet | None = None, height: int = 0) -> EvalReport:
    """Score an assignment against per-point truth labels.

    Each cluster predicts its supervised label when it has one, otherwise
    the majority truth label of its members; the error rate is the
    fraction of points whose cluster prediction differs from their truth.
    Every point belongs to a cluster, so unassigned_fraction is zero under
    this convention (reported for comparability with stricter ones).
    """
    truth = np.asarray(truth, dtype=str)
    sup_labels_in: dict[int, list[str]] = {}
    if sup is not None:
        for i, lab in zip(sup.indices, sup.labels):
            sup_labels_in.setdefault(int(a.root_of[i]), []).append(str(lab))

    predicted: dict[int, str] = {}
    summaries: list[ClusterSummary] = []
    for r, members in sorted(a.clusters.items()):
        r = int(r)
        if r in sup_labels_in:
            lab = _majority(sup_labels_in[r])
        else:
            lab = _majority([str(x) for x in truth[members]])
        predicted[r] = lab
        summaries.append(ClusterSummary(root=r, size=int(members.size), label=lab))

    pred_per_point = np.array([predicted[int(r)] for r in a.root_of])
    error_rate = float(np.mean(pred_per_point != truth))
    return EvalReport(cluster_count=a.cluster_count, error_rate=error_rate,
                      unassigned_fraction=0.0, per_cluster=summaries,
                      rounds_used=a.rounds_used, height=height)


def partition_disagreement(ref_labels: np.ndarray, other_labels: np.ndarray) -> float:
    """Fraction of points whose cluster, mapped to its majority reference
    cluster, lands on the wrong reference cluster."""
    ref_labels = np.asarray(ref_labels)
    other_labels = np.asarray(other_labels)
    mapped = np.empty_like(ref_labels)
    for c in np.unique(other_labels):
        members = other_labels == c
        vals, counts = np.unique(ref_labels[members], return_counts=True)
        mapped[members] = vals[np.argmax(counts)]  # first max = smallest id
    return float(np.mean(mapped != ref_labels))


@dataclass
class PermutationStats:
    disagreements: np.ndarray  # one per trial; trial 1 is the benchmark (0.0)
    mean: float
    sd: float


def permutation_experiment(ds: Dataset, cfg: RunConfig, trials: int) -> PermutationStats:
    """Re-run K-cut clustering on random row permutations of the dataset.

    The first trial's partition is the benchmark; every later trial is
    mapped back to original indices and scored by partition_disagreement.
    Mean and sd summarize the non-benchmark trials.
    """
    if cfg.cut_method != "k":
        raise ValueError("permutation experiment is defined for the k method")
    rng = np.random.default_rng(cfg.seed)
    n = ds.n
    base_dm = distance_matrix_for(ds)
    results = []
    for _ in range(trials):
        perm = rng.permutation(n)
        # reindexing the matrix equals recomputing it on the permuted rows
        # (every entry is a pointwise function of its two records)
        dm_t = DistanceMatrix(base_dm.values[np.ix_(perm, perm)])
        _, a, _ = run(ds.permuted(perm), cfg, dm=dm_t)
        labels = np.empty(n, dtype=np.int64)
        labels[perm] = a.root_of  # back to original identity space
        results.append(labels)
    disagreements = np.zeros(trials, dtype=np.float64)
    for k in range(1, trials):
        disagreements[k] = partition_disagreement(results[0], results[k])
    rest = disagreements[1:]
    mean = float(rest.mean()) if rest.size else 0.0
    sd = float(rest.std(ddof=1)) if rest.size > 1 else 0.0
    return PermutationStats(disagreements=disagreements, mean=mean, sd=sd)


@dataclass
class SweepRow:
    sigma: float
    n_supervised: int
    mean_error: float
    sd_error: float
    mean_clusters: float
    sd_clusters: float
    trials: int = 0


def supervised_sweep(ds: Dataset, dm: DistanceMatrix, sigmas: list[float],
                     n_supervised: int, trials: int, seed: int = 0,
                     merge_labels: bool = True) -> list[SweepRow]:
    """Repeat supervised-cut trials over a sigma grid, resampling the
    labeled points each trial; one summary row per sigma.

    The tree for each sigma is built once and copied per trial (cutting
    mutates), which keeps a full sweep tractable at n ~ 10^4.
    """
    rows = []
    for sigma in sigmas:
        pf = compute_potentials(dm, sigma)
        base = build_intree(dm, pf)
        errors, counts = [], []
        for k in range(trials):
            sup = sample_supervision(ds, n_supervised, seed + k)
            t = base.copy()
            supervised_cut(t, sup)
            a = find_roots_doubling(t)
            if merge_labels:
                a = merge_by_label(a, sup)
            rep = evaluate(a, ds.truth_labels, sup)
            errors.append(rep.error_rate)
            counts.append(rep.cluster_count)
        err = np.asarray(errors)
        cnt = np.asarray(counts, dtype=np.float64)
        rows.append(SweepRow(
            sigma=float(sigma), n_supervised=n_supervised,
            mean_error=float(err.mean()), sd_error=float(err.std(ddof=1)) if trials > 1 else 0.0,
            mean_clusters=float(cnt.mean()), sd_clusters=float(cnt.std(ddof=1)) if trials > 1 else 0.0,
            trials=trials))
    return rows
