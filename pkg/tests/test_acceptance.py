"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with -s to watch them stream)."""

import math
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import D1_POTENTIALS, blob_dataset, numeric_dataset, table_s4_inputs
from itc.cli import main as cli_main
from itc.cutting import cut_edge, cut_k_longest, labels_separated, supervised_cut
from itc.data_model import InTree, SupervisionSet, load_dataset
from itc.intree import build_intree, validate_intree
from itc.metrics import categorical_distance_matrix, euclidean_distance_matrix
from itc.pipeline import RunConfig, permutation_experiment, supervised_sweep
from itc.potential import compute_potentials
from itc.rootfind import (compute_tree_height, find_root_sequential,
                          find_roots_doubling, merge_singletons)

DATA = Path(__file__).resolve().parent.parent / "data"


@contextmanager
def criterion(num: int, desc: str):
    try:
        yield
    except BaseException:
        print(f"[criterion {num}] FAIL {desc}")
        raise
    print(f"[criterion {num}] PASS {desc}")


# --- 1: in-tree theorem sweep -------------------------------------------------

def test_criterion_1_intree_theorem_sweep():
    with criterion(1, "build+validate clean on 200 randomized datasets"):
        rng = np.random.default_rng(777)
        dup_cases = 0
        for trial in range(200):
            n = int(rng.integers(2, 2001))
            dims = int(rng.integers(1, 11))
            x = rng.standard_normal((n, dims)) * rng.uniform(1e-2, 1e2)
            if trial % 4 != 3 and n >= 4:
                k = int(rng.integers(1, max(2, n // 8)))
                x[rng.integers(0, n, size=k)] = x[rng.integers(0, n, size=k)]
                dup_cases += 1
            sigma = float(10 ** rng.uniform(-3, 3))
            dm = euclidean_distance_matrix(numeric_dataset(x))
            t = build_intree(dm, compute_potentials(dm, sigma))
            assert validate_intree(t) == []
        assert dup_cases >= 40  # duplicates forced in >= 20% of cases


# --- 2: five-point tie-breaking golden test -----------------------------------

def test_criterion_2_five_point_golden():
    with criterion(2, "five-point tie configuration links as I=[3,5,5,3,5]"):
        dm, pf = table_s4_inputs()
        t = build_intree(dm, pf)
        assert (t.target + 1).tolist() == [3, 5, 5, 3, 5]
        assert math.isnan(t.weight[4])  # the root's weight is ABSENT, exactly


# --- 3: doubling-rounds law ----------------------------------------------------

def _forest_of_height(rng: np.random.Generator, height: int, extra: int) -> InTree:
    n = height + 1 + extra
    target = np.arange(n, dtype=np.int64)
    weight = np.full(n, np.nan)
    depth = np.zeros(n, dtype=np.int64)
    for v in range(1, height + 1):
        target[v] = v - 1
        weight[v] = 1.0
        depth[v] = v
    for v in range(height + 1, n):
        shallow = np.flatnonzero(depth[:v] < height)
        parent = int(shallow[rng.integers(0, shallow.size)])
        target[v] = parent
        weight[v] = 1.0
        depth[v] = depth[parent] + 1
    return InTree(target=target, weight=weight)


def test_criterion_3_rounds_match_height_law():
    heights = [4, 12, 14, 15, 16, 20, 31, 43, 48, 165]
    expected = [2, 4, 4, 4, 4, 5, 5, 6, 6, 8]
    with criterion(3, "rounds_used equals ceil(log2 H) on the reference heights"):
        rng = np.random.default_rng(5)
        for h, s in zip(heights, expected):
            t = _forest_of_height(rng, h, extra=int(rng.integers(5, 40)))
            assert compute_tree_height(t) == h
            a = find_roots_doubling(t)
            assert a.rounds_used == s
            for v in range(t.n):  # doubling result equals the sequential oracle
                assert a.root_of[v] == find_root_sequential(t, v)


# --- 4: mushroom reproduction ----------------------------------------------------

@pytest.fixture(scope="module")
def mushroom():
    path = DATA / "mushroom.csv"
    if not path.exists():
        pytest.fail(f"mushroom dataset missing at {path}; "
                    "run scripts/fetch_mushroom.py to retrieve it")
    ds = load_dataset(path)
    assert ds.n == 8124 and len(ds.schema) == 22
    return ds, categorical_distance_matrix(ds)


SIGMA_GRID = [0.001, 1.0, 10.0, 100.0, 1000.0]


def test_criterion_4_mushroom_supervised(mushroom):
    ds, dm = mushroom
    with criterion(4, "mushroom supervised cutting across the sigma grid"):
        rows200 = supervised_sweep(ds, dm, SIGMA_GRID, n_supervised=200,
                                   trials=20, seed=0)
        for r in rows200:
            assert r.mean_error < 0.02, (r.sigma, r.mean_error)
            assert 3.0 <= r.mean_clusters <= 12.0, (r.sigma, r.mean_clusters)
        rows800 = supervised_sweep(ds, dm, SIGMA_GRID, n_supervised=800,
                                   trials=20, seed=0)
        for r in rows800:
            assert r.mean_error < 0.005, (r.sigma, r.mean_error)
        near_three = sum(1 for r in rows800 if 2.0 <= r.mean_clusters <= 6.0)
        assert near_three >= 4, [(r.sigma, r.mean_clusters) for r in rows800]


# --- 5: permutation robustness ----------------------------------------------------

def _tie_heavy_dataset():
    # fifteen wide-area Gaussian groups; at sigma=10 almost every pairwise
    # contribution underflows, so most potentials tie exactly at -1
    rng = np.random.default_rng(2024)
    centers = rng.uniform(1.0e5, 8.5e5, size=(15, 2))
    sizes = [334 if i < 5 else 333 for i in range(15)]
    pts = np.concatenate([rng.normal(c, 2.0e4, size=(s, 2))
                          for c, s in zip(centers, sizes)])
    return numeric_dataset(pts[rng.permutation(len(pts))])


def test_criterion_5_permutation_robustness():
    with criterion(5, "K-cut partitions stable under 50 row permutations"):
        ds = _tie_heavy_dataset()
        dm = euclidean_distance_matrix(ds)
        pf = compute_potentials(dm, 10.0)
        distinct = np.unique(pf.p).size / ds.n
        assert distinct < 0.05, distinct
        cfg = RunConfig(sigma=10.0, cut_method="k", k_clusters=15, seed=7)
        stats = permutation_experiment(ds, cfg, trials=50)
        assert stats.mean <= 0.02, (stats.mean, stats.sd)

        # all-distinct potentials: exactly zero disagreement
        rng = np.random.default_rng(3)
        small = blob_dataset(rng, [[0, 0], [30, 0], [15, 25]], n_per=60, std=1.0)
        dm2 = euclidean_distance_matrix(small)
        assert np.unique(compute_potentials(dm2, 2.0).p).size == small.n
        cfg2 = RunConfig(sigma=2.0, cut_method="k", k_clusters=3, seed=11)
        stats2 = permutation_experiment(small, cfg2, trials=10)
        assert np.all(stats2.disagreements == 0.0)


# --- 6: cutting equivalences and minimality -------------------------------------

def test_criterion_6_cut_equivalences_and_minimality():
    with criterion(6, "K-cut multiset oracle and supervised-cut minimality, 50 datasets"):
        rng = np.random.default_rng(60)
        for _ in range(50):
            k_blobs = int(rng.integers(2, 6))
            centers = rng.uniform(-50, 50, size=(k_blobs, 2))
            ds = blob_dataset(rng, centers, n_per=int(rng.integers(10, 30)),
                              std=float(rng.uniform(0.4, 1.5)))
            dm = euclidean_distance_matrix(ds)
            base = build_intree(dm, compute_potentials(dm, float(rng.uniform(0.5, 4))))

            t = base.copy()
            k = int(rng.integers(2, 9))
            heaviest = np.sort(t.weight[t.finite_edge_starts()])[::-1][:k - 1]
            cut_k_longest(t, k)
            removed = sorted((c.prev_weight for c in t.cut_log), reverse=True)
            assert removed == heaviest.tolist()

            n_sup = int(rng.integers(2, 10))
            idx = np.sort(rng.choice(ds.n, size=n_sup, replace=False))
            sup = SupervisionSet(indices=idx, labels=ds.truth_labels[idx])
            t2 = base.copy()
            supervised_cut(t2, sup)
            assert labels_separated(t2, sup)
            seq = [c.vertex for c in t2.cut_log]
            for prefix_len in range(len(seq)):
                probe = base.copy()
                for v in seq[:prefix_len]:
                    cut_edge(probe, v, "replay")
                assert not labels_separated(probe, sup)


# --- 7: command-line golden run ---------------------------------------------------

def test_criterion_7_cli_golden_run(tmp_path):
    with criterion(7, "build -> cut k=2 -> cluster -> eval reproduces the fixtures"):
        runner = CliRunner()
        tree = tmp_path / "tree.json"
        cut = tmp_path / "cut.json"
        assign = tmp_path / "assign.csv"
        report = tmp_path / "report.json"

        r = runner.invoke(cli_main, ["build", "--input", str(DATA / "d1.csv"),
                                     "--sigma", "1", "--out", str(tree)])
        assert r.exit_code == 0, r.output
        import json
        doc = json.loads(tree.read_text())
        assert doc["potentials"] == D1_POTENTIALS.tolist()  # bit-for-bit
        assert {e["from"]: (e["to"], e["w"]) for e in doc["edges"]} == \
            {1: (2, 1.0), 3: (2, 1.0), 4: (3, 8.0), 5: (4, 1.0)}
        assert doc["roots"] == [2]

        r = runner.invoke(cli_main, ["cut", "--tree", str(tree), "--method", "k",
                                     "--k", "2", "--out", str(cut)])
        assert r.exit_code == 0, r.output
        cdoc = json.loads(cut.read_text())
        assert [(c["from"], c["prev_to"], c["prev_w"]) for c in cdoc["cut_log"]] == \
            [(4, 3, 8.0)]
        assert sorted(cdoc["roots"]) == [2, 4]

        r = runner.invoke(cli_main, ["cluster", "--tree", str(cut), "--out", str(assign)])
        assert r.exit_code == 0, r.output
        assert assign.read_text().splitlines() == [
            "index,root,cluster_label", "1,2,", "2,2,", "3,2,", "4,4,", "5,4,"]

        r = runner.invoke(cli_main, ["eval", "--input", str(DATA / "d1.csv"),
                                     "--assignments", str(assign),
                                     "--tree", str(cut), "--out", str(report)])
        assert r.exit_code == 0, r.output
        rep = json.loads(report.read_text())
        assert rep["error_rate"] == 0.0
        assert rep["cluster_count"] == 2
        assert rep["height"] == 1


# --- 8: singleton merging ---------------------------------------------------------

def test_criterion_8_merge_singletons(d1_tree):
    with criterion(8, "singleton re-rooting shrinks over-cut partitions, no orphans"):
        cut_k_longest(d1_tree, 3)
        a = find_roots_doubling(d1_tree)
        _, merged = merge_singletons(d1_tree, a)
        assert merged.cluster_count == 2

        rng = np.random.default_rng(80)
        shrunk = 0
        for _ in range(12):
            ds = blob_dataset(rng, rng.uniform(-40, 40, size=(3, 2)),
                              n_per=20, std=0.5)
            dm = euclidean_distance_matrix(ds)
            t = build_intree(dm, compute_potentials(dm, 1.0))
            cut_k_longest(t, int(rng.integers(15, 35)))
            a = find_roots_doubling(t)
            singles = sum(1 for m in a.clusters.values() if m.size == 1)
            before = a.cluster_count
            t, a2 = merge_singletons(t, a)
            members = np.sort(np.concatenate(list(a2.clusters.values())))
            assert np.array_equal(members, np.arange(ds.n))  # never orphans
            if singles:
                assert a2.cluster_count < before
                shrunk += 1
        assert shrunk >= 8  # the sweep genuinely exercised over-cut trees
