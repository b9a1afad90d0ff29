from __future__ import annotations

import numpy as np
import pytest

from itc.data_model import ABSENT, AttributeSpec, Dataset, DistanceMatrix, \
    InTree, PotentialField
from itc.intree import build_intree
from itc.metrics import euclidean_distance_matrix
from itc.potential import compute_potentials

# Frozen implementation potentials for the five-point 1-D fixture
# X = {0, 1, 2, 10, 11}, sigma = 1; verified against a high-precision
# summation oracle in test_potential.py (agreement within 2 ulp).
D1_X = np.array([0.0, 1.0, 2.0, 10.0, 11.0])
D1_POTENTIALS = np.array([
    -1.5032768260386078,
    -1.735927692076734,
    -1.503673596840044,
    -1.368383713533194,
    -1.3680649526060817,
])
D1_TRUTH = np.array(["A", "A", "A", "B", "B"])


def numeric_dataset(x: np.ndarray, truth=None) -> Dataset:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    schema = tuple(AttributeSpec("num", f"x{j}") for j in range(x.shape[1]))
    return Dataset(numeric=x, categorical=np.empty((x.shape[0], 0), dtype=str),
                   schema=schema,
                   truth_labels=None if truth is None else np.asarray(truth, dtype=str),
                   label_name=None if truth is None else "class")


def categorical_dataset(rows: list[list[str]], truth=None) -> Dataset:
    arr = np.asarray(rows, dtype=str)
    schema = tuple(AttributeSpec("cat", f"a{j}") for j in range(arr.shape[1]))
    return Dataset(numeric=np.empty((arr.shape[0], 0)), categorical=arr,
                   schema=schema,
                   truth_labels=None if truth is None else np.asarray(truth, dtype=str),
                   label_name=None if truth is None else "class")


@pytest.fixture
def d1_dataset() -> Dataset:
    return numeric_dataset(D1_X, truth=D1_TRUTH)


@pytest.fixture
def d1_matrices(d1_dataset):
    dm = euclidean_distance_matrix(d1_dataset)
    pf = compute_potentials(dm, 1.0)
    return dm, pf


@pytest.fixture
def d1_tree(d1_matrices) -> InTree:
    dm, pf = d1_matrices
    return build_intree(dm, pf)


def table_s4_inputs() -> tuple[DistanceMatrix, PotentialField]:
    """Five points on a line at x = (0, 3, 1, 1, 1.5) with hand-set
    potential ordering p1 > p2 = p3 = p4 > p5 (points 3 and 4 coincide)."""
    x = np.array([0.0, 3.0, 1.0, 1.0, 1.5])
    d = np.abs(x[:, None] - x[None, :])
    p = np.array([-1.1, -1.3, -1.3, -1.3, -1.7])
    return DistanceMatrix(d), PotentialField(p=p, sigma=1.0)


def blob_dataset(rng: np.random.Generator, centers, n_per: int, std: float,
                 shuffle: bool = True) -> Dataset:
    """Gaussian blobs with truth labels; rows shuffled unless told not to."""
    centers = np.asarray(centers, dtype=np.float64)
    pts = np.concatenate([rng.normal(c, std, size=(n_per, centers.shape[1]))
                          for c in centers])
    labels = np.concatenate([[f"c{k}"] * n_per for k in range(len(centers))])
    if shuffle:
        perm = rng.permutation(len(pts))
        pts, labels = pts[perm], labels[perm]
    return numeric_dataset(pts, truth=labels)


def random_forest(rng: np.random.Generator, n: int, n_roots: int = 1) -> InTree:
    """A random valid in-tree forest: vertices ordered randomly, each
    non-root targets an earlier vertex of its component."""
    order = rng.permutation(n)
    comp = rng.integers(0, n_roots, size=n)
    comp[order[:n_roots]] = np.arange(n_roots)  # each component gets a root
    target = np.arange(n, dtype=np.int64)
    weight = np.full(n, ABSENT, dtype=np.float64)
    seen_by_comp: dict[int, list[int]] = {}
    for v in order:
        c = int(comp[v])
        prior = seen_by_comp.setdefault(c, [])
        if prior:
            target[v] = prior[rng.integers(0, len(prior))]
            weight[v] = float(rng.uniform(0.0, 10.0))
        prior.append(int(v))
    return InTree(target=target, weight=weight)


def chain_tree(height: int, extra_star: int = 0) -> InTree:
    """A directed path of `height` edges into the root, plus optional
    star vertices hanging off the root."""
    n = height + 1 + extra_star
    target = np.arange(n, dtype=np.int64)
    weight = np.full(n, ABSENT, dtype=np.float64)
    for v in range(1, height + 1):
        target[v] = v - 1
        weight[v] = 1.0
    for v in range(height + 1, n):
        target[v] = 0
        weight[v] = 1.0
    return InTree(target=target, weight=weight)
